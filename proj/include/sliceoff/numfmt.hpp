#ifndef SLICEOFF_NUMFMT_HPP_
#define SLICEOFF_NUMFMT_HPP_

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sliceoff {

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
  double x = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  }
  return x;
}

}  // namespace sliceoff

#endif  // SLICEOFF_NUMFMT_HPP_
