#ifndef SLICEOFF_TESTS_FIXTURES_HPP_
#define SLICEOFF_TESTS_FIXTURES_HPP_

#include <cmath>
#include <initializer_list>
#include <vector>

#include "sliceoff/matrix.hpp"
#include "sliceoff/model.hpp"

namespace fixtures {

inline sliceoff::Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  sliceoff::Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

// N devices, A APs, C ECs, S slices with every field set to 1.
struct Builder {
  sliceoff::Matrix rate, match, ec;
  std::vector<double> data, complexity, local;

  Builder(std::size_t n, std::size_t a, std::size_t c, std::size_t s)
      : rate(n, a, 1.0), match(n, s, 1.0), ec(c, s, 1.0), data(n, 1.0), complexity(n, 1.0),
        local(n, 1.0) {}

  sliceoff::Scenario build() const {
    return sliceoff::Scenario(rate, data, complexity, match, local, ec);
  }
};

inline bool close(double x, double y, double rel = 1e-12) {
  return std::abs(x - y) <= rel * std::max(1.0, std::abs(y));
}

}  // namespace fixtures

#endif  // SLICEOFF_TESTS_FIXTURES_HPP_
