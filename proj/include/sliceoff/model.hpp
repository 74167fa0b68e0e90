#ifndef SLICEOFF_MODEL_HPP_
#define SLICEOFF_MODEL_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sliceoff/matrix.hpp"

namespace sliceoff {

// Problem instance. All quantities in SI base units: bits, bits/s,
// instructions, instructions/s, seconds.
//
// An EC capability of zero for (c, s) means EC c is not part of slice s.
class Scenario {
 public:
  // rate: N x A, match_coeff: N x S, ec_capability: C x S.
  // Throws std::invalid_argument when dimensions disagree or a positivity
  // invariant is violated.
  Scenario(Matrix rate, std::vector<double> data_size, std::vector<double> complexity,
           Matrix match_coeff, std::vector<double> local_capability, Matrix ec_capability);

  std::size_t num_devices() const { return data_size_.size(); }
  std::size_t num_aps() const { return rate_.cols(); }
  std::size_t num_ecs() const { return ec_capability_.rows(); }
  std::size_t num_slices() const { return match_coeff_.cols(); }

  double rate(std::size_t i, std::size_t a) const { return rate_(i, a); }
  double data_size(std::size_t i) const { return data_size_[i]; }
  double complexity(std::size_t i) const { return complexity_[i]; }
  double match_coeff(std::size_t i, std::size_t s) const { return match_coeff_(i, s); }
  double local_capability(std::size_t i) const { return local_capability_[i]; }
  double ec_capability(std::size_t c, std::size_t s) const { return ec_capability_(c, s); }
  bool ec_in_slice(std::size_t c, std::size_t s) const { return ec_capability_(c, s) > 0.0; }

  const Matrix& rate_matrix() const { return rate_; }
  const Matrix& match_matrix() const { return match_coeff_; }
  const Matrix& ec_capability_matrix() const { return ec_capability_; }
  const std::vector<double>& data_sizes() const { return data_size_; }
  const std::vector<double>& complexities() const { return complexity_; }
  const std::vector<double>& local_capabilities() const { return local_capability_; }

  bool operator==(const Scenario&) const = default;

 private:
  Matrix rate_;
  std::vector<double> data_size_;
  std::vector<double> complexity_;
  Matrix match_coeff_;
  std::vector<double> local_capability_;
  Matrix ec_capability_;
};

// A device's choice: compute locally, or offload through (ap, ec, slice).
// Ordering: Local first, then offloads lexicographically by (ap, ec, slice).
class Decision {
 public:
  constexpr Decision() = default;

  static constexpr Decision local() { return Decision{}; }
  static constexpr Decision offload(std::size_t ap, std::size_t ec, std::size_t slice) {
    Decision d;
    d.offload_ = true;
    d.ap_ = static_cast<std::uint32_t>(ap);
    d.ec_ = static_cast<std::uint32_t>(ec);
    d.slice_ = static_cast<std::uint32_t>(slice);
    return d;
  }

  constexpr bool is_local() const { return !offload_; }
  constexpr bool is_offload() const { return offload_; }
  constexpr std::size_t ap() const { return ap_; }
  constexpr std::size_t ec() const { return ec_; }
  constexpr std::size_t slice() const { return slice_; }

  constexpr auto operator<=>(const Decision&) const = default;

  // "local" or "ap:ec:slice".
  std::string to_string() const;
  // Inverse of to_string. Throws std::invalid_argument.
  static Decision parse(const std::string& text);

 private:
  bool offload_ = false;
  std::uint32_t ap_ = 0;
  std::uint32_t ec_ = 0;
  std::uint32_t slice_ = 0;
};

using DecisionVector = std::vector<Decision>;

// True iff d is Local or references in-range indices with the EC present in the slice.
bool is_valid(const Scenario& scenario, const Decision& d);

// Throws std::invalid_argument unless dv has one valid decision per device.
void validate(const Scenario& scenario, const DecisionVector& dv);

// Every valid decision of a device, in tie-break order (Local first).
std::vector<Decision> decision_options(const Scenario& scenario);

DecisionVector all_local(const Scenario& scenario);

// Congestion-game resource. ApSlice belongs to the fixed-inter-share resource
// set, Ap to the optimal-inter-share set; EcSlice and LocalWd belong to both.
struct ResourceId {
  enum class Kind : std::uint8_t { ApSlice, Ap, EcSlice, LocalWd };

  Kind kind;
  std::size_t first = 0;   // AP, EC or device index
  std::size_t second = 0;  // slice index (ApSlice, EcSlice only)

  static ResourceId ap_slice(std::size_t a, std::size_t s) { return {Kind::ApSlice, a, s}; }
  static ResourceId ap(std::size_t a) { return {Kind::Ap, a, 0}; }
  static ResourceId ec_slice(std::size_t c, std::size_t s) { return {Kind::EcSlice, c, s}; }
  static ResourceId local_wd(std::size_t i) { return {Kind::LocalWd, i, 0}; }

  auto operator<=>(const ResourceId&) const = default;
};

// T_i^ex = L_i / F_i^l.
double local_time(const Scenario& scenario, std::size_t i);

// Transmit time at full share: D_i / R_{i,a}.
double radio_constant(const Scenario& scenario, std::size_t i, std::size_t a);

// Execution time at full share: (L_i / h_{i,s}) / F_c^s. Throws DomainError
// if EC c is absent from slice s.
double compute_constant(const Scenario& scenario, std::size_t i, std::size_t c, std::size_t s);

// Square-root congestion weight q_{i,r}. Throws DomainError for an EcSlice
// resource whose EC is absent from the slice.
double weight(const Scenario& scenario, std::size_t i, const ResourceId& r);

// Cost multiplier m_r. ApSlice needs the inter-slice share matrix (A x S);
// m = 1/b. Throws DomainError on a zero share or an absent EC.
double multiplier(const Scenario& scenario, const ResourceId& r, const Matrix* inter = nullptr);

// Per-resource device membership for a decision vector.
struct Grouping {
  std::size_t num_slices = 0;
  std::vector<std::vector<std::size_t>> ap_slice;  // index a * S + s
  std::vector<std::vector<std::size_t>> ec_slice;  // index c * S + s
  std::vector<std::vector<std::size_t>> ap;
  std::vector<std::vector<std::size_t>> ec;
  std::vector<std::size_t> local;

  const std::vector<std::size_t>& at_ap_slice(std::size_t a, std::size_t s) const {
    return ap_slice[a * num_slices + s];
  }
  const std::vector<std::size_t>& at_ec_slice(std::size_t c, std::size_t s) const {
    return ec_slice[c * num_slices + s];
  }
  // Members of r; LocalWd(i) yields {i} if i computes locally.
  std::vector<std::size_t> members(const ResourceId& r) const;
};

Grouping group(const Scenario& scenario, const DecisionVector& dv);

// q_r(d): sum of member weights on resource r.
double total_weight(const Scenario& scenario, const Grouping& g, const ResourceId& r);

}  // namespace sliceoff

#endif  // SLICEOFF_MODEL_HPP_
