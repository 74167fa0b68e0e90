#ifndef SLICEOFF_ALLOCATION_HPP_
#define SLICEOFF_ALLOCATION_HPP_

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sliceoff/matrix.hpp"
#include "sliceoff/model.hpp"

namespace sliceoff {

// (device, AP or EC index, slice)
struct ShareKey {
  std::size_t device;
  std::size_t resource;
  std::size_t slice;
  auto operator<=>(const ShareKey&) const = default;
};

using ShareMap = std::map<ShareKey, double>;

struct IntraShares {
  ShareMap radio;    // w_{i,a}^s, defined for i in O_(a,s)
  ShareMap compute;  // w_{i,c}^s, defined for i in O_(c,s)
};

struct AllocationCoefficients {
  Matrix inter;  // b_a^s, A x S
  IntraShares intra;
};

// Inter-slice policies of the orchestrator.
enum class InterPolicy { Optimal, Equal, CloudProportional };

std::string to_string(InterPolicy p);
// Accepts "optimal", "equal", "cloud-proportional" (also "cloud_proportional").
InterPolicy parse_inter_policy(const std::string& text);

// Within each nonempty group, shares proportional to sqrt(E_{i,e}^s).
IntraShares optimal_intra(const Scenario& scenario, const DecisionVector& dv);

// b_a^s proportional to the slice's summed sqrt(D_j / R_{j,a}) at AP a.
// APs without offloaders get 1/S in every slice.
Matrix optimal_inter(const Scenario& scenario, const DecisionVector& dv);

// b_a^s = 1/S.
Matrix baseline_equal(const Scenario& scenario);

// b_a^s proportional to the slice's total EC capability, identical across APs.
// Throws DomainError if a slice has no capability.
Matrix baseline_cloud_proportional(const Scenario& scenario);

// Inter-slice shares for a decision-independent policy. Optimal depends on
// the decision vector, so pass it through optimal_inter instead.
Matrix inter_shares(const Scenario& scenario, InterPolicy policy, const DecisionVector& dv);

AllocationCoefficients optimal_coefficients(const Scenario& scenario, const DecisionVector& dv);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;

  explicit operator bool() const { return feasible; }
};

inline constexpr double kFeasibilityTolerance = 1e-12;

// Checks sum and sign constraints on b and w, and that intra shares exist for
// exactly the grouped devices.
FeasibilityReport check_feasible(const Scenario& scenario, const AllocationCoefficients& coeffs,
                                 const DecisionVector& dv);

}  // namespace sliceoff

#endif  // SLICEOFF_ALLOCATION_HPP_
