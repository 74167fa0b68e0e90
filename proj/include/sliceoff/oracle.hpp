#ifndef SLICEOFF_ORACLE_HPP_
#define SLICEOFF_ORACLE_HPP_

#include <cstddef>
#include <cstdint>

#include "sliceoff/cost.hpp"
#include "sliceoff/model.hpp"
#include "sliceoff/solver.hpp"

namespace sliceoff {

inline constexpr std::uint64_t kMaxEnumeration = 100'000'000;

struct OracleResult {
  DecisionVector optimum;
  double optimal_cost = 0.0;
  std::uint64_t evaluated = 0;  // (number of options per device)^N
};

// Global minimum of the reduced system cost over every decision vector.
// Ties resolve to the lexicographically smallest vector. The search space is
// split into `workers` contiguous ranges (0 = hardware concurrency); the
// result does not depend on the split. Throws SizeError beyond max_vectors.
OracleResult exhaustive_optimal(const Scenario& scenario, const CostModel& model,
                                std::size_t workers = 1,
                                std::uint64_t max_vectors = kMaxEnumeration);

// Cost of the COS equilibrium over the exhaustive optimum, both in the
// optimal-inter model.
double approximation_ratio(const Scenario& scenario, UpdateOrder order, std::uint64_t seed);
double approximation_ratio(const Scenario& scenario, const CostModel& model, UpdateOrder order,
                           std::uint64_t seed);

struct KktCheck {
  bool passed = true;
  double optimal_cost = 0.0;
  double min_perturbed_cost = 0.0;
  std::size_t trials = 0;

  explicit operator bool() const { return passed; }
};

inline constexpr double kKktTolerance = 1e-9;

// Samples `trials` feasible coefficient sets near the closed-form optimum and
// checks none undercuts it by more than kKktTolerance (relative). Each
// constraint group (b row per AP, w per nonempty group) is mixed towards a
// random simplex point with weight magnitude * U(0,1) and scaled down by up
// to the same weight, so the sum stays at most one.
KktCheck perturbation_kkt_check(const Scenario& scenario, const DecisionVector& dv,
                                std::size_t trials, double magnitude, std::uint64_t seed);

}  // namespace sliceoff

#endif  // SLICEOFF_ORACLE_HPP_
