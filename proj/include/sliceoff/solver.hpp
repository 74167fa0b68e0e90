#ifndef SLICEOFF_SOLVER_HPP_
#define SLICEOFF_SOLVER_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sliceoff/allocation.hpp"
#include "sliceoff/cost.hpp"
#include "sliceoff/model.hpp"

namespace sliceoff {

// A move must lower the mover's cost by more than this fraction of its
// current cost to count as an improvement.
inline constexpr double kImprovementEpsilon = 1e-12;
inline constexpr std::size_t kDefaultIterationCap = 1'000'000;

enum class UpdateOrder { RoundRobin, SeededRandom };

std::string to_string(UpdateOrder order);
// "round-robin" or "random".
UpdateOrder parse_update_order(const std::string& text);

struct CosOptions {
  UpdateOrder order = UpdateOrder::RoundRobin;
  std::uint64_t seed = 0;  // SeededRandom only
  bool record_trace = false;
  std::size_t max_iterations = kDefaultIterationCap;
};

struct TraceEntry {
  std::size_t step;
  std::size_t device;
  Decision from;
  Decision to;
  double potential;        // after the move
  double delta_potential;  // after - before
  double system_cost;      // after the move
};

struct CosResult {
  DecisionVector equilibrium;
  std::size_t iterations = 0;  // executed decision changes
  std::size_t sweeps = 0;      // passes over all devices, including the final quiet one
  double system_cost = 0.0;    // reduced cost of the equilibrium in the run's model
  std::vector<TraceEntry> trace;
};

// Cost-minimising decision of device i against the others' current
// decisions. Ties go to Local, then to the lexicographically smallest
// (ap, ec, slice). Returns the current decision unless the best option
// improves on it by more than kImprovementEpsilon (relative).
//
// Under the optimal-inter model the transmit term ignores the slice, so the
// AP and the (EC, slice) pair are chosen independently.
Decision best_response(const CostContext& ctx, std::size_t i);

// Same result by scanning every option. Slower; used to cross-check.
Decision best_response_exhaustive(const CostContext& ctx, std::size_t i);

// Best-response dynamics from the all-local profile until a full sweep makes
// no update. Throws NonTerminationError past options.max_iterations.
CosResult cos_run(const Scenario& scenario, const CostModel& model, const CosOptions& options = {});
CosResult cos_run(const Scenario& scenario, InterPolicy policy, const CosOptions& options = {});

struct Deviation {
  std::size_t device;
  Decision move;
  double current_cost;
  double deviation_cost;
};

struct NeCertificate {
  bool is_equilibrium = true;
  std::optional<Deviation> violation;  // first improving deviation found

  explicit operator bool() const { return is_equilibrium; }
};

// Scans every unilateral deviation of every device in index order.
NeCertificate certify_ne(const CostContext& ctx);
NeCertificate certify_ne(const Scenario& scenario, const CostModel& model, const DecisionVector& dv);

// First device whose cost exceeds its local execution time (relative slack
// kImprovementEpsilon), if any.
std::optional<std::size_t> local_bound_violation(const CostContext& ctx);

struct IterationBoundConstants {
  double c_min;
  double c_max;
};

// c_min = min_i min{T_i, best solo offload}, c_max = max_i max{T_i, best solo offload},
// where a solo offload costs D_i/R_{i,a} + L_{i,s}/F_c^s.
IterationBoundConstants iteration_constants(const Scenario& scenario);

// CSV: step,device,old_decision,new_decision,potential,system_cost
void write_trace_csv(std::ostream& out, const CosResult& result);

}  // namespace sliceoff

#endif  // SLICEOFF_SOLVER_HPP_
