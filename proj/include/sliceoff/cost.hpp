#ifndef SLICEOFF_COST_HPP_
#define SLICEOFF_COST_HPP_

#include <cstddef>
#include <vector>

#include "sliceoff/allocation.hpp"
#include "sliceoff/matrix.hpp"
#include "sliceoff/model.hpp"

namespace sliceoff {

struct CostBreakdown {
  std::vector<double> per_device;
  std::vector<double> per_slice;
  double local_total = 0.0;
  double system = 0.0;
};

// --- General cost for arbitrary coefficients -------------------------------
// Throw DomainError when a used resource has a zero or missing share.

double wd_cost(const Scenario& scenario, const DecisionVector& dv,
               const AllocationCoefficients& coeffs, std::size_t i);
double slice_cost(const Scenario& scenario, const DecisionVector& dv,
                  const AllocationCoefficients& coeffs, std::size_t s);
CostBreakdown system_cost(const Scenario& scenario, const DecisionVector& dv,
                          const AllocationCoefficients& coeffs);

// --- Reduced costs -----------------------------------------------------------
// With optimal intra-slice shares and a fixed inter-slice matrix b, the cost
// of a device is sum_r m_r q_{i,r} q_r(d) over resources {(a,s), (c,s)} or
// {i}; m_(a,s) = 1/b_a^s.

double reduced_wd_cost_fixed(const Scenario& scenario, const DecisionVector& dv,
                             const Matrix& inter, std::size_t i);
double reduced_system_cost_fixed(const Scenario& scenario, const DecisionVector& dv,
                                 const Matrix& inter);

// With optimal inter-slice shares as well, AP resources collapse across
// slices (m_a = 1), so the transmit term no longer depends on the slice.
double reduced_wd_cost_optimal(const Scenario& scenario, const DecisionVector& dv, std::size_t i);
double reduced_system_cost_optimal(const Scenario& scenario, const DecisionVector& dv);

// Selects between the two reduced cost models.
class CostModel {
 public:
  static CostModel fixed_inter(Matrix inter) { return CostModel(std::move(inter)); }
  static CostModel optimal_inter() { return CostModel(); }

  bool is_optimal() const { return optimal_; }
  // Only meaningful for fixed_inter.
  const Matrix& inter() const { return inter_; }

 private:
  CostModel() : optimal_(true) {}
  explicit CostModel(Matrix inter) : optimal_(false), inter_(std::move(inter)) {}

  bool optimal_;
  Matrix inter_;
};

// Cost model realised by an inter-slice policy: Optimal maps to the collapsed
// model, the baselines to a fixed matrix.
CostModel cost_model_for(const Scenario& scenario, InterPolicy policy);

double reduced_wd_cost(const Scenario& scenario, const DecisionVector& dv, const CostModel& model,
                       std::size_t i);
double reduced_system_cost(const Scenario& scenario, const DecisionVector& dv,
                           const CostModel& model);

// Exact potential of the offloading game:
//   Psi(d) = sum_i sum_{r in R_{d_i}} q_{i,r} m_r q_r^{<=i}(d)
// where q_r^{<=i} sums weights of members j <= i. Psi(all local) = sum_i T_i^ex.
double potential(const Scenario& scenario, const DecisionVector& dv, const CostModel& model);

// Congestion totals q_r(d) cached for one decision vector, updated in O(1)
// per unilateral move. Single writer. The scenario must outlive the context.
class CostContext {
 public:
  CostContext(const Scenario& scenario, CostModel model, DecisionVector initial);

  const Scenario& scenario() const { return *scenario_; }
  const CostModel& model() const { return model_; }
  const DecisionVector& decisions() const { return dv_; }

  // Cost device i would pay by switching to d while everyone else stays put.
  // +inf for an offload through a zero inter-slice share or an absent EC.
  double option_cost(std::size_t i, const Decision& d) const;
  double device_cost(std::size_t i) const { return option_cost(i, dv_[i]); }

  // Split of option_cost for an offload decision: transmit term at (a, s)
  // and execution term at (c, s). In the optimal-inter model the transmit
  // term ignores s.
  double radio_term(std::size_t i, std::size_t a, std::size_t s) const;
  double compute_term(std::size_t i, std::size_t c, std::size_t s) const;
  double local_term(std::size_t i) const { return local_time_[i]; }

  // sum_r m_r q_r(d)^2 plus local times.
  double system_cost() const;

  // Throws DomainError for invalid decisions or a zero inter-slice share.
  void apply(std::size_t i, const Decision& d);
  // Rebuilds every cached total from the decision vector.
  void recompute();

  double radio_total(std::size_t a, std::size_t s) const { return radio_q_[radio_index(a, s)]; }
  double compute_total(std::size_t c, std::size_t s) const {
    return compute_q_[c * num_slices_ + s];
  }

 private:
  std::size_t radio_index(std::size_t a, std::size_t s) const {
    return model_.is_optimal() ? a : a * num_slices_ + s;
  }
  void add(std::size_t i, const Decision& d);
  void remove(std::size_t i, const Decision& d);
  void check_usable(const Decision& d) const;

  const Scenario* scenario_;
  CostModel model_;
  DecisionVector dv_;
  std::size_t num_aps_;
  std::size_t num_slices_;

  std::vector<double> radio_w_;    // N x A
  std::vector<double> compute_w_;  // N x S
  std::vector<double> local_time_;
  std::vector<double> radio_m_;    // per radio resource
  std::vector<double> compute_m_;  // C x S, 0 for absent EC

  std::vector<double> radio_q_;
  std::vector<std::size_t> radio_n_;
  std::vector<double> compute_q_;
  std::vector<std::size_t> compute_n_;
};

}  // namespace sliceoff

#endif  // SLICEOFF_COST_HPP_
