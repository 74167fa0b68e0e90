#include "sliceoff/cost.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "sliceoff/error.hpp"

namespace sliceoff {

namespace {

double share(const ShareMap& map, std::size_t i, std::size_t res, std::size_t s,
             const char* label) {
  const auto it = map.find({i, res, s});
  if (it == map.end() || !(it->second > 0.0)) {
    throw DomainError(std::string("device ") + std::to_string(i) + " has no positive " + label +
                      " share on (" + std::to_string(res) + "," + std::to_string(s) + ")");
  }
  return it->second;
}

double inter_share(const Matrix& inter, std::size_t a, std::size_t s) {
  const double b = inter(a, s);
  if (!(b > 0.0)) {
    throw DomainError("zero inter-slice share at AP " + std::to_string(a) + ", slice " +
                      std::to_string(s));
  }
  return b;
}

// Resources used by device i under decision d, in the given model.
std::vector<ResourceId> resources_of(std::size_t i, const Decision& d, bool optimal) {
  if (d.is_local()) return {ResourceId::local_wd(i)};
  return {optimal ? ResourceId::ap(d.ap()) : ResourceId::ap_slice(d.ap(), d.slice()),
          ResourceId::ec_slice(d.ec(), d.slice())};
}

double model_multiplier(const Scenario& scenario, const ResourceId& r, const CostModel& model) {
  return multiplier(scenario, r, model.is_optimal() ? nullptr : &model.inter());
}

// q_r(d) for every resource in the model, keyed by ResourceId.
std::map<ResourceId, double> congestion(const Scenario& scenario, const DecisionVector& dv,
                                        bool optimal) {
  std::map<ResourceId, double> q;
  for (std::size_t j = 0; j < dv.size(); ++j) {
    for (const ResourceId& r : resources_of(j, dv[j], optimal)) q[r] += weight(scenario, j, r);
  }
  return q;
}

void check_inter_shape(const Scenario& scenario, const Matrix& inter) {
  if (inter.rows() != scenario.num_aps() || inter.cols() != scenario.num_slices()) {
    throw DomainError("inter-slice matrix has wrong shape");
  }
}

}  // namespace

double wd_cost(const Scenario& scenario, const DecisionVector& dv,
               const AllocationCoefficients& coeffs, std::size_t i) {
  const Decision& d = dv.at(i);
  if (d.is_local()) return local_time(scenario, i);
  const std::size_t a = d.ap(), c = d.ec(), s = d.slice();
  const double b = inter_share(coeffs.inter, a, s);
  const double w_a = share(coeffs.intra.radio, i, a, s, "radio");
  const double w_c = share(coeffs.intra.compute, i, c, s, "compute");
  return radio_constant(scenario, i, a) / (b * w_a) + compute_constant(scenario, i, c, s) / w_c;
}

double slice_cost(const Scenario& scenario, const DecisionVector& dv,
                  const AllocationCoefficients& coeffs, std::size_t s) {
  const Grouping g = group(scenario, dv);
  double cost = 0.0;
  for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
    const auto& members = g.at_ap_slice(a, s);
    if (members.empty()) continue;
    const double b = inter_share(coeffs.inter, a, s);
    for (std::size_t i : members) {
      cost += radio_constant(scenario, i, a) / (b * share(coeffs.intra.radio, i, a, s, "radio"));
    }
  }
  for (std::size_t c = 0; c < scenario.num_ecs(); ++c) {
    for (std::size_t i : g.at_ec_slice(c, s)) {
      cost += compute_constant(scenario, i, c, s) / share(coeffs.intra.compute, i, c, s, "compute");
    }
  }
  return cost;
}

CostBreakdown system_cost(const Scenario& scenario, const DecisionVector& dv,
                          const AllocationCoefficients& coeffs) {
  validate(scenario, dv);
  CostBreakdown out;
  out.per_device.resize(dv.size());
  for (std::size_t i = 0; i < dv.size(); ++i) {
    out.per_device[i] = wd_cost(scenario, dv, coeffs, i);
    if (dv[i].is_local()) out.local_total += out.per_device[i];
  }
  out.per_slice.resize(scenario.num_slices());
  out.system = out.local_total;
  for (std::size_t s = 0; s < scenario.num_slices(); ++s) {
    out.per_slice[s] = slice_cost(scenario, dv, coeffs, s);
    out.system += out.per_slice[s];
  }
  return out;
}

double reduced_wd_cost_fixed(const Scenario& scenario, const DecisionVector& dv,
                             const Matrix& inter, std::size_t i) {
  check_inter_shape(scenario, inter);
  return reduced_wd_cost(scenario, dv, CostModel::fixed_inter(inter), i);
}

double reduced_system_cost_fixed(const Scenario& scenario, const DecisionVector& dv,
                                 const Matrix& inter) {
  check_inter_shape(scenario, inter);
  return reduced_system_cost(scenario, dv, CostModel::fixed_inter(inter));
}

double reduced_wd_cost_optimal(const Scenario& scenario, const DecisionVector& dv, std::size_t i) {
  return reduced_wd_cost(scenario, dv, CostModel::optimal_inter(), i);
}

double reduced_system_cost_optimal(const Scenario& scenario, const DecisionVector& dv) {
  return reduced_system_cost(scenario, dv, CostModel::optimal_inter());
}

CostModel cost_model_for(const Scenario& scenario, InterPolicy policy) {
  switch (policy) {
    case InterPolicy::Optimal:
      return CostModel::optimal_inter();
    case InterPolicy::Equal:
      return CostModel::fixed_inter(baseline_equal(scenario));
    case InterPolicy::CloudProportional:
      return CostModel::fixed_inter(baseline_cloud_proportional(scenario));
  }
  return CostModel::optimal_inter();
}

double reduced_wd_cost(const Scenario& scenario, const DecisionVector& dv, const CostModel& model,
                       std::size_t i) {
  validate(scenario, dv);
  const auto q = congestion(scenario, dv, model.is_optimal());
  double cost = 0.0;
  for (const ResourceId& r : resources_of(i, dv[i], model.is_optimal())) {
    cost += model_multiplier(scenario, r, model) * weight(scenario, i, r) * q.at(r);
  }
  return cost;
}

double reduced_system_cost(const Scenario& scenario, const DecisionVector& dv,
                           const CostModel& model) {
  validate(scenario, dv);
  double cost = 0.0;
  for (const auto& [r, qr] : congestion(scenario, dv, model.is_optimal())) {
    cost += model_multiplier(scenario, r, model) * qr * qr;
  }
  return cost;
}

double potential(const Scenario& scenario, const DecisionVector& dv, const CostModel& model) {
  validate(scenario, dv);
  std::map<ResourceId, double> prefix;
  double psi = 0.0;
  for (std::size_t i = 0; i < dv.size(); ++i) {
    for (const ResourceId& r : resources_of(i, dv[i], model.is_optimal())) {
      const double q = weight(scenario, i, r);
      double& running = prefix[r];
      running += q;
      psi += q * model_multiplier(scenario, r, model) * running;
    }
  }
  return psi;
}

// --- CostContext -------------------------------------------------------------

CostContext::CostContext(const Scenario& scenario, CostModel model, DecisionVector initial)
    : scenario_(&scenario),
      model_(std::move(model)),
      dv_(std::move(initial)),
      num_aps_(scenario.num_aps()),
      num_slices_(scenario.num_slices()) {
  validate(scenario, dv_);
  if (!model_.is_optimal()) check_inter_shape(scenario, model_.inter());

  const std::size_t N = scenario.num_devices();
  const std::size_t A = num_aps_, S = num_slices_, C = scenario.num_ecs();
  radio_w_.resize(N * A);
  compute_w_.resize(N * S);
  local_time_.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t a = 0; a < A; ++a) {
      radio_w_[i * A + a] = weight(scenario, i, ResourceId::ap(a));
    }
    for (std::size_t s = 0; s < S; ++s) {
      compute_w_[i * S + s] = std::sqrt(scenario.complexity(i) / scenario.match_coeff(i, s));
    }
    local_time_[i] = local_time(scenario, i);
  }

  if (model_.is_optimal()) {
    radio_m_.assign(A, 1.0);
  } else {
    radio_m_.resize(A * S);
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t s = 0; s < S; ++s) {
        const double b = model_.inter()(a, s);
        radio_m_[a * S + s] = b > 0.0 ? 1.0 / b : std::numeric_limits<double>::infinity();
      }
    }
  }
  compute_m_.assign(C * S, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t s = 0; s < S; ++s) {
      if (scenario.ec_in_slice(c, s)) compute_m_[c * S + s] = 1.0 / scenario.ec_capability(c, s);
    }
  }
  for (const Decision& d : dv_) check_usable(d);
  recompute();
}

void CostContext::check_usable(const Decision& d) const {
  if (!is_valid(*scenario_, d)) throw DomainError("invalid decision " + d.to_string());
  if (d.is_offload() && std::isinf(radio_m_[radio_index(d.ap(), d.slice())])) {
    throw DomainError("zero inter-slice share at AP " + std::to_string(d.ap()) + ", slice " +
                      std::to_string(d.slice()));
  }
}

void CostContext::recompute() {
  radio_q_.assign(radio_m_.size(), 0.0);
  radio_n_.assign(radio_m_.size(), 0);
  compute_q_.assign(compute_m_.size(), 0.0);
  compute_n_.assign(compute_m_.size(), 0);
  for (std::size_t i = 0; i < dv_.size(); ++i) add(i, dv_[i]);
}

void CostContext::add(std::size_t i, const Decision& d) {
  if (d.is_local()) return;
  const std::size_t r = radio_index(d.ap(), d.slice());
  radio_q_[r] += radio_w_[i * num_aps_ + d.ap()];
  ++radio_n_[r];
  const std::size_t k = d.ec() * num_slices_ + d.slice();
  compute_q_[k] += compute_w_[i * num_slices_ + d.slice()];
  ++compute_n_[k];
}

void CostContext::remove(std::size_t i, const Decision& d) {
  if (d.is_local()) return;
  const std::size_t r = radio_index(d.ap(), d.slice());
  if (--radio_n_[r] == 0) {
    radio_q_[r] = 0.0;
  } else {
    radio_q_[r] -= radio_w_[i * num_aps_ + d.ap()];
  }
  const std::size_t k = d.ec() * num_slices_ + d.slice();
  if (--compute_n_[k] == 0) {
    compute_q_[k] = 0.0;
  } else {
    compute_q_[k] -= compute_w_[i * num_slices_ + d.slice()];
  }
}

void CostContext::apply(std::size_t i, const Decision& d) {
  check_usable(d);
  remove(i, dv_[i]);
  dv_[i] = d;
  add(i, d);
}

double CostContext::radio_term(std::size_t i, std::size_t a, std::size_t s) const {
  const std::size_t r = radio_index(a, s);
  const double w = radio_w_[i * num_aps_ + a];
  const Decision& cur = dv_[i];
  const bool uses = cur.is_offload() && radio_index(cur.ap(), cur.slice()) == r;
  const std::size_t others_n = radio_n_[r] - (uses ? 1 : 0);
  const double others = others_n == 0 ? 0.0 : radio_q_[r] - (uses ? w : 0.0);
  return radio_m_[r] * w * (others + w);
}

double CostContext::compute_term(std::size_t i, std::size_t c, std::size_t s) const {
  const std::size_t k = c * num_slices_ + s;
  if (compute_m_[k] == 0.0) return std::numeric_limits<double>::infinity();
  const double w = compute_w_[i * num_slices_ + s];
  const Decision& cur = dv_[i];
  const bool uses = cur.is_offload() && cur.ec() == c && cur.slice() == s;
  const std::size_t others_n = compute_n_[k] - (uses ? 1 : 0);
  const double others = others_n == 0 ? 0.0 : compute_q_[k] - (uses ? w : 0.0);
  return compute_m_[k] * w * (others + w);
}

double CostContext::option_cost(std::size_t i, const Decision& d) const {
  if (d.is_local()) return local_time_[i];
  return radio_term(i, d.ap(), d.slice()) + compute_term(i, d.ec(), d.slice());
}

double CostContext::system_cost() const {
  double cost = 0.0;
  for (std::size_t r = 0; r < radio_q_.size(); ++r) {
    if (radio_n_[r] > 0) cost += radio_m_[r] * radio_q_[r] * radio_q_[r];
  }
  for (std::size_t k = 0; k < compute_q_.size(); ++k) {
    if (compute_n_[k] > 0) cost += compute_m_[k] * compute_q_[k] * compute_q_[k];
  }
  for (std::size_t i = 0; i < dv_.size(); ++i) {
    if (dv_[i].is_local()) cost += local_time_[i];
  }
  return cost;
}

}  // namespace sliceoff
