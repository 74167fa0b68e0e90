#include "sliceoff/allocation.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sliceoff/error.hpp"

namespace sliceoff {

std::string to_string(InterPolicy p) {
  switch (p) {
    case InterPolicy::Optimal:
      return "optimal";
    case InterPolicy::Equal:
      return "equal";
    case InterPolicy::CloudProportional:
      return "cloud-proportional";
  }
  return "?";
}

InterPolicy parse_inter_policy(const std::string& text) {
  if (text == "optimal") return InterPolicy::Optimal;
  if (text == "equal") return InterPolicy::Equal;
  if (text == "cloud-proportional" || text == "cloud_proportional") {
    return InterPolicy::CloudProportional;
  }
  throw std::invalid_argument("unknown inter-slice policy '" + text + "'");
}

IntraShares optimal_intra(const Scenario& scenario, const DecisionVector& dv) {
  const Grouping g = group(scenario, dv);
  const std::size_t S = scenario.num_slices();
  IntraShares out;

  for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto& members = g.at_ap_slice(a, s);
      double total = 0.0;
      for (std::size_t j : members) total += std::sqrt(radio_constant(scenario, j, a));
      for (std::size_t j : members) {
        out.radio[{j, a, s}] = std::sqrt(radio_constant(scenario, j, a)) / total;
      }
    }
  }
  for (std::size_t c = 0; c < scenario.num_ecs(); ++c) {
    for (std::size_t s = 0; s < S; ++s) {
      const auto& members = g.at_ec_slice(c, s);
      double total = 0.0;
      for (std::size_t j : members) total += std::sqrt(compute_constant(scenario, j, c, s));
      for (std::size_t j : members) {
        out.compute[{j, c, s}] = std::sqrt(compute_constant(scenario, j, c, s)) / total;
      }
    }
  }
  return out;
}

Matrix optimal_inter(const Scenario& scenario, const DecisionVector& dv) {
  const Grouping g = group(scenario, dv);
  const std::size_t S = scenario.num_slices();
  Matrix b(scenario.num_aps(), S);
  for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
    std::vector<double> per_slice(S, 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t j : g.at_ap_slice(a, s)) {
        per_slice[s] += std::sqrt(radio_constant(scenario, j, a));
      }
      total += per_slice[s];
    }
    for (std::size_t s = 0; s < S; ++s) {
      b(a, s) = total > 0.0 ? per_slice[s] / total : 1.0 / static_cast<double>(S);
    }
  }
  return b;
}

Matrix baseline_equal(const Scenario& scenario) {
  return Matrix(scenario.num_aps(), scenario.num_slices(),
                1.0 / static_cast<double>(scenario.num_slices()));
}

Matrix baseline_cloud_proportional(const Scenario& scenario) {
  const std::size_t S = scenario.num_slices();
  std::vector<double> per_slice(S, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t c = 0; c < scenario.num_ecs(); ++c) {
      per_slice[s] += scenario.ec_capability(c, s);
    }
    if (!(per_slice[s] > 0.0)) {
      throw DomainError("slice " + std::to_string(s) + " has zero EC capability");
    }
    total += per_slice[s];
  }
  Matrix b(scenario.num_aps(), S);
  for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
    for (std::size_t s = 0; s < S; ++s) b(a, s) = per_slice[s] / total;
  }
  return b;
}

Matrix inter_shares(const Scenario& scenario, InterPolicy policy, const DecisionVector& dv) {
  switch (policy) {
    case InterPolicy::Optimal:
      return optimal_inter(scenario, dv);
    case InterPolicy::Equal:
      return baseline_equal(scenario);
    case InterPolicy::CloudProportional:
      return baseline_cloud_proportional(scenario);
  }
  return {};
}

AllocationCoefficients optimal_coefficients(const Scenario& scenario, const DecisionVector& dv) {
  return {optimal_inter(scenario, dv), optimal_intra(scenario, dv)};
}

namespace {

class Violations {
 public:
  template <typename... Parts>
  void add(const Parts&... parts) {
    std::ostringstream out;
    (out << ... << parts);
    list_.push_back(out.str());
  }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::vector<std::string> list_;
};

// Shares in `map` must exist exactly for the members of each group, be
// non-negative and sum to at most one per (resource, slice).
void check_intra(const ShareMap& map, const std::vector<std::vector<std::size_t>>& groups,
                 std::size_t num_slices, const char* label, Violations& v) {
  std::vector<double> sums(groups.size(), 0.0);
  for (const auto& [key, w] : map) {
    const std::size_t idx = key.resource * num_slices + key.slice;
    if (key.slice >= num_slices || idx >= groups.size()) {
      v.add(label, " share for out-of-range resource (", key.resource, ",", key.slice, ")");
      continue;
    }
    bool member = false;
    for (std::size_t j : groups[idx]) member = member || j == key.device;
    if (!member) {
      v.add(label, " share for device ", key.device, " which does not use (", key.resource, ",",
            key.slice, ")");
    }
    if (w < 0.0 || !std::isfinite(w)) {
      v.add("non-negativity: ", label, " w[", key.device, ",", key.resource, ",", key.slice,
            "] = ", w);
    }
    sums[idx] += w;
  }
  for (std::size_t idx = 0; idx < groups.size(); ++idx) {
    const std::size_t res = idx / num_slices;
    const std::size_t s = idx % num_slices;
    for (std::size_t j : groups[idx]) {
      if (!map.contains({j, res, s})) {
        v.add(label, " share missing for device ", j, " on (", res, ",", s, ")");
      }
    }
    if (sums[idx] > 1.0 + kFeasibilityTolerance) {
      v.add("intra-slice capacity: ", label, " shares on (", res, ",", s, ") sum to ", sums[idx]);
    }
  }
}

}  // namespace

FeasibilityReport check_feasible(const Scenario& scenario, const AllocationCoefficients& coeffs,
                                 const DecisionVector& dv) {
  Violations v;
  const std::size_t S = scenario.num_slices();
  if (coeffs.inter.rows() != scenario.num_aps() || coeffs.inter.cols() != S) {
    v.add("inter-slice matrix has shape ", coeffs.inter.rows(), "x", coeffs.inter.cols(),
          ", expected ", scenario.num_aps(), "x", S);
    return {false, v.take()};
  }
  for (std::size_t a = 0; a < coeffs.inter.rows(); ++a) {
    double sum = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      const double b = coeffs.inter(a, s);
      if (b < 0.0 || !std::isfinite(b)) v.add("non-negativity: b[", a, ",", s, "] = ", b);
      sum += b;
    }
    if (sum > 1.0 + kFeasibilityTolerance) {
      v.add("inter-slice capacity: b row ", a, " sums to ", sum);
    }
  }
  const Grouping g = group(scenario, dv);
  check_intra(coeffs.intra.radio, g.ap_slice, S, "radio", v);
  check_intra(coeffs.intra.compute, g.ec_slice, S, "compute", v);

  auto list = v.take();
  return {list.empty(), std::move(list)};
}

}  // namespace sliceoff
