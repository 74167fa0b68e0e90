#include "sliceoff/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include "sliceoff/allocation.hpp"
#include "sliceoff/error.hpp"

namespace sliceoff {

namespace {

// Flat per-device option table: resource slots and weights for each option.
struct OptionTable {
  std::size_t num_options = 0;
  std::size_t num_radio = 0;
  std::size_t num_compute = 0;
  std::vector<Decision> options;
  std::vector<double> radio_m;
  std::vector<double> compute_m;
  // Per (device, option): radio slot, compute slot, weights; option 0 is local.
  std::vector<std::size_t> radio_slot;
  std::vector<std::size_t> compute_slot;
  std::vector<double> radio_w;
  std::vector<double> compute_w;
  std::vector<double> local_time;
  std::vector<bool> usable;
};

OptionTable build_table(const Scenario& sc, const CostModel& model) {
  OptionTable t;
  t.options = decision_options(sc);
  t.num_options = t.options.size();
  const std::size_t S = sc.num_slices();
  const std::size_t N = sc.num_devices();
  t.num_radio = model.is_optimal() ? sc.num_aps() : sc.num_aps() * S;
  t.num_compute = sc.num_ecs() * S;
  t.radio_m.assign(t.num_radio, 1.0);
  if (!model.is_optimal()) {
    for (std::size_t a = 0; a < sc.num_aps(); ++a) {
      for (std::size_t s = 0; s < S; ++s) {
        const double b = model.inter()(a, s);
        t.radio_m[a * S + s] = b > 0.0 ? 1.0 / b : std::numeric_limits<double>::infinity();
      }
    }
  }
  t.compute_m.assign(t.num_compute, 0.0);
  for (std::size_t c = 0; c < sc.num_ecs(); ++c) {
    for (std::size_t s = 0; s < S; ++s) {
      if (sc.ec_in_slice(c, s)) t.compute_m[c * S + s] = 1.0 / sc.ec_capability(c, s);
    }
  }
  const std::size_t K = t.num_options;
  t.radio_slot.resize(N * K);
  t.compute_slot.resize(N * K);
  t.radio_w.resize(N * K);
  t.compute_w.resize(N * K);
  t.usable.resize(K);
  t.local_time.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    t.local_time[i] = sc.complexity(i) / sc.local_capability(i);
    for (std::size_t k = 1; k < K; ++k) {
      const Decision& d = t.options[k];
      const std::size_t r = model.is_optimal() ? d.ap() : d.ap() * S + d.slice();
      t.radio_slot[i * K + k] = r;
      t.compute_slot[i * K + k] = d.ec() * S + d.slice();
      t.radio_w[i * K + k] = std::sqrt(sc.data_size(i) / sc.rate(i, d.ap()));
      t.compute_w[i * K + k] = std::sqrt(sc.complexity(i) / sc.match_coeff(i, d.slice()));
    }
  }
  t.usable[0] = true;
  for (std::size_t k = 1; k < K; ++k) {
    t.usable[k] = std::isfinite(t.radio_m[t.radio_slot[k]]);
  }
  return t;
}

struct RangeBest {
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  double cost = std::numeric_limits<double>::infinity();
};

// Streams through vectors [begin, end) in mixed-radix order, device 0 most
// significant, recomputing each cost from scratch.
RangeBest scan_range(const OptionTable& t, std::size_t n, std::uint64_t begin, std::uint64_t end) {
  RangeBest best;
  if (begin >= end) return best;
  const std::size_t K = t.num_options;
  std::vector<std::size_t> digit(n, 0);
  std::uint64_t rest = begin;
  for (std::size_t i = n; i-- > 0;) {
    digit[i] = static_cast<std::size_t>(rest % K);
    rest /= K;
  }
  std::vector<double> radio_q(t.num_radio), compute_q(t.num_compute);

  for (std::uint64_t idx = begin; idx < end; ++idx) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) ok = t.usable[digit[i]];
    if (ok) {
      std::fill(radio_q.begin(), radio_q.end(), 0.0);
      std::fill(compute_q.begin(), compute_q.end(), 0.0);
      double cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = digit[i];
        if (k == 0) {
          cost += t.local_time[i];
          continue;
        }
        radio_q[t.radio_slot[i * K + k]] += t.radio_w[i * K + k];
        compute_q[t.compute_slot[i * K + k]] += t.compute_w[i * K + k];
      }
      for (std::size_t r = 0; r < t.num_radio; ++r) {
        if (radio_q[r] > 0.0) cost += t.radio_m[r] * radio_q[r] * radio_q[r];
      }
      for (std::size_t r = 0; r < t.num_compute; ++r) {
        if (compute_q[r] > 0.0) cost += t.compute_m[r] * compute_q[r] * compute_q[r];
      }
      if (cost < best.cost) best = {idx, cost};
    }
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < K) break;
      digit[i] = 0;
    }
  }
  return best;
}

}  // namespace

OracleResult exhaustive_optimal(const Scenario& scenario, const CostModel& model,
                                std::size_t workers, std::uint64_t max_vectors) {
  const OptionTable table = build_table(scenario, model);
  const std::size_t n = scenario.num_devices();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > max_vectors / table.num_options) {
      throw SizeError("exhaustive search over " + std::to_string(table.num_options) + "^" +
                      std::to_string(n) + " decision vectors exceeds the limit of " +
                      std::to_string(max_vectors));
    }
    total *= table.num_options;
  }

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<std::size_t>(std::min<std::uint64_t>(workers, total));
  std::vector<RangeBest> partial(workers);
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = w * chunk;
      const std::uint64_t end = std::min(total, begin + chunk);
      pool.emplace_back([&, w, begin, end] { partial[w] = scan_range(table, n, begin, end); });
    }
  }
  RangeBest best;
  for (const RangeBest& p : partial) {
    if (p.cost < best.cost || (p.cost == best.cost && p.index < best.index)) best = p;
  }

  OracleResult out;
  out.evaluated = total;
  out.optimal_cost = best.cost;
  out.optimum.resize(n);
  std::uint64_t rest = best.index;
  for (std::size_t i = n; i-- > 0;) {
    out.optimum[i] = table.options[rest % table.num_options];
    rest /= table.num_options;
  }
  return out;
}

double approximation_ratio(const Scenario& scenario, UpdateOrder order, std::uint64_t seed) {
  return approximation_ratio(scenario, CostModel::optimal_inter(), order, seed);
}

double approximation_ratio(const Scenario& scenario, const CostModel& model, UpdateOrder order,
                           std::uint64_t seed) {
  CosOptions opts;
  opts.order = order;
  opts.seed = seed;
  const CosResult eq = cos_run(scenario, model, opts);
  const OracleResult opt = exhaustive_optimal(scenario, model);
  return eq.system_cost / opt.optimal_cost;
}

namespace {

std::vector<double> random_simplex_point(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> z(k);
  double sum = 0.0;
  for (double& x : z) {
    x = expo(rng);
    sum += x;
  }
  for (double& x : z) x /= sum;
  return z;
}

// Mixes `values` towards a random simplex point and shrinks the total.
void perturb_group(std::vector<double*>& values, double magnitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mix = std::clamp(magnitude * unit(rng), 0.0, 1.0);
  const double shrink = 1.0 - mix * unit(rng);
  const auto z = random_simplex_point(values.size(), rng);
  for (std::size_t k = 0; k < values.size(); ++k) {
    *values[k] = shrink * ((1.0 - mix) * *values[k] + mix * z[k]);
  }
}

void perturb_map(ShareMap& map, double magnitude, std::mt19937_64& rng) {
  // Group entries by (resource, slice); map order is by device first.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double*>> groups;
  for (auto& [key, w] : map) groups[{key.resource, key.slice}].push_back(&w);
  for (auto& [_, values] : groups) perturb_group(values, magnitude, rng);
}

}  // namespace

KktCheck perturbation_kkt_check(const Scenario& scenario, const DecisionVector& dv,
                                std::size_t trials, double magnitude, std::uint64_t seed) {
  const AllocationCoefficients optimum = optimal_coefficients(scenario, dv);
  KktCheck out;
  out.optimal_cost = system_cost(scenario, dv, optimum).system;
  out.min_perturbed_cost = std::numeric_limits<double>::infinity();
  out.trials = trials;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    AllocationCoefficients c = optimum;
    for (std::size_t a = 0; a < c.inter.rows(); ++a) {
      std::vector<double*> row;
      for (std::size_t s = 0; s < c.inter.cols(); ++s) row.push_back(&c.inter(a, s));
      perturb_group(row, magnitude, rng);
    }
    perturb_map(c.intra.radio, magnitude, rng);
    perturb_map(c.intra.compute, magnitude, rng);
    const double cost = system_cost(scenario, dv, c).system;
    out.min_perturbed_cost = std::min(out.min_perturbed_cost, cost);
    if (cost < out.optimal_cost * (1.0 - kKktTolerance)) out.passed = false;
  }
  return out;
}

}  // namespace sliceoff
