#include "sliceoff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "sliceoff/error.hpp"
#include "sliceoff/numfmt.hpp"

namespace sliceoff {

std::string to_string(UpdateOrder order) {
  return order == UpdateOrder::RoundRobin ? "round-robin" : "random";
}

UpdateOrder parse_update_order(const std::string& text) {
  if (text == "round-robin" || text == "round_robin") return UpdateOrder::RoundRobin;
  if (text == "random" || text == "seeded-random" || text == "seeded_random") {
    return UpdateOrder::SeededRandom;
  }
  throw std::invalid_argument("unknown update order '" + text + "'");
}

namespace {

bool improves(double candidate, double current) {
  return candidate < current - kImprovementEpsilon * std::abs(current);
}

struct Choice {
  Decision decision;
  double cost;
};

Choice best_option_separable(const CostContext& ctx, std::size_t i) {
  const Scenario& sc = ctx.scenario();
  Choice best{Decision::local(), ctx.local_term(i)};

  std::size_t best_ap = 0;
  double best_radio = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < sc.num_aps(); ++a) {
    const double t = ctx.radio_term(i, a, 0);
    if (t < best_radio) {
      best_radio = t;
      best_ap = a;
    }
  }
  std::size_t best_ec = 0, best_slice = 0;
  double best_compute = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < sc.num_ecs(); ++c) {
    for (std::size_t s = 0; s < sc.num_slices(); ++s) {
      if (!sc.ec_in_slice(c, s)) continue;
      const double t = ctx.compute_term(i, c, s);
      if (t < best_compute) {
        best_compute = t;
        best_ec = c;
        best_slice = s;
      }
    }
  }
  const double offload = best_radio + best_compute;
  if (offload < best.cost) best = {Decision::offload(best_ap, best_ec, best_slice), offload};
  return best;
}

Choice best_option_full(const CostContext& ctx, std::size_t i) {
  const Scenario& sc = ctx.scenario();
  Choice best{Decision::local(), ctx.local_term(i)};
  for (std::size_t a = 0; a < sc.num_aps(); ++a) {
    for (std::size_t c = 0; c < sc.num_ecs(); ++c) {
      for (std::size_t s = 0; s < sc.num_slices(); ++s) {
        if (!sc.ec_in_slice(c, s)) continue;
        const Decision d = Decision::offload(a, c, s);
        const double cost = ctx.option_cost(i, d);
        if (cost < best.cost) best = {d, cost};
      }
    }
  }
  return best;
}

Decision keep_unless_improved(const CostContext& ctx, std::size_t i, const Choice& best) {
  const Decision& current = ctx.decisions()[i];
  if (best.decision == current) return current;
  return improves(best.cost, ctx.device_cost(i)) ? best.decision : current;
}

}  // namespace

Decision best_response(const CostContext& ctx, std::size_t i) {
  const Choice best = ctx.model().is_optimal() ? best_option_separable(ctx, i)
                                               : best_option_full(ctx, i);
  return keep_unless_improved(ctx, i, best);
}

Decision best_response_exhaustive(const CostContext& ctx, std::size_t i) {
  return keep_unless_improved(ctx, i, best_option_full(ctx, i));
}

CosResult cos_run(const Scenario& scenario, const CostModel& model, const CosOptions& options) {
  CostContext ctx(scenario, model, all_local(scenario));
  const std::size_t n = scenario.num_devices();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(options.seed);

  CosResult result;
  double psi = options.record_trace ? potential(scenario, ctx.decisions(), model) : 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    ++result.sweeps;
    if (options.order == UpdateOrder::SeededRandom) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      const Decision next = best_response(ctx, i);
      if (next == ctx.decisions()[i]) continue;
      if (result.iterations >= options.max_iterations) {
        throw NonTerminationError("best-response dynamics exceeded " +
                                  std::to_string(options.max_iterations) + " updates");
      }
      const Decision prev = ctx.decisions()[i];
      ctx.apply(i, next);
      ++result.iterations;
      changed = true;
      if (options.record_trace) {
        const double after = potential(scenario, ctx.decisions(), model);
        result.trace.push_back({result.iterations, i, prev, next, after, after - psi,
                                reduced_system_cost(scenario, ctx.decisions(), model)});
        psi = after;
      }
    }
  }
  result.equilibrium = ctx.decisions();
  result.system_cost = reduced_system_cost(scenario, result.equilibrium, model);
  return result;
}

CosResult cos_run(const Scenario& scenario, InterPolicy policy, const CosOptions& options) {
  return cos_run(scenario, cost_model_for(scenario, policy), options);
}

NeCertificate certify_ne(const CostContext& ctx) {
  const Scenario& sc = ctx.scenario();
  const auto options = decision_options(sc);
  for (std::size_t i = 0; i < sc.num_devices(); ++i) {
    const double current = ctx.device_cost(i);
    for (const Decision& d : options) {
      if (d == ctx.decisions()[i]) continue;
      const double alt = ctx.option_cost(i, d);
      if (improves(alt, current)) return {false, Deviation{i, d, current, alt}};
    }
  }
  return {};
}

NeCertificate certify_ne(const Scenario& scenario, const CostModel& model,
                         const DecisionVector& dv) {
  return certify_ne(CostContext(scenario, model, dv));
}

std::optional<std::size_t> local_bound_violation(const CostContext& ctx) {
  for (std::size_t i = 0; i < ctx.decisions().size(); ++i) {
    const double t = ctx.local_term(i);
    if (ctx.device_cost(i) > t + kImprovementEpsilon * t) return i;
  }
  return std::nullopt;
}

IterationBoundConstants iteration_constants(const Scenario& scenario) {
  IterationBoundConstants k{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < scenario.num_devices(); ++i) {
    double solo = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
      for (std::size_t c = 0; c < scenario.num_ecs(); ++c) {
        for (std::size_t s = 0; s < scenario.num_slices(); ++s) {
          if (!scenario.ec_in_slice(c, s)) continue;
          solo = std::min(solo, radio_constant(scenario, i, a) +
                                    compute_constant(scenario, i, c, s));
        }
      }
    }
    const double t = local_time(scenario, i);
    k.c_min = std::min(k.c_min, std::min(t, solo));
    k.c_max = std::max(k.c_max, std::max(t, solo));
  }
  return k;
}

void write_trace_csv(std::ostream& out, const CosResult& result) {
  out << "step,device,old_decision,new_decision,potential,system_cost\n";
  for (const TraceEntry& e : result.trace) {
    out << e.step << ',' << e.device << ',' << e.from.to_string() << ',' << e.to.to_string() << ','
        << format_double(e.potential) << ',' << format_double(e.system_cost) << '\n';
  }
}

}  // namespace sliceoff
