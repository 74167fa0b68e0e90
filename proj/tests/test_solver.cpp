#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "sliceoff/allocation.hpp"
#include "sliceoff/cost.hpp"
#include "sliceoff/error.hpp"
#include "sliceoff/oracle.hpp"
#include "sliceoff/scenario.hpp"
#include "sliceoff/solver.hpp"

using namespace sliceoff;
using fixtures::Builder;
using fixtures::close;

namespace {

Scenario random_instance(std::uint64_t seed, std::size_t n, std::size_t s = 2) {
  SyntheticParams p;
  p.n_devices = n;
  p.n_aps = 3;
  p.n_slices = s;
  p.seed = seed;
  return synthetic_scenario(p);
}

// Round-robin best response where every candidate profile is priced with
// inter-slice shares recomputed for that profile. Returns the system cost
// after every executed update.
std::vector<double> dynamic_share_trajectory(const Scenario& sc) {
  const auto opts = decision_options(sc);
  auto cost_of = [&](const DecisionVector& d, std::size_t i) {
    return reduced_wd_cost_fixed(sc, d, optimal_inter(sc, d), i);
  };
  DecisionVector dv = all_local(sc);
  std::vector<double> out;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < sc.num_devices(); ++i) {
      const double current = cost_of(dv, i);
      Decision best = dv[i];
      double best_cost = std::numeric_limits<double>::infinity();
      for (const Decision& d : opts) {
        DecisionVector trial = dv;
        trial[i] = d;
        const double c = cost_of(trial, i);
        if (c < best_cost) {
          best_cost = c;
          best = d;
        }
      }
      if (best != dv[i] && best_cost < current - kImprovementEpsilon * current) {
        dv[i] = best;
        out.push_back(reduced_system_cost_fixed(sc, dv, optimal_inter(sc, dv)));
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("lone device best response") {
  SUBCASE("huge data, tiny task stays local") {
    Builder bl(1, 2, 1, 1);
    bl.data = {1e9};
    bl.complexity = {1e-3};
    const Scenario sc = bl.build();
    CostContext ctx(sc, CostModel::optimal_inter(), all_local(sc));
    CHECK(best_response(ctx, 0) == Decision::local());
  }
  SUBCASE("the only offload option wins when faster") {
    Builder bl(1, 1, 1, 1);
    bl.data = {1.0};
    bl.complexity = {4.0};
    bl.ec(0, 0) = 8.0;
    const Scenario sc = bl.build();
    for (const CostModel& m : {CostModel::optimal_inter(), CostModel::fixed_inter(Matrix(1, 1, 1.0))}) {
      CostContext ctx(sc, m, all_local(sc));
      CHECK(best_response(ctx, 0) == Decision::offload(0, 0, 0));
    }
  }
}

TEST_CASE("best response steers away from a congested AP") {
  Builder bl(3, 2, 1, 1);
  bl.complexity = {100.0, 100.0, 100.0};
  bl.ec(0, 0) = 1000.0;
  const Scenario sc = bl.build();
  const DecisionVector dv{Decision::offload(0, 0, 0), Decision::offload(0, 0, 0), Decision::local()};
  CostContext ctx(sc, CostModel::optimal_inter(), dv);
  CHECK(best_response(ctx, 2) == Decision::offload(1, 0, 0));
  CHECK(best_response_exhaustive(ctx, 2) == Decision::offload(1, 0, 0));
}

TEST_CASE("separable best response matches full search") {
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Scenario sc = random_instance(seed, 8, 1 + seed % 4);
    CostContext ctx(sc, CostModel::optimal_inter(), random_decisions(sc, rng));
    for (std::size_t i = 0; i < sc.num_devices(); ++i) {
      CHECK(best_response(ctx, i) == best_response_exhaustive(ctx, i));
    }
  }
}

TEST_CASE("best response is the minimum over all options") {
  std::mt19937_64 rng(43);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Scenario sc = random_instance(seed, 6);
    for (const CostModel& m : {CostModel::optimal_inter(), CostModel::fixed_inter(baseline_equal(sc))}) {
      CostContext ctx(sc, m, random_decisions(sc, rng));
      for (std::size_t i = 0; i < sc.num_devices(); ++i) {
        const Decision br = best_response(ctx, i);
        double lowest = std::numeric_limits<double>::infinity();
        for (const Decision& d : decision_options(sc)) {
          DecisionVector next = ctx.decisions();
          next[i] = d;
          lowest = std::min(lowest, reduced_wd_cost(sc, next, m, i));
        }
        CHECK(close(ctx.option_cost(i, br), lowest, 1e-9));
      }
    }
  }
}

TEST_CASE("single device reaches the global argmin in one update") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario sc = random_instance(seed, 1);
    const CosResult r = cos_run(sc, InterPolicy::Optimal);
    CHECK(r.iterations <= 1);
    const OracleResult opt = exhaustive_optimal(sc, CostModel::optimal_inter());
    CHECK(r.equilibrium == opt.optimum);
  }
}

TEST_CASE("local-dominant scenario takes no iterations") {
  Builder bl(4, 2, 2, 2);
  bl.data = std::vector<double>(4, 1e6);
  bl.local = std::vector<double>(4, 1e3);
  const Scenario sc = bl.build();
  for (InterPolicy p : {InterPolicy::Optimal, InterPolicy::Equal, InterPolicy::CloudProportional}) {
    const CosResult r = cos_run(sc, p);
    CHECK(r.iterations == 0);
    CHECK(r.sweeps == 1);
    CHECK(r.equilibrium == all_local(sc));
  }
}

TEST_CASE("COS output is a certified equilibrium within the local bound") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const Scenario sc = random_instance(seed, 12, 1 + seed % 4);
    for (InterPolicy p : {InterPolicy::Optimal, InterPolicy::Equal, InterPolicy::CloudProportional}) {
      for (UpdateOrder o : {UpdateOrder::RoundRobin, UpdateOrder::SeededRandom}) {
        const CosResult r = cos_run(sc, p, {o, seed});
        const CostModel m = cost_model_for(sc, p);
        CostContext ctx(sc, m, r.equilibrium);
        CHECK(certify_ne(ctx).is_equilibrium);
        CHECK_FALSE(local_bound_violation(ctx).has_value());
        CHECK(close(r.system_cost, reduced_system_cost(sc, r.equilibrium, m), 1e-12));
      }
    }
  }
}

TEST_CASE("trace: potential strictly decreases") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario sc = random_instance(seed, 10);
    for (InterPolicy p : {InterPolicy::Optimal, InterPolicy::Equal}) {
      CosOptions o;
      o.record_trace = true;
      const CosResult r = cos_run(sc, p, o);
      REQUIRE(r.trace.size() == r.iterations);
      const CostModel m = cost_model_for(sc, p);
      double start = 0.0;
      for (std::size_t i = 0; i < sc.num_devices(); ++i) start += local_time(sc, i);
      CHECK(close(potential(sc, all_local(sc), m), start, 1e-12));
      double prev = start;
      for (const TraceEntry& e : r.trace) {
        CHECK(e.delta_potential < 0.0);
        CHECK(close(e.potential - prev, e.delta_potential, 1e-9));
        prev = e.potential;
      }
      CHECK(prev <= start);
    }
  }
}

TEST_CASE("optimal-share dynamics equal dynamics with recomputed inter-slice shares") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Scenario sc = random_instance(seed, 6, 1 + seed % 3);
    CosOptions o;
    o.record_trace = true;
    const CosResult r = cos_run(sc, CostModel::optimal_inter(), o);
    const std::vector<double> naive = dynamic_share_trajectory(sc);
    REQUIRE(naive.size() == r.trace.size());
    for (std::size_t k = 0; k < naive.size(); ++k) {
      CHECK(close(r.trace[k].system_cost, naive[k], 1e-9));
    }
  }
}

TEST_CASE("iteration cap raises") {
  const Scenario sc = random_instance(3, 10);
  CosOptions o;
  o.max_iterations = 1;
  CHECK_THROWS_AS(cos_run(sc, InterPolicy::Optimal, o), NonTerminationError);
}

TEST_CASE("seeded random order is reproducible") {
  const Scenario sc = random_instance(9, 15);
  const CosResult a = cos_run(sc, InterPolicy::Equal, {UpdateOrder::SeededRandom, 5});
  const CosResult b = cos_run(sc, InterPolicy::Equal, {UpdateOrder::SeededRandom, 5});
  CHECK(a.equilibrium == b.equilibrium);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("update order names") {
  CHECK(parse_update_order("round-robin") == UpdateOrder::RoundRobin);
  CHECK(parse_update_order("random") == UpdateOrder::SeededRandom);
  CHECK(to_string(UpdateOrder::SeededRandom) == "random");
  CHECK_THROWS(parse_update_order("sideways"));
}

TEST_CASE("certification reports a planted improving move") {
  Builder bl(2, 1, 1, 1);
  bl.complexity = {100.0, 100.0};
  bl.ec(0, 0) = 1000.0;
  const Scenario sc = bl.build();
  const DecisionVector dv{Decision::offload(0, 0, 0), Decision::local()};
  const NeCertificate cert = certify_ne(sc, CostModel::optimal_inter(), dv);
  REQUIRE_FALSE(cert.is_equilibrium);
  REQUIRE(cert.violation.has_value());
  CHECK(cert.violation->device == 1);
  CHECK(cert.violation->move == Decision::offload(0, 0, 0));
  CHECK(cert.violation->deviation_cost < cert.violation->current_cost);
}

TEST_CASE("certification agrees with a full deviation scan") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Scenario sc = random_instance(seed, 3);
    const CostModel m = CostModel::optimal_inter();
    const OracleResult opt = exhaustive_optimal(sc, m);
    bool stable = true;
    for (std::size_t i = 0; i < sc.num_devices(); ++i) {
      const double cur = reduced_wd_cost(sc, opt.optimum, m, i);
      for (const Decision& d : decision_options(sc)) {
        DecisionVector next = opt.optimum;
        next[i] = d;
        if (reduced_wd_cost(sc, next, m, i) < cur - kImprovementEpsilon * cur) stable = false;
      }
    }
    CHECK(certify_ne(sc, m, opt.optimum).is_equilibrium == stable);
  }
}

TEST_CASE("iteration constants") {
  SUBCASE("single option") {
    Builder bl(1, 1, 1, 1);
    bl.data = {2.0};
    bl.complexity = {3.0};
    const Scenario sc = bl.build();
    const IterationBoundConstants k = iteration_constants(sc);
    CHECK(k.c_min == doctest::Approx(3.0));
    CHECK(k.c_max == doctest::Approx(5.0));
  }
  SUBCASE("homogeneous devices") {
    const Scenario sc = Builder(4, 2, 2, 2).build();
    const IterationBoundConstants k = iteration_constants(sc);
    CHECK(k.c_min == doctest::Approx(1.0));
    CHECK(k.c_max == doctest::Approx(2.0));
  }
  SUBCASE("enumeration oracle") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const Scenario sc = random_instance(seed, 5);
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t i = 0; i < sc.num_devices(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Decision& d : decision_options(sc)) {
          if (d.is_local()) continue;
          best = std::min(best, sc.data_size(i) / sc.rate(i, d.ap()) +
                                    sc.complexity(i) / sc.match_coeff(i, d.slice()) /
                                        sc.ec_capability(d.ec(), d.slice()));
        }
        const double t = sc.complexity(i) / sc.local_capability(i);
        lo = std::min(lo, std::min(t, best));
        hi = std::max(hi, std::max(t, best));
      }
      const IterationBoundConstants k = iteration_constants(sc);
      CHECK(close(k.c_min, lo, 1e-12));
      CHECK(close(k.c_max, hi, 1e-12));
      CHECK(k.c_min <= k.c_max);
    }
  }
}

TEST_CASE("trace CSV") {
  const Scenario sc = random_instance(2, 5);
  CosOptions o;
  o.record_trace = true;
  const CosResult r = cos_run(sc, InterPolicy::Optimal, o);
  std::ostringstream out;
  write_trace_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,device,old_decision,new_decision,potential,system_cost");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == r.iterations);
}
