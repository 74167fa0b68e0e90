#include <doctest.h>

#include <cmath>
#include <random>

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

Scenario small_instance(std::uint64_t seed, std::size_t n) {
  SyntheticParams p;
  p.n_devices = n;
  p.seed = seed;
  return synthetic_scenario(p);
}

}  // namespace

TEST_CASE("lone device optimum is its best response") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario sc = small_instance(seed, 1);
    const OracleResult r = exhaustive_optimal(sc, CostModel::optimal_inter());
    CHECK(r.evaluated == decision_options(sc).size());
    CostContext ctx(sc, CostModel::optimal_inter(), all_local(sc));
    CHECK(r.optimum.front() == best_response(ctx, 0));
  }
}

TEST_CASE("two identical devices spread over two identical APs") {
  Builder bl(2, 2, 1, 1);
  bl.local = {1e-3, 1e-3};
  const Scenario sc = bl.build();
  const OracleResult r = exhaustive_optimal(sc, CostModel::optimal_inter());
  CHECK(r.evaluated == 9);
  REQUIRE(r.optimum[0].is_offload());
  REQUIRE(r.optimum[1].is_offload());
  CHECK(r.optimum[0].ap() != r.optimum[1].ap());
  // Lexicographically smallest among the two symmetric optima.
  CHECK(r.optimum[0] == Decision::offload(0, 0, 0));
  // Separate APs: 1 + 1; shared EC: (1 + 1)^2.
  CHECK(r.optimal_cost == doctest::Approx(6.0));
}

TEST_CASE("evaluated count and size guard") {
  const Scenario sc = small_instance(4, 3);
  const auto k = decision_options(sc).size();
  CHECK(exhaustive_optimal(sc, CostModel::optimal_inter()).evaluated == k * k * k);
  CHECK_THROWS_AS(exhaustive_optimal(sc, CostModel::optimal_inter(), 1, k * k), SizeError);
}

TEST_CASE("oracle lower-bounds COS and agrees across worker counts") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Scenario sc = small_instance(seed, 2 + seed % 3);
    for (const CostModel& m : {CostModel::optimal_inter(), CostModel::fixed_inter(baseline_equal(sc))}) {
      const OracleResult one = exhaustive_optimal(sc, m, 1);
      const OracleResult many = exhaustive_optimal(sc, m, 3);
      CHECK(one.optimum == many.optimum);
      CHECK(one.optimal_cost == many.optimal_cost);
      CHECK(close(one.optimal_cost, reduced_system_cost(sc, one.optimum, m), 1e-12));
      CHECK(one.optimal_cost <= cos_run(sc, m).system_cost * (1 + 1e-12));
    }
  }
}

TEST_CASE("approximation ratio") {
  SUBCASE("COS optimal on a lone device") {
    const Scenario sc = small_instance(2, 1);
    CHECK(approximation_ratio(sc, UpdateOrder::RoundRobin, 0) == doctest::Approx(1.0));
  }
  SUBCASE("bounded on random small instances") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const Scenario sc = small_instance(seed, 2 + seed % 4);
      for (UpdateOrder o : {UpdateOrder::RoundRobin, UpdateOrder::SeededRandom}) {
        const double r = approximation_ratio(sc, o, seed);
        CHECK(r >= 1.0 - 1e-12);
        CHECK(r <= 2.62);
      }
    }
  }
}

TEST_CASE("closed-form shares survive random perturbation") {
  std::mt19937_64 rng(61);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SyntheticParams p;
    p.n_devices = 8;
    p.n_aps = 3;
    p.seed = seed;
    const Scenario sc = synthetic_scenario(p);
    const DecisionVector dv = random_decisions(sc, rng);
    const KktCheck k = perturbation_kkt_check(sc, dv, 200, 1.0, seed);
    CHECK(k.passed);
    CHECK(k.trials == 200);
    CHECK(k.min_perturbed_cost >= k.optimal_cost * (1 - kKktTolerance));
  }
}

TEST_CASE("zero-magnitude perturbation never fails") {
  std::mt19937_64 rng(67);
  const Scenario sc = small_instance(5, 5);
  const DecisionVector dv = random_decisions(sc, rng);
  CHECK(perturbation_kkt_check(sc, dv, 50, 0.0, 1).passed);
}

TEST_CASE("swapping two devices' shares costs strictly more") {
  Builder bl(2, 1, 1, 1);
  bl.data = {9.0, 1.0};
  bl.complexity = {4.0, 1.0};
  const Scenario sc = bl.build();
  const DecisionVector dv(2, Decision::offload(0, 0, 0));
  AllocationCoefficients c = optimal_coefficients(sc, dv);
  const double best = system_cost(sc, dv, c).system;
  std::swap(c.intra.radio.at({0, 0, 0}), c.intra.radio.at({1, 0, 0}));
  std::swap(c.intra.compute.at({0, 0, 0}), c.intra.compute.at({1, 0, 0}));
  const double swapped = system_cost(sc, dv, c).system;
  // Direct evaluation: radio shares 3/4, 1/4 and compute shares 2/3, 1/3.
  CHECK(best == doctest::Approx(9.0 / 0.75 + 1.0 / 0.25 + 4.0 / (2.0 / 3) + 1.0 / (1.0 / 3)));
  CHECK(swapped == doctest::Approx(9.0 / 0.25 + 1.0 / 0.75 + 4.0 / (1.0 / 3) + 1.0 / (2.0 / 3)));
  CHECK(swapped > best);
}
