#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "sliceoff/error.hpp"
#include "sliceoff/experiments.hpp"

using namespace sliceoff;
using fixtures::Builder;
using fixtures::close;

namespace {

SweepConfig small_config() {
  SweepConfig c;
  c.n_devices = {5, 8};
  c.n_slices = {1, 2, 3};
  c.repetitions = 3;
  c.seed_base = 11;
  return c;
}

std::string csv_of(const ExperimentReport& r) {
  std::ostringstream out;
  write_report_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("slice statistics") {
  SUBCASE("all local") {
    Builder bl(3, 1, 1, 2);
    bl.data = std::vector<double>(3, 1e6);
    const Scenario sc = bl.build();
    const SliceStats st = slice_stats(sc, all_local(sc), InterPolicy::Optimal);
    CHECK(st.offloaders == std::vector<std::size_t>{0, 0});
    CHECK(st.cost_ratio == std::vector<double>{0.0, 0.0});
    CHECK(st.local_share == 1.0);
    CHECK(st.system_cost == doctest::Approx(3.0));
  }
  SUBCASE("single offloader in the second slice") {
    Builder bl(2, 1, 1, 2);
    const Scenario sc = bl.build();
    const DecisionVector dv{Decision::local(), Decision::offload(0, 0, 1)};
    const SliceStats st = slice_stats(sc, dv, InterPolicy::Optimal);
    CHECK(st.offloaders == std::vector<std::size_t>{0, 1});
    CHECK(st.system_cost == doctest::Approx(3.0));
    CHECK(st.cost_ratio[1] == doctest::Approx(2.0 / 3.0));
    CHECK(st.local_share == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("recount by full scan") {
    std::mt19937_64 rng(3);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      SyntheticParams p;
      p.n_devices = 9;
      p.n_slices = 3;
      p.seed = seed;
      const Scenario sc = synthetic_scenario(p);
      const DecisionVector dv = random_decisions(sc, rng);
      for (InterPolicy pol : {InterPolicy::Optimal, InterPolicy::Equal, InterPolicy::CloudProportional}) {
        const SliceStats st = slice_stats(sc, dv, pol);
        std::size_t total = 0, offloaders = 0;
        double shares = st.local_share;
        for (std::size_t s = 0; s < 3; ++s) {
          std::size_t count = 0;
          for (const Decision& d : dv) count += d.is_offload() && d.slice() == s ? 1 : 0;
          CHECK(st.offloaders[s] == count);
          total += st.offloaders[s];
          shares += st.cost_ratio[s];
        }
        for (const Decision& d : dv) offloaders += d.is_offload() ? 1 : 0;
        CHECK(total == offloaders);
        CHECK(std::abs(shares - 1.0) <= 1e-9);
        CHECK(close(st.system_cost, reduced_system_cost(sc, dv, cost_model_for(sc, pol)), 1e-9));
      }
    }
  }
}

TEST_CASE("performance gain") {
  SUBCASE("single slice") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      GeneratorParams p;
      p.n_devices = 15;
      p.seed = seed;
      const Scenario sc = generate(p);
      CHECK(std::abs(metric_pg(sc, InterPolicy::Optimal) - 1.0) <= 1e-9);
      CHECK(std::abs(metric_pg(sc, InterPolicy::CloudProportional) - 1.0) <= 1e-9);
    }
  }
  SUBCASE("same policy on both sides") {
    GeneratorParams p;
    p.n_slices = 3;
    CHECK(metric_pg(generate(p), InterPolicy::Equal) == 1.0);
  }
  SUBCASE("equal split starves the capable slice") {
    Builder bl(4, 1, 2, 2);
    bl.ec = fixtures::mat({{100.0, 0.0}, {0.0, 0.01}});
    bl.local = std::vector<double>(4, 1e-3);
    const Scenario sc = bl.build();
    const double eq = cos_run(sc, InterPolicy::Equal).system_cost;
    const double opt = cos_run(sc, InterPolicy::Optimal).system_cost;
    CHECK(opt == doctest::Approx(16.16));
    CHECK(metric_pg(sc, InterPolicy::Optimal) == doctest::Approx(eq / opt));
    CHECK(metric_pg(sc, InterPolicy::Optimal) > 1.5);
  }
}

TEST_CASE("sweep rows") {
  SweepConfig c;
  c.n_devices = {5};
  c.n_slices = {1};
  c.repetitions = 1;
  const ExperimentReport r = run_sweep(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.failures.empty());
  for (const ExperimentRow& row : r.rows) {
    CHECK(row.system_cost == doctest::Approx(r.rows.front().system_cost).epsilon(1e-12));
    CHECK(std::abs(row.pg - 1.0) <= 1e-9);
    CHECK(row.seed == 1);
    CHECK_FALSE(row.runtime_ms.has_value());
  }
}

TEST_CASE("sweep is sorted, certified and deterministic") {
  SweepConfig c = small_config();
  const ExperimentReport a = run_sweep(c);
  CHECK(a.rows.size() == 2 * 3 * 3 * 3);
  CHECK(a.failures.empty());
  for (std::size_t k = 1; k < a.rows.size(); ++k) {
    const auto& x = a.rows[k - 1];
    const auto& y = a.rows[k];
    CHECK(std::tie(x.n, x.s, x.seed, x.policy) < std::tie(y.n, y.s, y.seed, y.policy));
  }
  for (const ExperimentRow& row : a.rows) {
    CHECK(row.offloaders.size() == row.s);
    double shares = 0.0;
    for (double x : row.cost_ratio) shares += x;
    CHECK(shares <= 1.0 + 1e-9);
    if (row.s == 1 && row.policy != InterPolicy::Equal) CHECK(std::abs(row.pg - 1.0) <= 1e-9);
    if (row.policy == InterPolicy::Equal) CHECK(row.pg == 1.0);
  }
  c.workers = 3;
  const ExperimentReport b = run_sweep(c);
  CHECK(a.rows == b.rows);
  CHECK(csv_of(a) == csv_of(b));
}

TEST_CASE("sweep without the equal policy still reports gains") {
  SweepConfig c = small_config();
  c.policies = {InterPolicy::Optimal};
  c.n_slices = {2};
  const ExperimentReport r = run_sweep(c);
  CHECK(r.rows.size() == 2 * 3);
  for (const ExperimentRow& row : r.rows) CHECK(row.policy == InterPolicy::Optimal);

  SweepConfig full = small_config();
  full.n_slices = {2};
  const ExperimentReport f = run_sweep(full);
  std::size_t k = 0;
  for (const ExperimentRow& row : f.rows) {
    if (row.policy != InterPolicy::Optimal) continue;
    CHECK(row == r.rows[k++]);
  }
}

TEST_CASE("CSV round trip") {
  SweepConfig c = small_config();
  c.record_runtime = true;
  const ExperimentReport r = run_sweep(c);
  for (const ExperimentRow& row : r.rows) CHECK(row.runtime_ms.has_value());
  std::istringstream in(csv_of(r));
  CHECK(parse_report_csv(in) == r.rows);

  const std::string text = csv_of(run_sweep(small_config()));
  CHECK(text.rfind("seed,N,S,policy,system_cost,pg,iterations,n_s1,n_s2,n_s3,n_s4,"
                   "cr_s1,cr_s2,cr_s3,cr_s4,runtime_ms\n",
                   0) == 0);
  std::istringstream bad("seed,N\n");
  CHECK_THROWS(parse_report_csv(bad));
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "sliceoff_test_report";
  std::filesystem::create_directories(dir);
  const SweepConfig c = small_config();
  const ExperimentReport r = run_sweep(c);
  save_report(r, c, dir / "out.csv");
  std::ifstream csv(dir / "out.csv");
  CHECK(parse_report_csv(csv) == r.rows);
  std::ifstream meta_in(dir / "out.csv.meta.json");
  const auto meta = nlohmann::json::parse(meta_in);
  CHECK(meta.at("tool_version") == kToolVersion);
  CHECK(meta.at("slice_mapping_version") == default_slice_mapping().version);
  CHECK(meta.at("rows") == r.rows.size());
  CHECK(meta.contains("created"));
  CHECK(sweep_config_to_json(sweep_config_from_json(meta.at("config"))) == meta.at("config"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(save_report(r, c, dir / "missing" / "out.csv"), IoError);
}

TEST_CASE("sweep configuration") {
  const auto doc = nlohmann::json::parse(R"({
    "n_devices": [10, 20], "n_slices": [2], "policies": ["optimal", "cloud_proportional"],
    "seed_base": 7, "repetitions": 4, "order": "random", "workers": 2,
    "generator": {"n_aps": 4, "ap_bandwidths": [1e6, 1e6, 2e6, 2e6]}})");
  const SweepConfig c = sweep_config_from_json(doc);
  CHECK(c.n_devices == std::vector<std::size_t>{10, 20});
  CHECK(c.policies == std::vector<InterPolicy>{InterPolicy::Optimal, InterPolicy::CloudProportional});
  CHECK(c.seed_base == 7);
  CHECK(c.repetitions == 4);
  CHECK(c.order == UpdateOrder::SeededRandom);
  CHECK(c.generator.n_aps == 4);

  auto fails_on = [](const char* text, const char* field) {
    try {
      sweep_config_from_json(nlohmann::json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what()).find(field) != std::string::npos;
    }
    return false;
  };
  CHECK(fails_on(R"({"n_slices": [5]})", "n_slices"));
  CHECK(fails_on(R"({"n_devices": []})", "n_devices"));
  CHECK(fails_on(R"({"policies": ["best"]})", "policies"));
  CHECK(fails_on(R"({"order": "zigzag"})", "order"));
  CHECK(fails_on(R"({"repetitions": 0})", "repetitions"));
  CHECK(fails_on(R"({"generator": {"grid_points": 3}})", "grid_points"));
  CHECK(fails_on(R"({"repetitions": "many"})", "sweep config"));
  CHECK_THROWS_AS(load_sweep_config("/nonexistent/sweep.json"), IoError);
}
