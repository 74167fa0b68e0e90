#ifndef SLICEOFF_EXPERIMENTS_HPP_
#define SLICEOFF_EXPERIMENTS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sliceoff/allocation.hpp"
#include "sliceoff/model.hpp"
#include "sliceoff/scenario.hpp"
#include "sliceoff/solver.hpp"

namespace sliceoff {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::size_t kMaxCsvSlices = 4;

// Offloaders and cost share per slice for one equilibrium.
struct SliceStats {
  std::vector<std::size_t> offloaders;  // n^s
  std::vector<double> cost_ratio;       // C^s / C
  double local_share = 0.0;             // local cost / C
  double system_cost = 0.0;             // C
};

// Evaluates `dv` with optimal intra-slice shares and the policy's inter-slice
// shares (closed form for Optimal).
SliceStats slice_stats(const Scenario& scenario, const DecisionVector& dv, InterPolicy policy);

// Runs COS under `policy` and reports its slice statistics.
SliceStats metric_slice_stats(const Scenario& scenario, InterPolicy policy,
                              const CosOptions& options = {});

// Equilibrium system cost under the equal split over that under `policy`,
// each from its own COS run.
double metric_pg(const Scenario& scenario, InterPolicy policy, const CosOptions& options = {});

struct SweepConfig {
  std::vector<std::size_t> n_devices{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
  std::vector<std::size_t> n_slices{1, 2, 3, 4};
  std::vector<InterPolicy> policies{InterPolicy::Optimal, InterPolicy::Equal,
                                    InterPolicy::CloudProportional};
  std::uint64_t seed_base = 1;
  std::size_t repetitions = 30;
  UpdateOrder order = UpdateOrder::RoundRobin;
  bool record_runtime = false;
  std::size_t workers = 1;   // 0 = hardware concurrency
  GeneratorParams generator;  // n_devices, n_slices and seed are overridden per cell
};

// Throws ConfigError naming the offending field.
void validate(const SweepConfig& config);
SweepConfig sweep_config_from_json(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir = {});
SweepConfig load_sweep_config(const std::filesystem::path& path);
nlohmann::json sweep_config_to_json(const SweepConfig& config);

struct ExperimentRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  InterPolicy policy = InterPolicy::Optimal;
  double system_cost = 0.0;
  double pg = 1.0;
  std::size_t iterations = 0;
  std::vector<std::size_t> offloaders;  // size s
  std::vector<double> cost_ratio;       // size s
  std::optional<double> runtime_ms;

  bool operator==(const ExperimentRow&) const = default;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;    // sorted by (N, S, seed, policy)
  std::vector<std::string> failures;  // equilibria that failed certification
};

// One row per (repetition, N, S, policy). The scenario for repetition k uses
// seed seed_base + k. Every equilibrium is certified and checked against the
// local-time bound; failures are listed rather than thrown.
ExperimentReport run_sweep(const SweepConfig& config);

// seed,N,S,policy,system_cost,pg,iterations,n_s1..n_s4,cr_s1..cr_s4,runtime_ms
void write_report_csv(std::ostream& out, const ExperimentReport& report);
std::vector<ExperimentRow> parse_report_csv(std::istream& in);

// Writes the CSV and a "<path>.meta.json" sidecar (config echo, slice
// mapping version, tool version, creation time). Throws IoError.
void save_report(const ExperimentReport& report, const SweepConfig& config,
                 const std::filesystem::path& csv_path);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t instances = 20;
};

// Cross-checks on small synthetic instances (N <= 5, A = C = S = 2): the
// three cost formulations agree, the potential is exact, closed-form shares
// survive random perturbation, separable and exhaustive best responses agree,
// and COS equilibria are certified and within the approximation bound of the
// exhaustive optimum.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace sliceoff

#endif  // SLICEOFF_EXPERIMENTS_HPP_
