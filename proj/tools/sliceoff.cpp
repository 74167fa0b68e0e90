// Command-line front end: generate scenarios, solve one instance, run seeded
// sweeps, and run the verification checks.
//
// Exit codes: 0 success, 1 configuration error, 2 verification failure,
// 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sliceoff/allocation.hpp"
#include "sliceoff/error.hpp"
#include "sliceoff/experiments.hpp"
#include "sliceoff/numfmt.hpp"
#include "sliceoff/scenario.hpp"
#include "sliceoff/scenario_json.hpp"
#include "sliceoff/solver.hpp"

namespace {

using namespace sliceoff;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

struct ScenarioSource {
  std::string scenario_path;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> devices;
  std::optional<std::size_t> slices;
};

void add_source_options(CLI::App* cmd, ScenarioSource& src) {
  cmd->add_option("--config", src.config_path, "Generator parameters (JSON)");
  cmd->add_option("--seed", src.seed, "Generator seed");
  cmd->add_option("--devices", src.devices, "Number of wireless devices");
  cmd->add_option("--slices", src.slices, "Number of slices (1-4)");
}

Scenario load_or_generate(const ScenarioSource& src) {
  if (!src.scenario_path.empty()) return load_scenario(src.scenario_path);
  GeneratorParams params =
      src.config_path.empty() ? GeneratorParams{} : load_generator_params(src.config_path);
  if (src.seed) params.seed = *src.seed;
  if (src.devices) params.n_devices = *src.devices;
  if (src.slices) params.n_slices = *src.slices;
  return generate(params);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

int cmd_generate(const ScenarioSource& src, const std::string& out_path) {
  const Scenario sc = load_or_generate(src);
  if (out_path.empty()) {
    std::cout << dump_scenario(sc);
  } else {
    save_scenario(sc, out_path);
  }
  return kExitOk;
}

void dump_coefficients(const Scenario& sc, const DecisionVector& dv, InterPolicy policy) {
  const Matrix b = inter_shares(sc, policy, dv);
  const IntraShares w = optimal_intra(sc, dv);
  std::cout << "inter-slice shares (AP x slice):\n";
  for (std::size_t a = 0; a < b.rows(); ++a) {
    std::cout << "  ap " << a << ":";
    for (double x : b.row(a)) std::cout << ' ' << format_double(x);
    std::cout << '\n';
  }
  std::cout << "intra-slice shares (device, resource, slice, share):\n";
  for (const auto& [k, v] : w.radio) {
    std::cout << "  radio   " << k.device << ' ' << k.resource << ' ' << k.slice << ' '
              << format_double(v) << '\n';
  }
  for (const auto& [k, v] : w.compute) {
    std::cout << "  compute " << k.device << ' ' << k.resource << ' ' << k.slice << ' '
              << format_double(v) << '\n';
  }
}

int cmd_solve(const ScenarioSource& src, const std::string& policy_name,
              const std::string& order_name, std::uint64_t order_seed, bool dump_coeffs,
              const std::string& trace_path) {
  const Scenario sc = load_or_generate(src);
  const InterPolicy policy = parse_inter_policy(policy_name);
  CosOptions opts;
  opts.order = parse_update_order(order_name);
  opts.seed = order_seed;
  opts.record_trace = !trace_path.empty();
  const CosResult res = cos_run(sc, policy, opts);
  const SliceStats stats = slice_stats(sc, res.equilibrium, policy);
  const IterationBoundConstants k = iteration_constants(sc);

  std::cout << "policy       " << to_string(policy) << '\n'
            << "devices      " << sc.num_devices() << '\n'
            << "slices       " << sc.num_slices() << '\n'
            << "system_cost  " << format_double(stats.system_cost) << '\n'
            << "iterations   " << res.iterations << '\n'
            << "sweeps       " << res.sweeps << '\n'
            << "c_min        " << format_double(k.c_min) << '\n'
            << "c_max        " << format_double(k.c_max) << '\n';
  for (std::size_t s = 0; s < sc.num_slices(); ++s) {
    std::cout << "slice " << s + 1 << "      offloaders " << stats.offloaders[s] << ", cost ratio "
              << format_double(stats.cost_ratio[s]) << '\n';
  }
  std::cout << "local share  " << format_double(stats.local_share) << '\n';
  if (dump_coeffs) dump_coefficients(sc, res.equilibrium, policy);
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    write_trace_csv(out, res);
    if (!out) throw IoError("write failed: " + trace_path);
  }
  const NeCertificate cert = certify_ne(sc, cost_model_for(sc, policy), res.equilibrium);
  if (!cert) {
    std::cerr << "equilibrium check failed for device " << cert.violation->device << '\n';
    return kExitVerify;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              std::optional<std::uint64_t> seed, const std::string& order_name,
              std::optional<std::size_t> workers, bool timing) {
  SweepConfig config = config_path.empty() ? SweepConfig{} : load_sweep_config(config_path);
  if (seed) config.seed_base = *seed;
  if (!order_name.empty()) config.order = parse_update_order(order_name);
  if (workers) config.workers = *workers;
  if (timing) config.record_runtime = true;
  const ExperimentReport report = run_sweep(config);
  save_report(report, config, out_path);
  std::cerr << "wrote " << report.rows.size() << " rows to " << out_path << '\n';
  for (const std::string& f : report.failures) std::cerr << "certification failure: " << f << '\n';
  return report.failures.empty() ? kExitOk : kExitVerify;
}

int cmd_verify(std::uint64_t seed, std::size_t instances) {
  bool ok = true;
  for (const CheckResult& c : run_verification({seed, instances})) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(26) << c.name
              << c.detail << '\n';
    ok = ok && c.passed;
  }
  return ok ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slice-aware computation offloading: closed-form resource sharing and "
               "best-response offloading decisions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  ScenarioSource gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Emit a generated scenario as JSON");
  add_source_options(gen, gen_src);
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  ScenarioSource solve_src;
  std::string policy = "optimal", order = "round-robin", trace;
  std::uint64_t order_seed = 0;
  bool dump_coeffs = false;
  auto* solve = app.add_subcommand("solve", "Run COS on one scenario and print cost and iterations");
  add_source_options(solve, solve_src);
  solve->add_option("--scenario", solve_src.scenario_path, "Scenario JSON (instead of generating)");
  solve->add_option("--policy", policy, "optimal | equal | cloud-proportional");
  solve->add_option("--order", order, "round-robin | random");
  solve->add_option("--order-seed", order_seed, "Seed for the random update order");
  solve->add_flag("--dump-coeffs", dump_coeffs, "Print inter- and intra-slice shares");
  solve->add_option("--trace", trace, "Write the improvement path as CSV");

  std::string sweep_config, sweep_out, sweep_order;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<std::size_t> sweep_workers;
  bool timing = false;
  auto* sweep = app.add_subcommand("sweep", "Run a seeded parameter sweep and write CSV");
  sweep->add_option("--config", sweep_config, "Sweep configuration (JSON)");
  sweep->add_option("--out", sweep_out, "CSV output path")->required();
  sweep->add_option("--seed", sweep_seed, "Override seed_base");
  sweep->add_option("--order", sweep_order, "round-robin | random");
  sweep->add_option("--workers", sweep_workers, "Worker threads (0 = all cores)");
  sweep->add_flag("--timing", timing, "Fill the runtime_ms column");

  std::uint64_t verify_seed = 1;
  std::size_t verify_instances = 20;
  auto* verify = app.add_subcommand("verify", "Run oracle and invariant checks on small instances");
  verify->add_option("--seed", verify_seed, "Seed for the random instances");
  verify->add_option("--instances", verify_instances, "Number of instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen) return cmd_generate(gen_src, gen_out);
    if (*solve) return cmd_solve(solve_src, policy, order, order_seed, dump_coeffs, trace);
    if (*sweep) return cmd_sweep(sweep_config, sweep_out, sweep_seed, sweep_order, sweep_workers,
                                 timing);
    if (*verify) return cmd_verify(verify_seed, verify_instances);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NonTerminationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerify;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
