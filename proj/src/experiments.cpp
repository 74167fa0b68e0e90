#include "sliceoff/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "sliceoff/cost.hpp"
#include "sliceoff/error.hpp"
#include "sliceoff/numfmt.hpp"

namespace sliceoff {

SliceStats slice_stats(const Scenario& scenario, const DecisionVector& dv, InterPolicy policy) {
  const AllocationCoefficients coeffs{inter_shares(scenario, policy, dv),
                                      optimal_intra(scenario, dv)};
  const CostBreakdown cost = system_cost(scenario, dv, coeffs);
  SliceStats out;
  out.system_cost = cost.system;
  out.offloaders.assign(scenario.num_slices(), 0);
  for (const Decision& d : dv) {
    if (d.is_offload()) ++out.offloaders[d.slice()];
  }
  out.cost_ratio.resize(scenario.num_slices());
  for (std::size_t s = 0; s < scenario.num_slices(); ++s) {
    out.cost_ratio[s] = cost.per_slice[s] / cost.system;
  }
  out.local_share = cost.local_total / cost.system;
  return out;
}

SliceStats metric_slice_stats(const Scenario& scenario, InterPolicy policy,
                              const CosOptions& options) {
  return slice_stats(scenario, cos_run(scenario, policy, options).equilibrium, policy);
}

double metric_pg(const Scenario& scenario, InterPolicy policy, const CosOptions& options) {
  const auto equal = cos_run(scenario, InterPolicy::Equal, options);
  const auto other = cos_run(scenario, policy, options);
  return slice_stats(scenario, equal.equilibrium, InterPolicy::Equal).system_cost /
         slice_stats(scenario, other.equilibrium, policy).system_cost;
}

// --- configuration -------------------------------------------------------------

namespace {

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("sweep config: '" + field + "' " + what);
}

}  // namespace

void validate(const SweepConfig& c) {
  require(!c.n_devices.empty(), "n_devices", "must list at least one device count");
  for (std::size_t n : c.n_devices) require(n > 0, "n_devices", "entries must be positive");
  require(!c.n_slices.empty(), "n_slices", "must list at least one slice count");
  for (std::size_t s : c.n_slices) {
    require(s >= 1 && s <= kMaxCsvSlices, "n_slices", "entries must be in 1..4");
  }
  require(!c.policies.empty(), "policies", "must list at least one policy");
  require(c.repetitions > 0, "repetitions", "must be positive");
  for (std::size_t s : c.n_slices) {
    GeneratorParams p = c.generator;
    p.n_slices = s;
    p.n_devices = c.n_devices.front();
    try {
      validate(p);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("sweep config: 'generator' ") + e.what());
    }
  }
}

SweepConfig sweep_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  SweepConfig c;
  try {
    if (!doc.is_object()) throw ConfigError("sweep config: expected a JSON object");
    if (doc.contains("n_devices")) c.n_devices = doc["n_devices"].get<std::vector<std::size_t>>();
    if (doc.contains("n_slices")) c.n_slices = doc["n_slices"].get<std::vector<std::size_t>>();
    if (doc.contains("policies")) {
      c.policies.clear();
      for (const auto& p : doc["policies"]) {
        try {
          c.policies.push_back(parse_inter_policy(p.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("sweep config: 'policies' ") + e.what());
        }
      }
    }
    if (doc.contains("seed_base")) c.seed_base = doc["seed_base"].get<std::uint64_t>();
    if (doc.contains("repetitions")) c.repetitions = doc["repetitions"].get<std::size_t>();
    if (doc.contains("order")) {
      try {
        c.order = parse_update_order(doc["order"].get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("sweep config: 'order' ") + e.what());
      }
    }
    if (doc.contains("record_runtime")) c.record_runtime = doc["record_runtime"].get<bool>();
    if (doc.contains("workers")) c.workers = doc["workers"].get<std::size_t>();
    if (doc.contains("generator")) {
      c.generator = generator_params_from_json(doc["generator"], base_dir);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep config: ") + e.what());
  }
  validate(c);
  return c;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return sweep_config_from_json(doc, path.parent_path());
}

nlohmann::json sweep_config_to_json(const SweepConfig& c) {
  nlohmann::json doc;
  doc["n_devices"] = c.n_devices;
  doc["n_slices"] = c.n_slices;
  doc["policies"] = nlohmann::json::array();
  for (InterPolicy p : c.policies) doc["policies"].push_back(to_string(p));
  doc["seed_base"] = c.seed_base;
  doc["repetitions"] = c.repetitions;
  doc["order"] = to_string(c.order);
  doc["record_runtime"] = c.record_runtime;
  doc["workers"] = c.workers;
  doc["generator"] = generator_params_to_json(c.generator);
  doc["generator"].erase("n_devices");
  doc["generator"].erase("n_slices");
  doc["generator"].erase("seed");
  return doc;
}

// --- sweep ---------------------------------------------------------------------

namespace {

struct Cell {
  std::size_t rep;
  std::size_t n;
  std::size_t s;
};

struct CellResult {
  std::vector<ExperimentRow> rows;
  std::vector<std::string> failures;
};

CellResult run_cell(const SweepConfig& config, const Cell& cell) {
  GeneratorParams params = config.generator;
  params.n_devices = cell.n;
  params.n_slices = cell.s;
  params.seed = config.seed_base + cell.rep;
  const Scenario scenario = generate(params);

  CosOptions options;
  options.order = config.order;
  options.seed = params.seed;

  std::vector<InterPolicy> needed = config.policies;
  if (std::find(needed.begin(), needed.end(), InterPolicy::Equal) == needed.end()) {
    needed.push_back(InterPolicy::Equal);
  }

  struct Outcome {
    InterPolicy policy;
    CosResult run;
    SliceStats stats;
    double runtime_ms;
  };
  std::vector<Outcome> outcomes;
  CellResult out;
  for (InterPolicy policy : needed) {
    const CostModel model = cost_model_for(scenario, policy);
    const auto start = std::chrono::steady_clock::now();
    CosResult run = cos_run(scenario, model, options);
    const auto stop = std::chrono::steady_clock::now();

    const CostContext ctx(scenario, model, run.equilibrium);
    const NeCertificate cert = certify_ne(ctx);
    std::ostringstream where;
    where << "seed=" << params.seed << " N=" << cell.n << " S=" << cell.s
          << " policy=" << to_string(policy);
    if (!cert) {
      out.failures.push_back(where.str() + ": device " + std::to_string(cert.violation->device) +
                             " improves by moving to " + cert.violation->move.to_string());
    }
    if (const auto i = local_bound_violation(ctx)) {
      out.failures.push_back(where.str() + ": device " + std::to_string(*i) +
                             " pays more than its local time");
    }
    SliceStats stats = slice_stats(scenario, run.equilibrium, policy);
    outcomes.push_back({policy, std::move(run), std::move(stats),
                        std::chrono::duration<double, std::milli>(stop - start).count()});
  }

  double equal_cost = 0.0;
  for (const Outcome& o : outcomes) {
    if (o.policy == InterPolicy::Equal) equal_cost = o.stats.system_cost;
  }
  for (const Outcome& o : outcomes) {
    if (std::find(config.policies.begin(), config.policies.end(), o.policy) ==
        config.policies.end()) {
      continue;
    }
    ExperimentRow row;
    row.seed = params.seed;
    row.n = cell.n;
    row.s = cell.s;
    row.policy = o.policy;
    row.system_cost = o.stats.system_cost;
    row.pg = equal_cost / o.stats.system_cost;
    row.iterations = o.run.iterations;
    row.offloaders = o.stats.offloaders;
    row.cost_ratio = o.stats.cost_ratio;
    if (config.record_runtime) row.runtime_ms = o.runtime_ms;
    out.rows.push_back(std::move(row));
  }
  return out;
}

bool row_less(const ExperimentRow& x, const ExperimentRow& y) {
  return std::tie(x.n, x.s, x.seed, x.policy) < std::tie(y.n, y.s, y.seed, y.policy);
}

}  // namespace

ExperimentReport run_sweep(const SweepConfig& config) {
  validate(config);
  std::vector<Cell> cells;
  for (std::size_t n : config.n_devices) {
    for (std::size_t s : config.n_slices) {
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) cells.push_back({rep, n, s});
    }
  }
  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      try {
        results[k] = run_cell(config, cells[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = std::clamp<std::size_t>(workers, 1, cells.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  ExperimentReport report;
  for (CellResult& r : results) {
    for (ExperimentRow& row : r.rows) report.rows.push_back(std::move(row));
    for (std::string& f : r.failures) report.failures.push_back(std::move(f));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), row_less);
  return report;
}

// --- CSV -----------------------------------------------------------------------

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "seed,N,S,policy,system_cost,pg,iterations";
  for (std::size_t s = 1; s <= kMaxCsvSlices; ++s) out << ",n_s" << s;
  for (std::size_t s = 1; s <= kMaxCsvSlices; ++s) out << ",cr_s" << s;
  out << ",runtime_ms\n";
  for (const ExperimentRow& r : report.rows) {
    out << r.seed << ',' << r.n << ',' << r.s << ',' << to_string(r.policy) << ','
        << format_double(r.system_cost) << ',' << format_double(r.pg) << ',' << r.iterations;
    for (std::size_t s = 0; s < kMaxCsvSlices; ++s) {
      out << ',';
      if (s < r.offloaders.size()) out << r.offloaders[s];
    }
    for (std::size_t s = 0; s < kMaxCsvSlices; ++s) {
      out << ',';
      if (s < r.cost_ratio.size()) out << format_double(r.cost_ratio[s]);
    }
    out << ',';
    if (r.runtime_ms) out << format_double(*r.runtime_ms);
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::uint64_t parse_uint(const std::string& text) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw std::invalid_argument("not an unsigned integer: '" + text + "'");
  }
  return v;
}

}  // namespace

std::vector<ExperimentRow> parse_report_csv(std::istream& in) {
  constexpr std::size_t kColumns = 8 + 2 * kMaxCsvSlices;
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line).size() != kColumns) {
    throw std::invalid_argument("report csv: bad header");
  }
  std::vector<ExperimentRow> rows;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kColumns) {
      throw std::invalid_argument("report csv: line " + std::to_string(line_no) + " has " +
                                  std::to_string(f.size()) + " fields");
    }
    ExperimentRow r;
    r.seed = parse_uint(f[0]);
    r.n = parse_uint(f[1]);
    r.s = parse_uint(f[2]);
    r.policy = parse_inter_policy(f[3]);
    r.system_cost = parse_double(f[4]);
    r.pg = parse_double(f[5]);
    r.iterations = parse_uint(f[6]);
    for (std::size_t s = 0; s < r.s && s < kMaxCsvSlices; ++s) {
      r.offloaders.push_back(parse_uint(f[7 + s]));
      r.cost_ratio.push_back(parse_double(f[7 + kMaxCsvSlices + s]));
    }
    if (!f.back().empty()) r.runtime_ms = parse_double(f.back());
    rows.push_back(std::move(r));
  }
  return rows;
}

void save_report(const ExperimentReport& report, const SweepConfig& config,
                 const std::filesystem::path& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + csv_path.string() + " for writing");
    write_report_csv(out, report);
    if (!out) throw IoError("write failed: " + csv_path.string());
  }
  const std::time_t now = std::time(nullptr);
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  nlohmann::json meta;
  meta["tool"] = "sliceoff";
  meta["tool_version"] = kToolVersion;
  meta["slice_mapping_version"] = config.generator.slice_mapping.version;
  meta["config"] = sweep_config_to_json(config);
  meta["rows"] = report.rows.size();
  meta["certification_failures"] = report.failures;
  meta["created"] = stamp.str();

  std::filesystem::path meta_path = csv_path;
  meta_path += ".meta.json";
  std::ofstream out(meta_path, std::ios::binary);
  if (!out) throw IoError("cannot open " + meta_path.string() + " for writing");
  out << meta.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + meta_path.string());
}

}  // namespace sliceoff
