#include "sliceoff/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "sliceoff/error.hpp"

namespace sliceoff {

namespace {

// Mirrors data/slice_mapping.json.
constexpr const char* kDefaultSliceMapping = R"json({
  "version": "2026.1",
  "configurations": {
    "1": {"s1": ["ec1_cpu_2300", "ec1_cpu_3600", "ec2_gpu", "ec3_gpu"]},
    "2": {"s1": ["ec1_cpu_2300", "ec2_gpu", "ec3_gpu"], "s2": ["ec1_cpu_3600"]},
    "3": {"s1": ["ec3_gpu"], "s2": ["ec2_gpu"], "s3": ["ec1_cpu_2300", "ec1_cpu_3600"]},
    "4": {"s1": ["ec3_gpu"], "s2": ["ec2_gpu"], "s3": ["ec1_cpu_3600"], "s4": ["ec1_cpu_2300"]}
  }
})json";

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("generator config: '" + field + "' " + what);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, const Range& r) {
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

Range range_from_json(const nlohmann::json& v, const std::string& field) {
  require(v.is_array() && v.size() == 2, field, "must be [lo, hi]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

std::vector<HardwareGroup> default_hardware() {
  return {
      {"ec1_cpu_2300", 0, 36, 2.3e9, 3},
      {"ec1_cpu_3600", 0, 96, 3.6e9, 3},
      {"ec2_gpu", 1, 2048, 0.557e9, 1},
      {"ec3_gpu", 2, 2496, 0.560e9, 1},
  };
}

SliceMapping slice_mapping_from_json(const nlohmann::ordered_json& doc) {
  SliceMapping m;
  try {
    m.version = doc.at("version").get<std::string>();
    for (const auto& [count, table] : doc.at("configurations").items()) {
      const std::size_t s = std::stoul(count);
      auto& slices = m.tables[s];
      for (const auto& [label, groups] : table.items()) {
        slices.emplace_back(label, groups.get<std::vector<std::string>>());
      }
      if (slices.size() != s) {
        throw ConfigError("slice mapping: configuration '" + count + "' lists " +
                          std::to_string(slices.size()) + " slices");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("slice mapping: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) throw;
    throw ConfigError(std::string("slice mapping: bad configuration key: ") + e.what());
  }
  return m;
}

nlohmann::ordered_json slice_mapping_to_json(const SliceMapping& mapping) {
  nlohmann::ordered_json doc;
  doc["version"] = mapping.version;
  nlohmann::ordered_json configs = nlohmann::ordered_json::object();
  for (const auto& [count, slices] : mapping.tables) {
    nlohmann::ordered_json table = nlohmann::ordered_json::object();
    for (const auto& [label, groups] : slices) table[label] = groups;
    configs[std::to_string(count)] = table;
  }
  doc["configurations"] = configs;
  return doc;
}

SliceMapping load_slice_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open slice mapping " + path.string());
  try {
    return slice_mapping_from_json(nlohmann::ordered_json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const SliceMapping& default_slice_mapping() {
  static const SliceMapping mapping =
      slice_mapping_from_json(nlohmann::ordered_json::parse(kDefaultSliceMapping));
  return mapping;
}

std::vector<double> ec_capabilities(const std::vector<HardwareGroup>& hardware,
                                    std::size_t num_ecs) {
  std::vector<double> totals(num_ecs, 0.0);
  for (const HardwareGroup& g : hardware) {
    if (g.ec >= num_ecs) throw ConfigError("hardware group '" + g.id + "' on unknown EC");
    totals[g.ec] += g.capability();
  }
  return totals;
}

Matrix slice_config(std::size_t num_slices, const std::vector<HardwareGroup>& hardware,
                    std::size_t num_ecs, const SliceMapping& mapping) {
  const auto table = mapping.tables.find(num_slices);
  if (table == mapping.tables.end()) {
    throw ConfigError("slice mapping " + mapping.version + " has no configuration for S=" +
                      std::to_string(num_slices));
  }
  Matrix f(num_ecs, num_slices, 0.0);
  std::set<std::string> seen;
  for (std::size_t s = 0; s < num_slices; ++s) {
    const auto& [label, ids] = table->second[s];
    double slice_total = 0.0;
    for (const std::string& id : ids) {
      if (!seen.insert(id).second) {
        throw ConfigError("slice mapping: group '" + id + "' assigned to more than one slice");
      }
      const HardwareGroup* group = nullptr;
      for (const HardwareGroup& g : hardware) {
        if (g.id == id) group = &g;
      }
      if (group == nullptr) throw ConfigError("slice mapping: unknown hardware group '" + id + "'");
      if (group->ec >= num_ecs) throw ConfigError("hardware group '" + id + "' on unknown EC");
      f(group->ec, s) += group->capability();
      slice_total += group->capability();
    }
    if (!(slice_total > 0.0)) {
      throw ConfigError("slice mapping: slice '" + label + "' has no EC capability");
    }
  }
  return f;
}

double noise_dbm(double bandwidth_hz) { return -174.0 + 10.0 * std::log10(bandwidth_hz); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double shannon_rate(double bandwidth_hz, double distance_m, double path_loss_exponent,
                    double tx_power_w, double noise_w) {
  const double snr = std::pow(distance_m, -path_loss_exponent) * tx_power_w / noise_w;
  return bandwidth_hz * std::log1p(snr) / std::log(2.0);
}

void validate(const GeneratorParams& p) {
  require(p.n_devices > 0, "n_devices", "must be positive");
  require(p.n_slices > 0, "n_slices", "must be positive");
  require(p.area_side > 0.0, "area_side", "must be positive");
  require(p.n_aps > 0, "n_aps", "must be positive");
  require(p.n_ecs > 0, "n_ecs", "must be positive");
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(p.grid_points))));
  require(side * side == p.grid_points && side > 0, "grid_points", "must be a perfect square");
  require(p.n_aps <= p.grid_points, "n_aps", "must not exceed grid_points");
  require(p.path_loss_exponent > 0.0, "path_loss_exponent", "must be positive");
  require(p.ap_bandwidths.size() == p.n_aps, "ap_bandwidths", "must list one bandwidth per AP");
  for (double b : p.ap_bandwidths) require(b > 0.0, "ap_bandwidths", "must be positive");
  require(p.tx_power.lo > 0.0 && p.tx_power.lo <= p.tx_power.hi, "tx_power_range",
          "must be a positive nonempty range");
  require(p.local_capability.lo > 0.0 && p.local_capability.lo <= p.local_capability.hi,
          "local_capability_range", "must be a positive nonempty range");
  require(p.data_size.lo > 0.0 && p.data_size.lo <= p.data_size.hi, "data_size_range",
          "must be a positive nonempty range");
  require(p.complexity_shape > 0.0 && p.complexity_scale > 0.0, "complexity_gamma",
          "shape and scale must be positive");
  for (const HardwareGroup& g : p.hardware) {
    require(g.ec < p.n_ecs, "hardware", "group '" + g.id + "' references EC beyond n_ecs");
    require(g.capability() > 0.0, "hardware", "group '" + g.id + "' has no capability");
  }
  // Surfaces mapping problems (missing S, unknown ids, empty slices) up front.
  try {
    slice_config(p.n_slices, p.hardware, p.n_ecs, p.slice_mapping);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("generator config: 'slice_mapping' ") + e.what());
  }
}

GeneratorParams generator_params_from_json(const nlohmann::json& doc,
                                           const std::filesystem::path& base_dir) {
  GeneratorParams p;
  try {
    if (!doc.is_object()) throw ConfigError("generator config: expected a JSON object");
    if (doc.contains("n_devices")) p.n_devices = doc["n_devices"].get<std::size_t>();
    if (doc.contains("n_slices")) p.n_slices = doc["n_slices"].get<std::size_t>();
    if (doc.contains("area_side")) p.area_side = doc["area_side"].get<double>();
    if (doc.contains("n_aps")) p.n_aps = doc["n_aps"].get<std::size_t>();
    if (doc.contains("n_ecs")) p.n_ecs = doc["n_ecs"].get<std::size_t>();
    if (doc.contains("grid_points")) p.grid_points = doc["grid_points"].get<std::size_t>();
    if (doc.contains("path_loss_exponent")) {
      p.path_loss_exponent = doc["path_loss_exponent"].get<double>();
    }
    if (doc.contains("ap_bandwidths")) {
      p.ap_bandwidths = doc["ap_bandwidths"].get<std::vector<double>>();
    }
    if (doc.contains("tx_power_range")) {
      p.tx_power = range_from_json(doc["tx_power_range"], "tx_power_range");
    }
    if (doc.contains("local_capability_range")) {
      p.local_capability = range_from_json(doc["local_capability_range"], "local_capability_range");
    }
    if (doc.contains("data_size_range")) {
      p.data_size = range_from_json(doc["data_size_range"], "data_size_range");
    }
    if (doc.contains("complexity_gamma")) {
      p.complexity_shape = doc["complexity_gamma"].at("shape").get<double>();
      p.complexity_scale = doc["complexity_gamma"].at("scale").get<double>();
    }
    if (doc.contains("hardware")) {
      p.hardware.clear();
      for (const auto& g : doc["hardware"]) {
        p.hardware.push_back({g.at("id").get<std::string>(), g.at("ec").get<std::size_t>(),
                              g.at("cores").get<double>(), g.at("clock_hz").get<double>(),
                              g.at("ipc").get<double>()});
      }
    }
    if (doc.contains("slice_mapping")) {
      const auto& m = doc["slice_mapping"];
      if (m.is_string()) {
        std::filesystem::path path = m.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        p.slice_mapping = load_slice_mapping(path);
      } else {
        p.slice_mapping = slice_mapping_from_json(nlohmann::ordered_json::parse(m.dump()));
      }
    }
    if (doc.contains("seed")) p.seed = doc["seed"].get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("generator config: ") + e.what());
  }
  validate(p);
  return p;
}

GeneratorParams load_generator_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return generator_params_from_json(doc, path.parent_path());
}

nlohmann::json generator_params_to_json(const GeneratorParams& p) {
  nlohmann::json doc;
  doc["n_devices"] = p.n_devices;
  doc["n_slices"] = p.n_slices;
  doc["area_side"] = p.area_side;
  doc["n_aps"] = p.n_aps;
  doc["n_ecs"] = p.n_ecs;
  doc["grid_points"] = p.grid_points;
  doc["path_loss_exponent"] = p.path_loss_exponent;
  doc["ap_bandwidths"] = p.ap_bandwidths;
  doc["tx_power_range"] = {p.tx_power.lo, p.tx_power.hi};
  doc["local_capability_range"] = {p.local_capability.lo, p.local_capability.hi};
  doc["data_size_range"] = {p.data_size.lo, p.data_size.hi};
  doc["complexity_gamma"] = {{"shape", p.complexity_shape}, {"scale", p.complexity_scale}};
  doc["hardware"] = nlohmann::json::array();
  for (const HardwareGroup& g : p.hardware) {
    doc["hardware"].push_back(
        {{"id", g.id}, {"ec", g.ec}, {"cores", g.cores}, {"clock_hz", g.clock_hz}, {"ipc", g.ipc}});
  }
  doc["slice_mapping"] = nlohmann::json::parse(slice_mapping_to_json(p.slice_mapping).dump());
  doc["seed"] = p.seed;
  return doc;
}

std::mt19937_64 substream(std::uint64_t seed, std::string_view label) {
  return std::mt19937_64(splitmix64(seed ^ fnv1a(label)));
}

Scenario generate(const GeneratorParams& p) {
  validate(p);
  const std::size_t N = p.n_devices, A = p.n_aps, S = p.n_slices;

  // APs on distinct cell centres of a side x side grid.
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(double(p.grid_points))));
  const double cell = p.area_side / static_cast<double>(side);
  std::vector<std::size_t> cells(p.grid_points);
  for (std::size_t k = 0; k < cells.size(); ++k) cells[k] = k;
  auto ap_rng = substream(p.seed, "ap_placement");
  for (std::size_t k = 0; k < A; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, cells.size() - 1);
    std::swap(cells[k], cells[pick(ap_rng)]);
  }
  std::vector<std::pair<double, double>> ap_pos(A);
  for (std::size_t a = 0; a < A; ++a) {
    ap_pos[a] = {(static_cast<double>(cells[a] % side) + 0.5) * cell,
                 (static_cast<double>(cells[a] / side) + 0.5) * cell};
  }

  auto pos_rng = substream(p.seed, "device_positions");
  auto power_rng = substream(p.seed, "tx_power");
  auto local_rng = substream(p.seed, "local_capability");
  auto data_rng = substream(p.seed, "data_size");
  auto complexity_rng = substream(p.seed, "complexity");
  auto match_rng = substream(p.seed, "match_coeff");
  std::uniform_real_distribution<double> coord(0.0, p.area_side);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::gamma_distribution<double> instr_per_bit(p.complexity_shape, p.complexity_scale);

  std::vector<double> noise_w(A);
  for (std::size_t a = 0; a < A; ++a) noise_w[a] = dbm_to_watts(noise_dbm(p.ap_bandwidths[a]));

  Matrix rate(N, A);
  std::vector<double> data(N), complexity(N), local(N);
  Matrix match(N, S);
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> dist(A);
    for (bool placed = false; !placed;) {
      const double x = coord(pos_rng), y = coord(pos_rng);
      placed = true;
      for (std::size_t a = 0; a < A; ++a) {
        dist[a] = std::hypot(x - ap_pos[a].first, y - ap_pos[a].second);
        placed = placed && dist[a] > 0.0;
      }
    }
    const double power = uniform(power_rng, p.tx_power);
    for (std::size_t a = 0; a < A; ++a) {
      rate(i, a) = shannon_rate(p.ap_bandwidths[a], dist[a], p.path_loss_exponent, power,
                                noise_w[a]);
    }
    local[i] = uniform(local_rng, p.local_capability);
    data[i] = uniform(data_rng, p.data_size);
    complexity[i] = data[i] * instr_per_bit(complexity_rng);
    for (std::size_t s = 0; s < S; ++s) {
      double u = 0.0;
      do {
        u = 1.0 - unit(match_rng);  // (0, 1]
      } while (u < 1e-6);
      match(i, s) = 1.0 / u;
    }
  }

  return Scenario(std::move(rate), std::move(data), std::move(complexity), std::move(match),
                  std::move(local), slice_config(S, p.hardware, p.n_ecs, p.slice_mapping));
}

Scenario synthetic_scenario(const SyntheticParams& p) {
  if (p.n_devices == 0 || p.n_aps == 0 || p.n_ecs == 0 || p.n_slices == 0) {
    throw ConfigError("synthetic scenario: all counts must be positive");
  }
  auto rng = substream(p.seed, "synthetic");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t N = p.n_devices, A = p.n_aps, C = p.n_ecs, S = p.n_slices;

  Matrix rate(N, A), match(N, S), ec(C, S, 0.0);
  std::vector<double> data(N), complexity(N), local(N);
  for (std::size_t i = 0; i < N; ++i) {
    data[i] = log_uniform(rng, 1.0, 10.0);
    complexity[i] = log_uniform(rng, 1.0, 10.0);
    local[i] = log_uniform(rng, 0.2, 2.0);
    for (std::size_t a = 0; a < A; ++a) rate(i, a) = log_uniform(rng, 1.0, 10.0);
    for (std::size_t s = 0; s < S; ++s) match(i, s) = log_uniform(rng, 0.5, 2.0);
  }
  for (std::size_t s = 0; s < S; ++s) {
    bool any = false;
    for (std::size_t c = 0; c < C; ++c) {
      const double f = log_uniform(rng, 1.0, 10.0);
      if (unit(rng) < p.ec_presence) {
        ec(c, s) = f;
        any = true;
      }
    }
    if (!any) {
      std::uniform_int_distribution<std::size_t> pick(0, C - 1);
      ec(pick(rng), s) = log_uniform(rng, 1.0, 10.0);
    }
  }
  return Scenario(std::move(rate), std::move(data), std::move(complexity), std::move(match),
                  std::move(local), std::move(ec));
}

DecisionVector random_decisions(const Scenario& scenario, std::mt19937_64& rng) {
  const auto options = decision_options(scenario);
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  DecisionVector dv(scenario.num_devices());
  for (Decision& d : dv) d = options[pick(rng)];
  return dv;
}

}  // namespace sliceoff
