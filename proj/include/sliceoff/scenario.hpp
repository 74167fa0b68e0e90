#ifndef SLICEOFF_SCENARIO_HPP_
#define SLICEOFF_SCENARIO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sliceoff/matrix.hpp"
#include "sliceoff/model.hpp"

namespace sliceoff {

// One homogeneous block of processors inside an EC.
struct HardwareGroup {
  std::string id;
  std::size_t ec = 0;
  double cores = 0.0;
  double clock_hz = 0.0;
  double ipc = 0.0;  // instructions per cycle

  double capability() const { return cores * clock_hz * ipc; }
};

// Three ECs: a dual-CPU host and two single-GPU hosts.
std::vector<HardwareGroup> default_hardware();

// Which hardware groups each slice hosts, per slice count. Each table is an
// ordered list of (slice label, group ids).
struct SliceMapping {
  std::string version;
  std::map<std::size_t, std::vector<std::pair<std::string, std::vector<std::string>>>> tables;
};

// JSON: {"version": "...", "configurations": {"2": {"s1": ["id", ...], "s2": [...]}, ...}}
SliceMapping slice_mapping_from_json(const nlohmann::ordered_json& doc);
nlohmann::ordered_json slice_mapping_to_json(const SliceMapping& mapping);
SliceMapping load_slice_mapping(const std::filesystem::path& path);
// The table shipped in data/slice_mapping.json, compiled in.
const SliceMapping& default_slice_mapping();

// Total capability per EC (instructions/s).
std::vector<double> ec_capabilities(const std::vector<HardwareGroup>& hardware,
                                    std::size_t num_ecs);

// C x S capability matrix for the given slice count. Throws ConfigError for an
// unknown group id, a group listed twice, or a slice left without capability.
Matrix slice_config(std::size_t num_slices, const std::vector<HardwareGroup>& hardware,
                    std::size_t num_ecs, const SliceMapping& mapping);

// Thermal noise over bandwidth B (Hz): -174 dBm/Hz + 10 log10(B).
double noise_dbm(double bandwidth_hz);
double dbm_to_watts(double dbm);
// B log2(1 + d^-alpha P / noise).
double shannon_rate(double bandwidth_hz, double distance_m, double path_loss_exponent,
                    double tx_power_w, double noise_w);

struct Range {
  double lo;
  double hi;
};

struct GeneratorParams {
  std::size_t n_devices = 20;
  std::size_t n_slices = 1;
  double area_side = 1000.0;  // meters
  std::size_t n_aps = 5;
  std::size_t n_ecs = 3;
  std::size_t grid_points = 25;  // must be a perfect square
  double path_loss_exponent = 4.0;
  std::vector<double> ap_bandwidths = {18e6, 18e6, 27e6, 27e6, 27e6};  // Hz, by AP index
  Range tx_power{1e-6, 0.1};                   // W
  Range local_capability{2e9, 45.4e9};         // instructions/s
  Range data_size{1.7e6, 10e6};                // bits
  double complexity_shape = 75.0;              // instructions per bit ~ Gamma(shape, scale)
  double complexity_scale = 50.0;
  std::vector<HardwareGroup> hardware = default_hardware();
  SliceMapping slice_mapping = default_slice_mapping();
  std::uint64_t seed = 1;
};

// Throws ConfigError naming the first invalid field.
void validate(const GeneratorParams& params);

// Reads any subset of the fields above; absent fields keep their defaults.
// "slice_mapping" may be an inline table or a path (relative to base_dir).
GeneratorParams generator_params_from_json(const nlohmann::json& doc,
                                           const std::filesystem::path& base_dir = {});
GeneratorParams load_generator_params(const std::filesystem::path& path);
nlohmann::json generator_params_to_json(const GeneratorParams& params);

// Independent RNG stream for a named field, derived from the master seed.
std::mt19937_64 substream(std::uint64_t seed, std::string_view label);

// Draws a scenario: uniform device placement, APs on distinct grid points,
// distance path loss with Shannon rates, Gamma task complexity, and
// slice match coefficients h = 1/u with u uniform on (0, 1].
Scenario generate(const GeneratorParams& params);

// Small, well-conditioned random instance for verification: log-uniform
// parameters chosen so local and offloaded costs are comparable. Each EC is
// present in a slice with probability ec_presence (at least one per slice).
struct SyntheticParams {
  std::size_t n_devices = 4;
  std::size_t n_aps = 2;
  std::size_t n_ecs = 2;
  std::size_t n_slices = 2;
  double ec_presence = 0.7;
  std::uint64_t seed = 1;
};

Scenario synthetic_scenario(const SyntheticParams& params);

// Uniformly random valid decision per device.
DecisionVector random_decisions(const Scenario& scenario, std::mt19937_64& rng);

}  // namespace sliceoff

#endif  // SLICEOFF_SCENARIO_HPP_
