#include "sliceoff/scenario_json.hpp"

#include <fstream>
#include <stdexcept>

#include "sliceoff/error.hpp"

namespace sliceoff {

namespace {

using nlohmann::json;

const json& units_header() {
  static const json units = {{"rate", "bps"},
                             {"data", "bits"},
                             {"complexity", "instructions"},
                             {"capability", "ips"}};
  return units;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out.push_back(json(std::vector<double>(m.row(r).begin(), m.row(r).end())));
  }
  return out;
}

Matrix matrix_from_json(const json& doc, const char* name, std::size_t rows, std::size_t cols) {
  const json& arr = doc.at(name);
  if (!arr.is_array() || arr.size() != rows) {
    throw std::invalid_argument(std::string("scenario json: '") + name + "' must have " +
                                std::to_string(rows) + " rows");
  }
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!arr[r].is_array() || arr[r].size() != cols) {
      throw std::invalid_argument(std::string("scenario json: '") + name + "' row " +
                                  std::to_string(r) + " must have " + std::to_string(cols) +
                                  " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = arr[r][c].get<double>();
  }
  return m;
}

std::vector<double> vector_from_json(const json& doc, const char* name, std::size_t n) {
  auto v = doc.at(name).get<std::vector<double>>();
  if (v.size() != n) {
    throw std::invalid_argument(std::string("scenario json: '") + name + "' must have " +
                                std::to_string(n) + " entries");
  }
  return v;
}

}  // namespace

json scenario_to_json(const Scenario& scenario) {
  json doc;
  doc["units"] = units_header();
  doc["num_devices"] = scenario.num_devices();
  doc["num_aps"] = scenario.num_aps();
  doc["num_ecs"] = scenario.num_ecs();
  doc["num_slices"] = scenario.num_slices();
  doc["rate"] = matrix_to_json(scenario.rate_matrix());
  doc["data_size"] = scenario.data_sizes();
  doc["complexity"] = scenario.complexities();
  doc["match_coeff"] = matrix_to_json(scenario.match_matrix());
  doc["local_capability"] = scenario.local_capabilities();
  doc["ec_capability"] = matrix_to_json(scenario.ec_capability_matrix());
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  try {
    if (doc.at("units") != units_header()) {
      throw std::invalid_argument("scenario json: unsupported units header " +
                                  doc.at("units").dump());
    }
    const auto n = doc.at("num_devices").get<std::size_t>();
    const auto a = doc.at("num_aps").get<std::size_t>();
    const auto c = doc.at("num_ecs").get<std::size_t>();
    const auto s = doc.at("num_slices").get<std::size_t>();
    return Scenario(matrix_from_json(doc, "rate", n, a), vector_from_json(doc, "data_size", n),
                    vector_from_json(doc, "complexity", n),
                    matrix_from_json(doc, "match_coeff", n, s),
                    vector_from_json(doc, "local_capability", n),
                    matrix_from_json(doc, "ec_capability", c, s));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario json: ") + e.what());
  }
}

std::string dump_scenario(const Scenario& scenario) {
  return scenario_to_json(scenario).dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << dump_scenario(scenario);
  if (!out) throw IoError("write failed: " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace sliceoff
