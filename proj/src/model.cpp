#include "sliceoff/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sliceoff/error.hpp"

namespace sliceoff {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("scenario: " + what);
}

bool all_positive(const std::vector<double>& v) {
  for (double x : v) {
    if (!(x > 0.0) || !std::isfinite(x)) return false;
  }
  return true;
}

bool all_positive(const Matrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double x : m.row(r)) {
      if (!(x > 0.0) || !std::isfinite(x)) return false;
    }
  }
  return true;
}

}  // namespace

Scenario::Scenario(Matrix rate, std::vector<double> data_size, std::vector<double> complexity,
                   Matrix match_coeff, std::vector<double> local_capability, Matrix ec_capability)
    : rate_(std::move(rate)),
      data_size_(std::move(data_size)),
      complexity_(std::move(complexity)),
      match_coeff_(std::move(match_coeff)),
      local_capability_(std::move(local_capability)),
      ec_capability_(std::move(ec_capability)) {
  const std::size_t n = data_size_.size();
  require(n > 0, "at least one device required");
  require(rate_.cols() > 0, "at least one AP required");
  require(ec_capability_.rows() > 0, "at least one EC required");
  require(match_coeff_.cols() > 0, "at least one slice required");
  require(rate_.rows() == n, "rate rows != num_devices");
  require(complexity_.size() == n, "complexity size != num_devices");
  require(match_coeff_.rows() == n, "match_coeff rows != num_devices");
  require(local_capability_.size() == n, "local_capability size != num_devices");
  require(ec_capability_.cols() == match_coeff_.cols(), "ec_capability cols != num_slices");

  require(all_positive(rate_), "rates must be positive");
  require(all_positive(data_size_), "data sizes must be positive");
  require(all_positive(complexity_), "complexities must be positive");
  require(all_positive(match_coeff_), "match coefficients must be positive");
  require(all_positive(local_capability_), "local capabilities must be positive");
  for (std::size_t c = 0; c < ec_capability_.rows(); ++c) {
    for (double f : ec_capability_.row(c)) {
      require(f >= 0.0 && std::isfinite(f), "EC capabilities must be non-negative");
    }
  }
  for (std::size_t s = 0; s < num_slices(); ++s) {
    bool any = false;
    for (std::size_t c = 0; c < num_ecs(); ++c) any = any || ec_capability_(c, s) > 0.0;
    require(any, "slice " + std::to_string(s) + " has no EC");
  }
}

std::string Decision::to_string() const {
  if (is_local()) return "local";
  return std::to_string(ap_) + ":" + std::to_string(ec_) + ":" + std::to_string(slice_);
}

Decision Decision::parse(const std::string& text) {
  if (text == "local") return local();
  std::istringstream in(text);
  std::size_t a = 0, c = 0, s = 0;
  char sep1 = 0, sep2 = 0;
  if (!(in >> a >> sep1 >> c >> sep2 >> s) || sep1 != ':' || sep2 != ':' || !in.eof()) {
    throw std::invalid_argument("bad decision: '" + text + "'");
  }
  return offload(a, c, s);
}

bool is_valid(const Scenario& scenario, const Decision& d) {
  if (d.is_local()) return true;
  return d.ap() < scenario.num_aps() && d.ec() < scenario.num_ecs() &&
         d.slice() < scenario.num_slices() && scenario.ec_in_slice(d.ec(), d.slice());
}

void validate(const Scenario& scenario, const DecisionVector& dv) {
  if (dv.size() != scenario.num_devices()) {
    throw std::invalid_argument("decision vector has " + std::to_string(dv.size()) +
                                " entries, expected " + std::to_string(scenario.num_devices()));
  }
  for (std::size_t i = 0; i < dv.size(); ++i) {
    if (!is_valid(scenario, dv[i])) {
      throw std::invalid_argument("device " + std::to_string(i) + ": invalid decision " +
                                  dv[i].to_string());
    }
  }
}

std::vector<Decision> decision_options(const Scenario& scenario) {
  std::vector<Decision> out{Decision::local()};
  for (std::size_t a = 0; a < scenario.num_aps(); ++a) {
    for (std::size_t c = 0; c < scenario.num_ecs(); ++c) {
      for (std::size_t s = 0; s < scenario.num_slices(); ++s) {
        if (scenario.ec_in_slice(c, s)) out.push_back(Decision::offload(a, c, s));
      }
    }
  }
  return out;
}

DecisionVector all_local(const Scenario& scenario) {
  return DecisionVector(scenario.num_devices(), Decision::local());
}

double local_time(const Scenario& scenario, std::size_t i) {
  return scenario.complexity(i) / scenario.local_capability(i);
}

double radio_constant(const Scenario& scenario, std::size_t i, std::size_t a) {
  return scenario.data_size(i) / scenario.rate(i, a);
}

double compute_constant(const Scenario& scenario, std::size_t i, std::size_t c, std::size_t s) {
  if (!scenario.ec_in_slice(c, s)) {
    throw DomainError("EC " + std::to_string(c) + " is not part of slice " + std::to_string(s));
  }
  return scenario.complexity(i) / scenario.match_coeff(i, s) / scenario.ec_capability(c, s);
}

double weight(const Scenario& scenario, std::size_t i, const ResourceId& r) {
  switch (r.kind) {
    case ResourceId::Kind::ApSlice:
    case ResourceId::Kind::Ap:
      return std::sqrt(scenario.data_size(i) / scenario.rate(i, r.first));
    case ResourceId::Kind::EcSlice:
      if (!scenario.ec_in_slice(r.first, r.second)) {
        throw DomainError("EC " + std::to_string(r.first) + " is not part of slice " +
                          std::to_string(r.second));
      }
      return std::sqrt(scenario.complexity(i) / scenario.match_coeff(i, r.second));
    case ResourceId::Kind::LocalWd:
      if (r.first != i) throw DomainError("local resource of another device");
      return std::sqrt(scenario.complexity(i));
  }
  return 0.0;
}

double multiplier(const Scenario& scenario, const ResourceId& r, const Matrix* inter) {
  switch (r.kind) {
    case ResourceId::Kind::ApSlice: {
      if (inter == nullptr) throw DomainError("AP-slice multiplier needs inter-slice shares");
      const double b = (*inter)(r.first, r.second);
      if (!(b > 0.0)) {
        throw DomainError("zero inter-slice share at AP " + std::to_string(r.first) +
                          ", slice " + std::to_string(r.second));
      }
      return 1.0 / b;
    }
    case ResourceId::Kind::Ap:
      return 1.0;
    case ResourceId::Kind::EcSlice:
      if (!scenario.ec_in_slice(r.first, r.second)) {
        throw DomainError("EC " + std::to_string(r.first) + " is not part of slice " +
                          std::to_string(r.second));
      }
      return 1.0 / scenario.ec_capability(r.first, r.second);
    case ResourceId::Kind::LocalWd:
      return 1.0 / scenario.local_capability(r.first);
  }
  return 0.0;
}

std::vector<std::size_t> Grouping::members(const ResourceId& r) const {
  switch (r.kind) {
    case ResourceId::Kind::ApSlice:
      return at_ap_slice(r.first, r.second);
    case ResourceId::Kind::Ap:
      return ap[r.first];
    case ResourceId::Kind::EcSlice:
      return at_ec_slice(r.first, r.second);
    case ResourceId::Kind::LocalWd:
      for (std::size_t i : local) {
        if (i == r.first) return {i};
      }
      return {};
  }
  return {};
}

Grouping group(const Scenario& scenario, const DecisionVector& dv) {
  validate(scenario, dv);
  const std::size_t S = scenario.num_slices();
  Grouping g;
  g.num_slices = S;
  g.ap_slice.resize(scenario.num_aps() * S);
  g.ec_slice.resize(scenario.num_ecs() * S);
  g.ap.resize(scenario.num_aps());
  g.ec.resize(scenario.num_ecs());
  for (std::size_t i = 0; i < dv.size(); ++i) {
    const Decision& d = dv[i];
    if (d.is_local()) {
      g.local.push_back(i);
      continue;
    }
    g.ap_slice[d.ap() * S + d.slice()].push_back(i);
    g.ec_slice[d.ec() * S + d.slice()].push_back(i);
    g.ap[d.ap()].push_back(i);
    g.ec[d.ec()].push_back(i);
  }
  return g;
}

double total_weight(const Scenario& scenario, const Grouping& g, const ResourceId& r) {
  double q = 0.0;
  for (std::size_t j : g.members(r)) q += weight(scenario, j, r);
  return q;
}

}  // namespace sliceoff
