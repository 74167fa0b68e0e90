#include <algorithm>
#include <cmath>
#include <sstream>

#include "sliceoff/cost.hpp"
#include "sliceoff/experiments.hpp"
#include "sliceoff/oracle.hpp"

namespace sliceoff {

namespace {

constexpr double kApproximationBound = 2.62;

double rel_diff(double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }

class Check {
 public:
  explicit Check(std::string name) : result_{std::move(name), true, {}} {}

  void expect(bool ok, const std::string& detail) {
    if (!ok && result_.passed) {
      result_.passed = false;
      result_.detail = detail;
    }
  }
  void track(double v) { worst_ = std::max(worst_, v); }

  CheckResult finish() {
    if (result_.passed) {
      std::ostringstream out;
      out << "worst " << worst_;
      result_.detail = out.str();
    }
    return result_;
  }

 private:
  CheckResult result_;
  double worst_ = 0.0;
};

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Check equivalence("cost-equivalence");
  Check potential_check("exact-potential");
  Check kkt("kkt-perturbation");
  Check br("best-response-separable");
  Check ne("cos-equilibrium");
  Check approx("approximation-bound");

  std::mt19937_64 rng(options.seed);
  for (std::size_t k = 0; k < options.instances; ++k) {
    SyntheticParams sp;
    sp.n_devices = 2 + k % 4;
    sp.seed = options.seed * 1000003 + k;
    const Scenario sc = synthetic_scenario(sp);
    const std::string tag = "instance " + std::to_string(k);

    const DecisionVector dv = random_decisions(sc, rng);
    const double general = system_cost(sc, dv, optimal_coefficients(sc, dv)).system;
    const double fixed = reduced_system_cost_fixed(sc, dv, optimal_inter(sc, dv));
    const double collapsed = reduced_system_cost_optimal(sc, dv);
    equivalence.track(std::max(rel_diff(general, collapsed), rel_diff(fixed, collapsed)));
    equivalence.expect(rel_diff(general, collapsed) <= 1e-9 && rel_diff(fixed, collapsed) <= 1e-9,
                       tag + ": formulations disagree");

    const auto options_list = decision_options(sc);
    std::uniform_int_distribution<std::size_t> pick_dev(0, sc.num_devices() - 1);
    std::uniform_int_distribution<std::size_t> pick_opt(0, options_list.size() - 1);
    for (const CostModel& model : {CostModel::optimal_inter(), CostModel::fixed_inter(baseline_equal(sc))}) {
      for (int move = 0; move < 20; ++move) {
        DecisionVector after = dv;
        const std::size_t i = pick_dev(rng);
        after[i] = options_list[pick_opt(rng)];
        const double d_cost =
            reduced_wd_cost(sc, after, model, i) - reduced_wd_cost(sc, dv, model, i);
        const double d_psi = potential(sc, after, model) - potential(sc, dv, model);
        const double err = std::abs(d_psi - d_cost) / std::max(1.0, std::abs(d_cost));
        potential_check.track(err);
        potential_check.expect(err <= 1e-9, tag + ": potential change differs from cost change");
      }

      CostContext ctx(sc, model, dv);
      for (std::size_t i = 0; i < sc.num_devices(); ++i) {
        br.expect(best_response(ctx, i) == best_response_exhaustive(ctx, i),
                  tag + ": separable best response disagrees for device " + std::to_string(i));
      }
    }

    if (std::any_of(dv.begin(), dv.end(), [](const Decision& d) { return d.is_offload(); })) {
      const KktCheck res = perturbation_kkt_check(sc, dv, 200, 1.0, sp.seed);
      kkt.track(std::max(0.0, (res.optimal_cost - res.min_perturbed_cost) / res.optimal_cost));
      kkt.expect(res.passed, tag + ": a perturbed allocation beats the closed form");
    }

    const CosResult eq = cos_run(sc, CostModel::optimal_inter());
    const NeCertificate cert = certify_ne(sc, CostModel::optimal_inter(), eq.equilibrium);
    ne.expect(cert.is_equilibrium, tag + ": COS output is not an equilibrium");
    const OracleResult opt = exhaustive_optimal(sc, CostModel::optimal_inter());
    const double ratio = eq.system_cost / opt.optimal_cost;
    approx.track(ratio);
    approx.expect(ratio >= 1.0 - 1e-12 && ratio <= kApproximationBound,
                  tag + ": ratio " + std::to_string(ratio) + " outside [1, 2.62]");
  }
  return {equivalence.finish(), potential_check.finish(), kkt.finish(),
          br.finish(),          ne.finish(),              approx.finish()};
}

}  // namespace sliceoff
