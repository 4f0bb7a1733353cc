#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "gpsl/functionals.hpp"
#include "gpsl/optimal_profiles.hpp"
#include "gpsl/regimes.hpp"
#include "gpsl/smearing.hpp"
#include "json.hpp"

namespace gpsl::verify {

using Json = nlohmann::ordered_json;

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::size_t samples = 200000;  ///< Monte Carlo samples per configuration
  std::size_t configs = 200;     ///< sandwich configurations
  std::size_t perturbations = 10;
  unsigned threads = 0;          ///< 0 means hardware concurrency
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sandwich",   "counterexample-psl", "counterexample-gpsl",
                                              "closedforms", "scaling",            "optimality-perturbation"};
  return names;
}

namespace detail {

inline double rel_dev(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Appends a check and folds it into the suite verdict.
inline void check(Json& report, const std::string& name, double value, double expected, double tolerance, bool pass) {
  report["checks"].push_back(
      {{"name", name}, {"value", value}, {"expected", expected}, {"tolerance", tolerance}, {"pass", pass}});
  report["pass"] = report["pass"].get<bool>() && pass;
}

inline void check_rel(Json& report, const std::string& name, double value, double expected, double tol) {
  check(report, name, value, expected, tol, rel_dev(value, expected) <= tol);
}

inline Json start(const std::string& suite) {
  Json r;
  r["suite"] = suite;
  r["pass"] = true;
  r["checks"] = Json::array();
  return r;
}

} // namespace detail

/// I_CoM <= I_N <= N I[sqrt g] and I_CoM <= I[sqrt g] on random configurations.
inline Json sandwich(const RadialProfile& g, const SuiteOptions& opt) {
  auto r = detail::start("sandwich");
  r["profile"] = g.label();
  r["seed"] = opt.seed;
  r["samples"] = opt.samples;
  const auto configs = random_point_configs(opt.configs, 4, g.scale(), derived_seed(opt.seed, 0xC0F16));
  const auto rep = sandwich_report(g, configs, opt.samples, opt.seed, opt.threads);
  std::size_t analytic_ni_within = 0;
  auto& rows = r["configs"] = Json::array();
  for (const auto& row : rep.rows) {
    const auto& h = row.triple;
    const double ni_analytic = static_cast<double>(row.particles) * h.analytic_single;
    const bool ni_ok = std::abs(h.n_i.mean - ni_analytic) <= 3.0 * h.n_i.std_error + 1e-12 * ni_analytic;
    analytic_ni_within += ni_ok ? 1 : 0;
    rows.push_back({{"index", row.index},
                    {"particles", row.particles},
                    {"seed", row.seed},
                    {"I_N", {h.i_n.mean, h.i_n.std_error}},
                    {"I_CoM", {h.i_com.mean, h.i_com.std_error}},
                    {"N_I", {h.n_i.mean, h.n_i.std_error}},
                    {"I_single", h.analytic_single},
                    {"I_N_minus_I_CoM", {h.n_minus_com.mean, h.n_minus_com.std_error}},
                    {"N_I_minus_I_N", {h.ni_minus_n.mean, h.ni_minus_n.std_error}},
                    {"I_minus_I_CoM", {h.single_minus_com.mean, h.single_minus_com.std_error}},
                    {"com_le_n", row.com_le_n},
                    {"n_le_ni", row.n_le_ni},
                    {"com_le_single", row.com_le_single},
                    {"pass", row.pass()}});
  }
  detail::check(r, "configs passing all three inequalities", static_cast<double>(rep.passed),
                static_cast<double>(rep.rows.size()), 0.0, rep.all_pass());
  r["conjecture_I_N_ge_I"] = {{"holds", rep.conjecture_holds}, {"of", rep.rows.size()}, {"asserted", false}};
  r["diagnostic_N_I_within_3_sigma_of_analytic"] = {{"count", analytic_ni_within}, {"of", rep.rows.size()}};
  return r;
}

/// Two-particle PSL functional: Gaussian vs sub-Gaussian p = 1.9 at m2 = 10 m1, d = r_C.
inline Json counterexample_psl() {
  auto r = detail::start("counterexample-psl");
  const double gauss = two_particle_psl(make_gaussian(1.0), 1.0, 10.0, 1.0).value;
  const double sub = two_particle_psl(make_sub_gaussian(1.9, 1.0), 1.0, 10.0, 1.0).value;
  detail::check(r, "gaussian two-particle functional", gauss, 0.4136, 5e-4, std::abs(gauss - 0.4136) <= 5e-4);
  detail::check(r, "sub-gaussian p=1.9 two-particle functional", sub, 0.4125, 5e-4, std::abs(sub - 0.4125) <= 5e-4);
  detail::check(r, "gaussian minus sub-gaussian", gauss - sub, 0.0, 0.0, gauss - sub > 0.0);
  const auto clustered = psl_counterexample_search(1.0, 10.0, 0.0, {1.8, 1.9, 2.0, 2.1, 2.2});
  detail::check(r, "argmin exponent at d=0", clustered.rows[clustered.argmin].p, 2.0, 0.0,
                clustered.rows[clustered.argmin].p == 2.0);
  return r;
}

/// z-aware feedback optimum against the isolated-particle optimum.
inline Json counterexample_gpsl() {
  auto r = detail::start("counterexample-gpsl");
  const auto g = make_gaussian(1.0);
  const auto at1 = gpsl_counterexample(g, 1.0, 1.0);
  const auto at0 = gpsl_counterexample(g, 1.0, 0.0);
  r["z1"] = {{"z_aware", at1.i_z_aware}, {"z0_optimal", at1.i_z0_optimal}, {"R_z", at1.R_z}, {"R_0", at1.R_0}};
  r["z0"] = {{"z_aware", at0.i_z_aware}, {"z0_optimal", at0.i_z0_optimal}};
  detail::check(r, "gap at z=r_C", at1.gap(), 0.0, 0.0, at1.gap() > 0.0);
  const double dev0 = detail::rel_dev(at0.i_z_aware, at0.i_z0_optimal);
  detail::check(r, "relative difference at z=0", dev0, 0.0, 1e-8, dev0 <= 1e-8);
  return r;
}

/// Closed forms against quadrature and the analytic functional values.
inline Json closedforms() {
  auto r = detail::start("closedforms");
  const double pi = std::numbers::pi;
  double worst = 0.0;
  for (double eta : {0.25, 1.0, 4.0}) {
    const auto gc = make_gaussian(1.0);
    const double gg_q = grav_functional_i0(gc, make_gaussian(1.0 / eta)).value;
    const double gg_c = i0_gauss_gauss_closed(eta);
    const auto opt = optimal_feedback_gaussian_case(1.0, 1.0 / eta);
    const double go_q = grav_functional_i0(gc, opt.profile).value;
    const double go_c = i0_gauss_optimal_closed(opt.y);
    const double d1 = detail::rel_dev(gg_q, gg_c);
    const double d2 = detail::rel_dev(go_q, go_c);
    r["rows"].push_back({{"eta", eta},
                         {"gauss_gauss_closed", gg_c},
                         {"gauss_gauss_quadrature", gg_q},
                         {"gauss_optimal_closed", go_c},
                         {"gauss_optimal_quadrature", go_q}});
    worst = std::max({worst, d1, d2});
  }
  detail::check(r, "max relative deviation closed form vs quadrature", worst, 0.0, 1e-8, worst < 1e-8);
  detail::check_rel(r, "Dirichlet energy of unit gaussian", dirichlet_energy(make_gaussian(1.0)).value, 0.375, 1e-9);
  const double irc_g = grad_sq_functional(make_gaussian(1.0)).value;
  const double irc_q = grad_sq_functional(make_compact_quartic(1.0)).value;
  detail::check_rel(r, "I_rC gaussian", irc_g, 3.0 / (128.0 * std::pow(pi, 1.5)), 1e-8);
  detail::check_rel(r, "I_rC quartic", irc_q, 35.0 / (3888.0 * pi), 1e-8);
  detail::check(r, "I_rC gaussian / quartic", irc_g / irc_q, 1.47, 0.01, std::abs(irc_g / irc_q - 1.47) <= 0.01);
  detail::check_rel(r, "I_rG ball", macro_feedback_functional(make_uniform_ball(1.0)).value,
                    12.0 * pi / (5.0 * std::sqrt(5.0)), 1e-10);
  detail::check_rel(r, "I_rG gaussian", macro_feedback_functional(make_gaussian(1.0)).value, 2.0 * std::sqrt(pi), 1e-8);
  return r;
}

/// Each functional at two scales against its length power.
inline Json scaling() {
  auto r = detail::start("scaling");
  struct Case {
    const char* name;
    int power;
    std::function<double(double)> eval;
  };
  const std::vector<Case> cases{
      {"dirichlet subgauss:1.7", -2, [](double s) { return dirichlet_energy(make_sub_gaussian(1.7, s)).value; }},
      {"grad_sq quartic", -5, [](double s) { return grad_sq_functional(make_compact_quartic(s)).value; }},
      {"i0 gaussian/gaussian", -4,
       [](double s) { return grav_functional_i0(make_gaussian(s), make_gaussian(s)).value; }},
      {"i0 gaussian/optimal", -4,
       [](double s) { return grav_functional_i0(make_gaussian(s), optimal_feedback_gaussian_case(s, s).profile).value; }},
      {"irg subgauss:2.5", -1, [](double s) { return macro_feedback_functional(make_sub_gaussian(2.5, s)).value; }},
      {"irg ball", -1, [](double s) { return macro_feedback_functional(make_uniform_ball(s)).value; }},
      {"two-particle gaussian", -2, [](double s) { return two_particle_psl(make_gaussian(s), 1.0, 10.0, s).value; }},
  };
  for (const auto& c : cases) {
    const double unit = c.eval(1.0);
    for (double s : {1e-7, 3.0}) {
      const double expected = unit * std::pow(s, c.power);
      detail::check_rel(r, std::string(c.name) + " at scale " + gpsl::detail::format_param(s), c.eval(s), expected, 1e-8);
    }
  }
  return r;
}

/// Admissible perturbations of the optimal feedback Q at r_G = r_C.
inline Json optimality_perturbation(const SuiteOptions& opt) {
  auto r = detail::start("optimality-perturbation");
  r["seed"] = opt.seed;
  const auto rows = gpsl::optimality_perturbation(1.0, 1.0, static_cast<int>(opt.perturbations), opt.seed);
  std::size_t ok = 0;
  for (const auto& row : rows) {
    r["rows"].push_back({{"bump1", {row.a1, row.b1}},
                         {"bump2", {row.a2, row.b2}},
                         {"epsilon", row.epsilon},
                         {"delta_i0", row.delta_i0},
                         {"second_order_prediction", row.predicted},
                         {"tolerance", row.tolerance},
                         {"pass", row.ok}});
    ok += row.ok ? 1 : 0;
  }
  detail::check(r, "perturbations not lowering I_0", static_cast<double>(ok), static_cast<double>(rows.size()), 0.0,
                ok == rows.size());
  return r;
}

/// Runs one suite by name; throws DomainError on an unknown name.
inline Json run_suite(const std::string& name, const SuiteOptions& opt, const RadialProfile& sandwich_profile) {
  if (name == "sandwich") return sandwich(sandwich_profile, opt);
  if (name == "counterexample-psl") return counterexample_psl();
  if (name == "counterexample-gpsl") return counterexample_gpsl();
  if (name == "closedforms") return closedforms();
  if (name == "scaling") return scaling();
  if (name == "optimality-perturbation") return optimality_perturbation(opt);
  throw DomainError("unknown verify suite '" + name + "'");
}

} // namespace gpsl::verify
