#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gpsl/astro_bounds.hpp"
#include "gpsl/functionals.hpp"
#include "gpsl/optimal_profiles.hpp"
#include "gpsl/regimes.hpp"
#include "gpsl/verify.hpp"

using namespace gpsl;
namespace fs = std::filesystem;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1)));
  return g;
}

Outcome c1() {
  const double v = dirichlet_energy(make_gaussian(1.0)).value;
  return {rel(v, 0.375) <= 1e-9, "I[sqrt g] = " + num(v)};
}

Outcome c2() {
  const double g = grad_sq_functional(make_gaussian(1.0)).value;
  const double q = grad_sq_functional(make_compact_quartic(1.0)).value;
  const double pi = std::numbers::pi;
  const bool ok = rel(g, 3.0 / (128.0 * std::pow(pi, 1.5))) <= 1e-8 && rel(q, 35.0 / (3888.0 * pi)) <= 1e-8 &&
                  std::abs(g / q - 1.47) <= 0.01 && rel(g, 4.21e-3) <= 1e-3 && rel(q, 2.866e-3) <= 1e-3;
  return {ok, "gaussian " + num(g) + ", quartic " + num(q) + ", ratio " + num(g / q)};
}

Outcome c3() {
  const double pi = std::numbers::pi;
  const double ball = macro_feedback_functional(make_uniform_ball(1.0)).value;
  const double gauss = macro_feedback_functional(make_gaussian(1.0)).value;
  const double d1 = rel(ball, 12.0 * pi / (5.0 * std::sqrt(5.0)));
  const double d2 = rel(gauss, 2.0 * std::sqrt(pi));
  return {d1 <= 1e-10 && d2 <= 1e-8, "ball " + num(ball) + " (rel " + num(d1) + "), gaussian " + num(gauss) + " (rel " + num(d2) + ")"};
}

Outcome c4() {
  const auto r = verify::closedforms();
  const double worst = r["checks"][0]["value"].get<double>();
  return {worst < 1e-8, "max relative deviation " + num(worst)};
}

Outcome c5() {
  const auto at1 = ratio_point(1.0);
  const auto at10 = ratio_point(10.0);
  const double ratio = std::pow(10.0, at1.log10_ratio);
  const bool ok = std::abs(ratio - 2.235) <= 0.005 && std::abs(at10.log10_ratio - 62.41) <= 0.05;
  return {ok, "ratio at r_G=r_C " + num(ratio) + " (target 2.235 +- 0.005), log10 ratio at r_G=10 r_C " +
                  num(at10.log10_ratio) + " (target 62.41 +- 0.05)"};
}

Outcome c6() {
  const double small = solve_support_radius(1e-3, 1.0).R / 1e-3;
  const double large = solve_support_radius(1e3, 1.0).R / 1e3;
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (double rho : log_grid(1e-3, 1e3, 121)) {
    const double v = solve_support_radius(rho, 1.0).R / rho;
    monotone = monotone && v < prev;
    prev = v;
  }
  const bool ok = rel(small, std::sqrt(5.0)) <= 0.01 && rel(large, std::sqrt(3.0)) <= 0.01 && monotone;
  return {ok, "R/r_G " + num(small) + " at 1e-3, " + num(large) + " at 1e3, monotone " + (monotone ? "yes" : "no")};
}

Outcome c7() {
  const double g = two_particle_psl(make_gaussian(1.0), 1.0, 10.0, 1.0).value;
  const double s = two_particle_psl(make_sub_gaussian(1.9, 1.0), 1.0, 10.0, 1.0).value;
  const bool ok = std::abs(g - 0.4136) <= 5e-4 && std::abs(s - 0.4125) <= 5e-4 && g - s > 0.0;
  return {ok, "gaussian " + num(g) + ", p=1.9 " + num(s) + ", difference " + num(g - s)};
}

Outcome c8() {
  const auto t0 = std::chrono::steady_clock::now();
  verify::SuiteOptions opt;
  opt.samples = 200000;
  opt.configs = 200;
  const auto r = verify::sandwich(make_gaussian(1.0), opt);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& chk = r["checks"][0];
  const bool ok = r["pass"].get<bool>() && secs <= 300.0;
  return {ok, num(chk["value"].get<double>()) + "/" + num(chk["expected"].get<double>()) + " configs pass in " +
                  num(secs) + " s; conjecture I_N >= I held in " + num(r["conjecture_I_N_ge_I"]["holds"].get<double>())};
}

Outcome c9() {
  const PhysicalConstants k;
  const double hot = thermal_de_broglie(k.m_neutron, 0.28e6, k);
  const double cold = thermal_de_broglie(k.m_neutron, 4.2e4, k);
  return {rel(hot, 3.29e-12) <= 0.01 && rel(cold, 8.48e-12) <= 0.01, num(hot) + " m, " + num(cold) + " m"};
}

Outcome c10() {
  const auto stars = builtin_stars();
  const double p1840 = radiated_power(stars[0]);
  const double p2144 = radiated_power(stars[1]);
  return {rel(p1840, 4.38e23) <= 0.03 && rel(p2144, 3.75e20) <= 0.03,
          stars[0].name + " " + num(p1840) + " W, " + stars[1].name + " " + num(p2144) + " W"};
}

Outcome c11() {
  const double m = 1.988e30, L = 1e4;
  const double r = density_sq_integral({DensityKind::tolman_vii, m, L}) / density_sq_integral({DensityKind::uniform, m, L});
  return {rel(r, 10.0 / 7.0) <= 1e-8 && rel(r, 1.43) <= 0.005, "ratio " + num(r)};
}

Outcome c12() {
  const double r = contributions_ratio(1e-18, 1e-4, PhysicalConstants{}.m0);
  return {rel(r, 3.19e15) <= 0.02, "ratio " + num(r)};
}

Outcome c13() {
  const auto m = dark_matter_min_mass(2.3e-27, 1e-4);
  const bool ok = rel(m.kg, 2.3e-39) <= 0.05 && rel(m.eV, 1.2e-3) <= 0.05;
  return {ok, num(m.kg) + " kg (target 2.3e-39), " + num(m.eV) + " eV/c^2 (target 1.2e-3 +- 5%)"};
}

Outcome c14() {
  const auto stars = builtin_stars();
  const auto grid = log_grid(1e-9, 1e-4, 51);
  std::size_t compared = 0, agree = 0, dominated = 0, points = 0;
  double worst = 0.0;
  for (double fixed : {1e-8, 1e-7, 1e-6}) {
    for (auto axis : {GridAxis::r_C, GridAxis::r_G}) {
      const auto hot = exclusion_grid(stars[0], axis, grid, fixed);
      const auto cold = exclusion_grid(stars[1], axis, grid, fixed);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (const auto* b : {&hot.rows[i].bounds, &cold.rows[i].bounds}) {
          if (b->excluded || b->lambda_plus / b->lambda_minus <= 1e6) continue;
          ++compared;
          const double d = std::max(rel(b->approx_plus, b->lambda_plus), rel(b->approx_minus, b->lambda_minus));
          worst = std::max(worst, d);
          agree += d <= 1e-3 ? 1 : 0;
        }
        const auto& h = hot.rows[i].bounds;
        const auto& c = cold.rows[i].bounds;
        ++points;
        dominated += (c.lambda_plus <= h.lambda_plus && c.lambda_minus >= h.lambda_minus) ? 1 : 0;
      }
    }
  }
  const bool ok = compared > 0 && agree == compared && dominated == points;
  return {ok, "exact vs approximate worst rel " + num(worst) + " over " + num(static_cast<double>(compared)) +
                  " bounds; dominance at " + num(static_cast<double>(dominated)) + "/" + num(static_cast<double>(points)) +
                  " grid points"};
}

Outcome c15() {
  const auto rows = optimality_perturbation(1.0, 1.0, 10, 7);
  std::size_t ok = 0;
  for (const auto& r : rows) ok += r.ok ? 1 : 0;
  return {rows.size() == 10 && ok == rows.size(), num(static_cast<double>(ok)) + "/10 perturbations keep I0 from decreasing"};
}

Outcome c16() {
  const auto g = make_gaussian(1.0);
  const auto at1 = gpsl_counterexample(g, 1.0, 1.0);
  const auto at0 = gpsl_counterexample(g, 1.0, 0.0);
  const double d0 = rel(at0.i_z_aware, at0.i_z0_optimal);
  return {at1.gap() > 0.0 && d0 <= 1e-8,
          "gap at z=r_C " + num(at1.gap()) + " (" + num(at1.i_z_aware) + " vs " + num(at1.i_z0_optimal) +
              "), relative difference at z=0 " + num(d0)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome c17() {
  const fs::path base = fs::temp_directory_path() / ("gpsl-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(base);
  const std::string cli = GPSL_CLI_PATH;
  auto run = [&](const std::string& dir, const std::string& threads) {
    const std::string cmd = "\"" + cli + "\" verify all --seed 11 --samples 20000 --configs 24 --threads " + threads +
                            " --out \"" + (base / dir).string() + "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  const int a = run("a", "1");
  const int b = run("b", "1");
  const int c = run("c", "4");
  std::size_t files = 0, same = 0;
  for (const auto& name : verify::suite_names()) {
    const std::string f = "verify-" + name + ".json";
    if (!fs::exists(base / "a" / f)) continue;
    const auto ref = slurp(base / "a" / f);
    ++files;
    same += (ref == slurp(base / "b" / f) && ref == slurp(base / "c" / f)) ? 1 : 0;
  }
  fs::remove_all(base);
  const bool ok = a == 0 && b == 0 && c == 0 && files == verify::suite_names().size() && same == files;
  return {ok, num(static_cast<double>(same)) + "/" + num(static_cast<double>(files)) +
                  " reports byte-identical across three runs (1, 1 and 4 threads)"};
}

} // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Dirichlet energy of the unit Gaussian", c1},
      {"I_rC for Gaussian and quartic profiles", c2},
      {"I_rG for ball and Gaussian", c3},
      {"I0 closed forms against quadrature", c4},
      {"Gaussian/optimal heating ratio", c5},
      {"support radius asymptotes and monotonicity", c6},
      {"two-particle PSL counter-example", c7},
      {"sandwich inequalities on random configurations", c8},
      {"thermal de Broglie wavelengths", c9},
      {"radiated power of the two stars", c10},
      {"Tolman VII to uniform density-squared ratio", c11},
      {"PSL to feedback contributions ratio", c12},
      {"dark-matter mass threshold", c13},
      {"lambda bounds: exact vs approximate, star dominance", c14},
      {"optimality under perturbations of Q", c15},
      {"GPSL counter-example", c16},
      {"deterministic verify reports", c17},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
