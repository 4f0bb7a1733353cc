#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gpsl/functionals.hpp"
#include "gpsl/optimal_profiles.hpp"
#include "oracle_values.hpp"

using namespace gpsl;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(SupportRadius, MatchesOracle) {
  for (auto [rho, y] : oracle::kSupportY) {
    const auto sr = solve_support_radius(rho, 1.0);
    EXPECT_LT(rel(sr.y, y), 1e-10) << rho;
    EXPECT_LT(std::abs(sr.residual), 1e-9 * std::max(1.0, 3.0 * rho * rho)) << rho;
  }
}

TEST(SupportRadius, Asymptotes) {
  EXPECT_LT(rel(solve_support_radius(1e-3, 1.0).R / 1e-3, std::sqrt(5.0)), 0.01);
  EXPECT_LT(rel(solve_support_radius(1e3, 1.0).R / 1e3, std::sqrt(3.0)), 0.01);
  EXPECT_NEAR(solve_support_radius(1.0, 1.0).R, 2.0, 0.01);
}

TEST(SupportRadius, LhsSeriesBranchContinuous) {
  EXPECT_NEAR(support_lhs(std::nextafter(1.0, 0.0)), support_lhs(1.0), 1e-13);
  EXPECT_THROW(support_lhs(0.0), DomainError);
}

TEST(SupportRadius, MonotoneInRatio) {
  double prev_y = 0.0;
  double prev_ratio = 10.0;
  for (double e = -3.0; e <= 3.0; e += 0.1) {
    const double rho = std::pow(10.0, e);
    const auto sr = solve_support_radius(rho, 1.0);
    EXPECT_GT(sr.y, prev_y) << rho;
    EXPECT_LE(sr.R / rho, prev_ratio + 1e-12) << rho;
    prev_y = sr.y;
    prev_ratio = sr.R / rho;
  }
}

TEST(SupportRadius, ScaleInvariant) {
  const auto a = solve_support_radius(2.0, 1.0);
  const auto b = solve_support_radius(2e-7, 1e-7);
  EXPECT_LT(rel(a.y, b.y), 1e-12);
  EXPECT_LT(rel(a.R * 1e-7, b.R), 1e-12);
}

TEST(OptimalGaussianCase, ProfileInvariants) {
  for (double rg : {0.25, 1.0, 4.0}) {
    const auto sol = optimal_feedback_gaussian_case(1.0, rg);
    const auto& p = sol.profile;
    EXPECT_EQ(p.Q(sol.R), 1.0);
    EXPECT_NEAR(normalization(p), 1.0, 1e-9) << rg;
    EXPECT_LT(rel(second_moment(p), 3.0 * rg * rg), 1e-8) << rg;
    double prev = 0.0;
    for (int i = 0; i <= 200; ++i) {
      const double r = sol.R * i / 200.0;
      EXPECT_GE(p.g(r), prev) << r;
      prev = p.g(r);
    }
    EXPECT_GT(p.g(sol.R), 0.0);
    EXPECT_EQ(p.g(sol.R * (1.0 + 1e-12)), 0.0);
  }
}

TEST(OptimalGaussianCase, DerivedPotential) {
  const auto sol = optimal_feedback_gaussian_case(1.0, 1.0);
  const auto d = derive(sol.profile);
  for (double r : {0.2, 0.9, 1.7, 2.5, 4.0}) {
    const double h = 1e-5;
    EXPECT_NEAR((d.f_pot(r + h) - d.f_pot(r - h)) / (2 * h), -d.Q(r) / (r * r), 1e-8) << r;
  }
  EXPECT_NEAR(d.f_pot(1e8), 1e-8, 1e-20);
}

TEST(OptimalGeneral, GaussianSpecialization) {
  const auto a = optimal_feedback_gaussian_case(1.0, 1.0);
  const auto b = optimal_feedback_general(make_gaussian(1.0), 1.0);
  EXPECT_LT(rel(a.R, b.R), 1e-10);
  for (double r : {0.1, 0.5, 1.0, 1.5, 1.99}) {
    EXPECT_LT(rel(a.profile.g(r), b.profile.g(r)), 1e-8) << r;
    EXPECT_LT(rel(a.profile.Q(r), b.profile.Q(r)), 1e-8) << r;
  }
}

TEST(OptimalGeneral, ConstantWeightGivesBall) {
  const auto sol = optimal_feedback_general(BaseWeight::constant(), 1.3);
  EXPECT_LT(rel(sol.R, std::sqrt(5.0) * 1.3), 1e-10);
  const auto ball = make_uniform_ball(1.3);
  for (double r : {0.2, 1.0, 2.5}) EXPECT_LT(rel(sol.profile.g(r), ball.g(r)), 1e-10);
}

TEST(OptimalGeneral, SubGaussianSatisfiesConstraints) {
  for (double rg : {0.5, 1.0, 3.0}) {
    const auto sol = optimal_feedback_general(make_sub_gaussian(1.9, 1.0), rg);
    EXPECT_NEAR(normalization(sol.profile), 1.0, 1e-9);
    EXPECT_LT(rel(second_moment(sol.profile), 3.0 * rg * rg), 1e-8) << rg;
    EXPECT_GE(sol.R, std::sqrt(3.0) * rg);
    EXPECT_LE(sol.R, std::sqrt(5.0) * rg);
  }
}

TEST(OptimalGeneral, OptimalBeatsOtherFeedbackProfiles) {
  const auto gc = make_sub_gaussian(1.9, 1.0);
  const auto sol = optimal_feedback_general(gc, 1.0);
  const double best = grav_functional_i0(gc, sol.profile).value;
  for (const auto& gg : {make_gaussian(1.0), make_uniform_ball(1.0), make_compact_quartic(1.0)})
    EXPECT_GT(grav_functional_i0(gc, gg).value, best) << gg.label();
}

TEST(OptimalGeneral, CompactCollapseProfileTooNarrow) {
  EXPECT_THROW(optimal_feedback_general(make_compact_quartic(1.0), 5.0), SingularProfile);
}

TEST(RatioCurve, Values) {
  const auto rows = ratio_curve({1.0, 10.0});
  EXPECT_LT(rel(std::pow(10.0, rows[0].log10_ratio), oracle::kRatioAt1), 1e-10);
  EXPECT_NEAR(rows[1].log10_ratio, oracle::kLog10RatioAt10, 1e-8);
}

TEST(RatioCurve, AlwaysAboveOne) {
  std::vector<double> grid;
  for (double e = -3.0; e <= 3.0; e += 0.25) grid.push_back(std::pow(10.0, e));
  for (const auto& row : ratio_curve(grid)) EXPECT_GT(row.log10_ratio, 0.0) << row.rg_over_rc;
}

TEST(PslSearch, ArgminAndClusteredLimit) {
  const auto res = psl_counterexample_search(1.0, 10.0, 1.0, {1.8, 1.9, 2.0, 2.1});
  EXPECT_NE(res.rows[res.argmin].p, 2.0);
  EXPECT_NEAR(res.rows[2].value, 0.4136, 5e-4);
  const auto clustered = psl_counterexample_search(1.0, 10.0, 0.0, {1.8, 1.9, 2.0, 2.1, 2.2});
  EXPECT_EQ(clustered.rows[clustered.argmin].p, 2.0);
}

TEST(GpslCounterexample, DegenerateAtZero) {
  const auto r = gpsl_counterexample(make_gaussian(1.0), 1.0, 0.0);
  EXPECT_LT(std::abs(r.gap()), 1e-8 * r.i_z_aware);
  EXPECT_LT(rel(r.R_z, r.R_0), 1e-10);
}

TEST(GpslCounterexample, ZAwareOptimumWinsAtUnitOffset) {
  const auto r = gpsl_counterexample(make_gaussian(1.0), 1.0, 1.0);
  EXPECT_GT(r.gap(), 1e-7);
  EXPECT_NE(r.R_z, r.R_0);
}

TEST(GpslCounterexample, IsolatedOptimumDecomposes) {
  const auto gc = make_gaussian(1.0);
  const auto opt = optimal_feedback_gaussian_case(1.0, 1.0).profile;
  for (double z : {1.0, 20.0}) {
    const auto r = gpsl_counterexample(gc, 1.0, z);
    const double expected = grav_functional_i0(gc, opt).value + pair_grav_functional(gc, opt, z).value;
    EXPECT_LT(rel(r.i_z0_optimal, expected), 1e-8) << z;
  }
  const auto far = gpsl_counterexample(gc, 1.0, 20.0);
  EXPECT_LT(std::abs(far.gap()), 1e-6 * far.i_z_aware);
}

TEST(Perturbation, NeverDecreasesI0) {
  const auto rows = optimality_perturbation(1.0, 1.0, 10, 2024);
  ASSERT_EQ(rows.size(), 10u);
  for (const auto& row : rows) {
    EXPECT_TRUE(row.ok) << row.delta_i0 << " tol " << row.tolerance;
    EXPECT_NEAR(row.delta_i0, row.predicted, 1e-3 * row.predicted + row.tolerance);
    EXPECT_NE(row.epsilon, 0.0);
  }
}
