#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "gpsl/smearing.hpp"
#include "oracle_values.hpp"

using namespace gpsl;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<RadialProfile> families(double s) {
  return {make_gaussian(s), make_sub_gaussian(1.9, s), make_sub_gaussian(1.3, s), make_sub_gaussian(3.0, s),
          make_compact_quartic(s), make_uniform_ball(s)};
}

RadialProfile gaussian_table(double s, int n, double rmax) {
  std::vector<double> r, g;
  for (int i = 0; i < n; ++i) {
    const double x = rmax * i / (n - 1);
    r.push_back(x);
    g.push_back(3.7 * std::exp(-0.5 * x * x / (s * s)));  // deliberately unnormalized
  }
  return make_tabulated(r, g);
}

} // namespace

TEST(Smearing, NormalizationAndVariance) {
  for (double s : {1.0, 0.37, 2.5}) {
    for (const auto& p : families(s)) {
      EXPECT_NEAR(normalization(p), 1.0, 1e-9) << p.label();
      EXPECT_LT(rel(second_moment(p), 3.0 * s * s), 1e-8) << p.label();
    }
  }
}

TEST(Smearing, GaussianValues) {
  auto p = make_gaussian(1.0);
  EXPECT_LT(rel(p.g(0.0), oracle::kGaussianG0), 1e-14);
  EXPECT_LT(rel(p.Q(1.0), oracle::kGaussianQ1), 1e-14);
  EXPECT_NEAR(p.Q(60.0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(p.Q(0.0), 0.0);
}

TEST(Smearing, SubGaussianDegeneratesToGaussian) {
  auto a = make_sub_gaussian(2.0, 1.3);
  auto b = make_gaussian(1.3);
  for (double r = 0.0; r < 8.0; r += 0.173) {
    EXPECT_LT(std::abs(a.g(r) - b.g(r)), 1e-12 * b.g(0.0)) << r;
    EXPECT_NEAR(a.Q(r), b.Q(r), 1e-12);
    EXPECT_NEAR(a.tail_moment(r), b.tail_moment(r), 1e-12);
  }
  EXPECT_TRUE(a.is_gaussian());
}

TEST(Smearing, SubGaussianAlpha) {
  EXPECT_LT(rel(sub_gaussian_alpha(1.9), oracle::kAlphaP1p9), 1e-13);
  EXPECT_NEAR(sub_gaussian_alpha(2.0), std::numbers::sqrt2, 1e-14);
}

TEST(Smearing, QuarticSupport) {
  auto p = make_compact_quartic(1.0);
  ASSERT_TRUE(p.support_radius().has_value());
  EXPECT_DOUBLE_EQ(*p.support_radius(), 3.0);
  EXPECT_EQ(p.g(3.0), 0.0);
  EXPECT_EQ(p.g(3.5), 0.0);
  EXPECT_GT(p.g(2.99), 0.0);
  EXPECT_NEAR(p.Q(3.0), 1.0, 1e-14);
}

TEST(Smearing, UniformBall) {
  auto p = make_uniform_ball(1.0);
  const double R = std::sqrt(5.0);
  EXPECT_DOUBLE_EQ(*p.support_radius(), R);
  for (double r : {0.1, 0.7, 1.5, 2.2}) EXPECT_NEAR(p.Q(r), std::pow(r / R, 3), 1e-15);
  EXPECT_NEAR(p.f_pot(0.0), 1.5 / R, 1e-15);
  EXPECT_NEAR(p.f_pot(3.0), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(p.edge_jump());
}

TEST(Smearing, ConstructorsRejectBadArguments) {
  EXPECT_THROW(make_gaussian(0.0), DomainError);
  EXPECT_THROW(make_gaussian(-1.0), DomainError);
  EXPECT_THROW(make_sub_gaussian(0.0, 1.0), DomainError);
  EXPECT_THROW(make_sub_gaussian(2.0, -1.0), DomainError);
  EXPECT_THROW(make_compact_quartic(0.0), DomainError);
  EXPECT_THROW(make_uniform_ball(std::nan("")), DomainError);
}

TEST(Smearing, PotentialGradientMatchesEnclosedMass) {
  for (const auto& p : families(1.0)) {
    auto d = derive(p);
    for (int i = 1; i <= 20; ++i) {
      const double r = 0.2 * i + 0.013;
      const double h = 1e-5;
      const double fd = (d.f_pot(r + h) - d.f_pot(r - h)) / (2.0 * h);
      EXPECT_NEAR(fd + d.Q(r) / (r * r), 0.0, 1e-8) << p.label() << " r=" << r;
      EXPECT_DOUBLE_EQ(d.f_pot_grad(r), -d.Q(r) / (r * r));
    }
    EXPECT_NEAR(d.f_pot(1e6), 1e-6, 1e-12) << p.label();
  }
}

TEST(Smearing, EnclosedMassMonotone) {
  for (const auto& p : families(1.0)) {
    double prev = 0.0;
    for (double r = 0.0; r < 12.0; r += 0.01) {
      const double q = p.Q(r);
      EXPECT_GE(q, prev - 1e-15) << p.label() << " r=" << r;
      EXPECT_LE(q, 1.0 + 1e-14);
      prev = q;
    }
    EXPECT_NEAR(p.Q(1e3), 1.0, 1e-12);
    EXPECT_NEAR(p.survival(2.0), 1.0 - p.Q(2.0), 1e-14);
  }
}

TEST(Smearing, AnalyticDerivativesMatchFiniteDifferences) {
  for (const auto& p : families(1.0)) {
    if (p.edge_jump()) continue;
    for (double r : {0.3, 1.1, 2.0, 2.7}) {
      const double h = 1e-6;
      const double fd = (p.g(r + h) - p.g(r - h)) / (2.0 * h);
      EXPECT_NEAR(p.dg(r), fd, 1e-7) << p.label() << " r=" << r;
      EXPECT_NEAR(p.dlog_g(r), fd / p.g(r), 1e-6 * (1.0 + std::abs(fd / p.g(r))));
    }
  }
}

TEST(Smearing, RescalingPreservesShape) {
  for (const auto& p : families(1.0)) {
    auto q = p.rescaled(2.0);
    EXPECT_DOUBLE_EQ(q.scale(), 2.0);
    for (double r : {0.2, 1.0, 2.3}) {
      EXPECT_NEAR(q.g(2.0 * r), p.g(r) / 8.0, 1e-15);
      EXPECT_NEAR(q.Q(2.0 * r), p.Q(r), 1e-14);
    }
  }
}

TEST(Smearing, TabulatedReproducesGaussian) {
  auto t = gaussian_table(1.0, 400, 10.0);
  auto ref = make_gaussian(1.0);
  EXPECT_NEAR(normalization(t), 1.0, 1e-9);
  EXPECT_NEAR(t.scale(), 1.0, 1e-5);
  for (double r : {0.0, 0.5, 1.7, 3.0}) {
    EXPECT_NEAR(t.g(r), ref.g(r), 1e-6 * ref.g(0.0)) << r;
    EXPECT_NEAR(t.Q(r), ref.Q(r), 1e-6) << r;
  }
  EXPECT_EQ(t.g(10.5), 0.0);
  EXPECT_NEAR(t.dg(1.0), ref.dg(1.0), 1e-4);
}

TEST(Smearing, TabulatedRejectsMalformedTables) {
  EXPECT_THROW(make_tabulated({0, 1, 2}, {1, 1, 1}), ParseError);
  EXPECT_THROW(make_tabulated({0, 1, 1, 2}, {1, 1, 1, 1}), ParseError);
  EXPECT_THROW(make_tabulated({0, 1, 2, 3}, {1, -1, 1, 1}), DomainError);
  EXPECT_THROW(make_tabulated({0, 1, 2, 3}, {0, 0, 0, 0}), DomainError);
}
