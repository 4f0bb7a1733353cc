#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gpsl/numerics/quadrature.hpp"
#include "gpsl/numerics/root_finding.hpp"
#include "gpsl/numerics/special_functions.hpp"
#include "oracle_values.hpp"

using namespace gpsl::numerics;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(SpecialFunctions, DawsonMatchesOracle) {
  for (auto [x, ref] : oracle::kDawson) {
    EXPECT_LT(rel(dawson(x), ref), 1e-13) << "x = " << x;
    EXPECT_LT(rel(dawson(-x), -ref), 1e-13) << "x = " << -x;
  }
}

TEST(SpecialFunctions, DawsonAsymptote) {
  for (double x : {60.0, 200.0, 1e4, 1e8}) EXPECT_LT(rel(dawson(x), 0.5 / x), 0.6 / (x * x));
  EXPECT_NEAR(dawson(10.0), 0.05025, 5e-6);
}

TEST(SpecialFunctions, DawsonContinuousAcrossBranches) {
  for (double x : {0.2, 50.0}) {
    const double lo = dawson(std::nextafter(x, 0.0));
    const double hi = dawson(x);
    EXPECT_LT(std::abs(hi - lo), 1e-14 * std::abs(hi)) << x;
  }
}

TEST(SpecialFunctions, ErfiScaled) {
  EXPECT_LT(rel(erfi_scaled(5.0), 2.0 * std::numbers::inv_sqrtpi * 0.10213407442427683544), 1e-14);
  EXPECT_NEAR(erfi_scaled(5.0), 0.115246, 1e-6);
  EXPECT_EQ(erfi_scaled(0.0), 0.0);
  EXPECT_TRUE(std::isfinite(erfi_scaled(1e6)));
  EXPECT_TRUE(std::isfinite(erfi_scaled(40.0)));
}

TEST(SpecialFunctions, ErfiScaledAgreesWithDirectErfi) {
  // erfi(x) = (2/sqrt(pi)) int_0^x exp(t^2) dt, integrated directly.
  for (double x : {0.3, 1.0, 2.5, 5.0}) {
    const double direct =
        2.0 * std::numbers::inv_sqrtpi * integrate([](double t) { return std::exp(t * t); }, 0.0, x, {1e-14, 0.0}).value;
    EXPECT_LT(rel(erfi_scaled(x) * std::exp(x * x), direct), 1e-10) << x;
  }
}

TEST(SpecialFunctions, ErfcxMatchesOracle) {
  for (auto [x, ref] : oracle::kErfcx) EXPECT_LT(rel(erfcx(x), ref), 1e-13) << "x = " << x;
  EXPECT_LT(rel(erfcx(-1.0), std::exp(1.0) * std::erfc(-1.0)), 1e-14);
}

TEST(SpecialFunctions, Gamma) {
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
  EXPECT_LT(rel(gamma_fn(3.0 / 1.9), oracle::kGamma3Over1p9), 1e-13);
  EXPECT_THROW(gamma_fn(0.0), gpsl::DomainError);
  EXPECT_THROW(gamma_fn(-1.5), gpsl::DomainError);
  EXPECT_EQ(gpsl::numerics::erf(0.0), 0.0);
}

TEST(Quadrature, RadialExamples) {
  const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
  auto gauss = [&](double r) { return 4.0 * std::numbers::pi * r * r * norm * std::exp(-0.5 * r * r); };
  auto res = integrate_radial(gauss);
  EXPECT_NEAR(res.value, 1.0, 1e-10);
  EXPECT_LE(res.error, std::max(1e-14, 1e-10 * res.value));
  EXPECT_NEAR(integrate_radial([](double r) { return std::exp(-r); }).value, 1.0, 1e-10);
  EXPECT_NEAR(integrate_radial([](double r) { return r * r * std::exp(-0.5 * r * r); }).value,
              std::sqrt(std::numbers::pi / 2.0), 1e-10);
}

TEST(Quadrature, RationalMapAgreesWithExpMap) {
  QuadratureSpec spec;
  spec.transform = Transform::none;
  EXPECT_NEAR(integrate_tail([](double r) { return 1.0 / (r * r); }, 1.0, 1.0, spec).value, 1.0, 1e-10);
  EXPECT_NEAR(integrate_tail([](double r) { return std::exp(-r); }, 2.0, 1.0, spec).value, std::exp(-2.0), 1e-12);
}

TEST(Quadrature, EndpointSingularity) {
  EXPECT_NEAR(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0).value, 2.0, 1e-9);
  EXPECT_NEAR(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value, -1.0, 1e-9);
}

TEST(Quadrature, BreakpointsAndReversal) {
  const double bp[] = {0.3};
  auto f = [](double x) { return std::abs(x - 0.3); };
  EXPECT_NEAR(integrate(f, 0.0, 1.0, {}, bp).value, 0.5 * (0.09 + 0.49), 1e-14);
  EXPECT_NEAR(integrate(f, 1.0, 0.0, {}, bp).value, -0.29, 1e-14);
}

TEST(Quadrature, BudgetExhaustionThrows) {
  QuadratureSpec spec{1e-14, 0.0, 3};
  EXPECT_THROW(integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, spec), gpsl::NonConvergence);
}

TEST(Quadrature, InvalidSpecRejected) {
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, {0.0, 0.0}), gpsl::DomainError);
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, {1e-8, -1.0}), gpsl::DomainError);
  EXPECT_THROW(integrate([](double x) { return x; }, 0.0, 1.0, {1e-8, 0.0, 0}), gpsl::DomainError);
}

TEST(Quadrature, PolarExamples) {
  const double norm = std::pow(2.0 * std::numbers::pi, -1.5);
  auto f = [&](double r, double th) { return std::sin(th) * r * r * norm * std::exp(-0.5 * r * r) * std::numbers::pi; };
  EXPECT_NEAR(integrate_polar(f, {1e-10, 1e-14}).value, 0.5, 1e-9);
  auto h = [](double r, double th) { return std::sin(th) * std::exp(-r); };
  EXPECT_NEAR(integrate_polar(h).value, 2.0, 1e-9);
}

TEST(RootFinding, Examples) {
  EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, {1.0, 2.0}), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(find_root([](double x) { return std::cos(x); }, {1.0, 2.0}), std::numbers::pi / 2.0, 1e-12);
}

TEST(RootFinding, Errors) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, {-1.0, 1.0}), gpsl::NotBracketed);
  EXPECT_THROW(find_root([](double x) { return x; }, {1.0, -1.0}), gpsl::DomainError);
  RootSpec tight{0.0, 3.0, 1e-15, 2};
  EXPECT_THROW(find_root([](double x) { return std::exp(x) - 5.0; }, tight), gpsl::NonConvergence);
}

TEST(RootFinding, InvariantUnderBracketRefinement) {
  auto f = [](double x) { return std::tanh(x - 0.7) + 0.1 * x; };
  const double ref = find_root(f, {-5.0, 5.0});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> lo(-5.0, 0.5), hi(0.8, 5.0);
  for (int i = 0; i < 20; ++i) EXPECT_NEAR(find_root(f, {lo(rng), hi(rng)}), ref, 1e-12);
}

TEST(RootFinding, ExpandBracket) {
  auto f = [](double y) { return y - 1234.5; };
  auto [lo, hi] = expand_bracket(f, 1.0, 2.0, 1e-6, 1e6);
  EXPECT_LE(lo, 1234.5);
  EXPECT_GE(hi, 1234.5);
  EXPECT_THROW(expand_bracket(f, 1.0, 2.0, 0.5, 100.0), gpsl::NotBracketed);
}
