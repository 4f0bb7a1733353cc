#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "gpsl/errors.hpp"

namespace gpsl::numerics {

inline double erf(double x) noexcept { return std::erf(x); }

namespace detail {

// Sampling step and weights for Rybicki's sum. The truncation error decays
// like exp(-pi^2 / (4 h^2)), about 1e-27 for h = 0.2.
inline constexpr double kRybickiStep = 0.2;
inline constexpr int kRybickiTerms = 20;

inline const std::array<double, kRybickiTerms>& rybicki_weights() {
  static const std::array<double, kRybickiTerms> weights = [] {
    std::array<double, kRybickiTerms> c{};
    for (int i = 0; i < kRybickiTerms; ++i) {
      const double t = (2.0 * i + 1.0) * kRybickiStep;
      c[static_cast<std::size_t>(i)] = std::exp(-t * t);
    }
    return c;
  }();
  return weights;
}

inline double dawson_taylor(double x) {
  // F(x) = x * sum_n (-2x^2)^n / (2n+1)!!
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 60; ++n) {
    term *= -2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return x * sum;
}

inline double dawson_asymptotic(double x) {
  // F(x) ~ 1/(2x) * sum_n (2n-1)!! / (2x^2)^n, used only where the
  // smallest term is far below double precision.
  const double inv = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 30; ++n) {
    term *= (2.0 * n - 1.0) * inv;
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum / (2.0 * x);
}

} // namespace detail

/// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
///
/// Taylor series near the origin, Rybicki's exponentially convergent sum in
/// the bulk and the asymptotic series for large |x|. Relative accuracy is
/// better than 1e-13 on the whole real line.
inline double dawson(double x) {
  if (std::isnan(x)) return x;
  const double ax = std::abs(x);
  if (ax < 0.2) return detail::dawson_taylor(x);
  if (ax > 50.0) return std::copysign(detail::dawson_asymptotic(ax), x);

  const double h = detail::kRybickiStep;
  const auto& c = detail::rybicki_weights();
  const double n0 = 2.0 * std::nearbyint(0.5 * ax / h);
  const double xp = ax - n0 * h;
  double e1 = std::exp(2.0 * xp * h);
  const double e2 = e1 * e1;
  double d1 = n0 + 1.0;
  double d2 = d1 - 2.0;
  double sum = 0.0;
  for (int i = 0; i < detail::kRybickiTerms; ++i) {
    sum += c[static_cast<std::size_t>(i)] * (e1 / d1 + 1.0 / (d2 * e1));
    d1 += 2.0;
    d2 -= 2.0;
    e1 *= e2;
  }
  return std::copysign(std::numbers::inv_sqrtpi * std::exp(-xp * xp) * sum, x);
}

/// exp(-x^2) * erfi(x), finite for every real x.
inline double erfi_scaled(double x) { return 2.0 * std::numbers::inv_sqrtpi * dawson(x); }

/// Scaled complementary error function exp(x^2) * erfc(x).
inline double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 2.0) {
    if (x < -26.0) return std::numeric_limits<double>::infinity();
    return std::exp(x * x) * std::erfc(x);
  }
  // Continued fraction 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::numbers::inv_sqrtpi / f;
}

/// Euler gamma function on the positive half-line.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  return std::tgamma(x);
}

} // namespace gpsl::numerics
