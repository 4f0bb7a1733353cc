#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "gpsl/errors.hpp"

namespace gpsl::numerics {

struct RootSpec {
  double bracket_lo = 0.0;
  double bracket_hi = 1.0;
  double tol = 1e-13;
  int max_iter = 200;

  void validate() const {
    if (!(bracket_lo < bracket_hi)) throw DomainError("RootSpec: bracket_lo must be below bracket_hi");
    if (!(tol > 0.0)) throw DomainError("RootSpec: tol must be positive");
  }
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Brent's method on a sign-changing bracket. `tol` is relative to |x|
/// (absolute near zero).
template <class F>
RootResult brent(F&& f, const RootSpec& spec) {
  spec.validate();
  double a = spec.bracket_lo;
  double b = spec.bracket_hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, 0.0, 0};
  if (fb == 0.0) return {b, 0.0, 0};
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0))
    throw NotBracketed("find_root: f(lo) = " + std::to_string(fa) + ", f(hi) = " + std::to_string(fb));

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 1; iter <= spec.max_iter; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * spec.tol * std::max(std::abs(b), 1e-300);
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return {b, fb, iter};
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw NonConvergence("find_root: iteration budget exhausted");
}

template <class F>
double find_root(F&& f, const RootSpec& spec) {
  return brent(std::forward<F>(f), spec).root;
}

/// Grows [lo, hi] geometrically (lo /= factor, hi *= factor) until f changes
/// sign or the limits are reached. Returns the bracket; throws NotBracketed
/// if none is found.
template <class F>
std::pair<double, double> expand_bracket(F&& f, double lo, double hi, double lo_limit, double hi_limit,
                                         double factor = 2.0) {
  double flo = f(lo);
  double fhi = f(hi);
  while ((flo > 0.0) == (fhi > 0.0)) {
    if (lo <= lo_limit && hi >= hi_limit)
      throw NotBracketed("expand_bracket: no sign change inside the search limits");
    if (lo > lo_limit) {
      lo = std::max(lo / factor, lo_limit);
      flo = f(lo);
    }
    if (hi < hi_limit) {
      hi = std::min(hi * factor, hi_limit);
      fhi = f(hi);
    }
  }
  return {lo, hi};
}

} // namespace gpsl::numerics
