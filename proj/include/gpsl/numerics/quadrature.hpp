#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "gpsl/errors.hpp"

namespace gpsl::numerics {

enum class Transform {
  none,                  ///< rational map r = a + s t/(1-t) on [a, inf)
  semi_infinite_exp_map  ///< exponential map r = a - s ln(u)
};

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  Transform transform = Transform::semi_infinite_exp_map;

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("QuadratureSpec: rel_tol must be positive");
    if (!(abs_tol >= 0.0)) throw DomainError("QuadratureSpec: abs_tol must be non-negative");
    if (max_subdivisions < 1) throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  }

  [[nodiscard]] QuadratureSpec with_rel(double rel) const {
    QuadratureSpec s = *this;
    s.rel_tol = rel;
    return s;
  }
  [[nodiscard]] QuadratureSpec with_abs(double abs) const {
    QuadratureSpec s = *this;
    s.abs_tol = abs;
    return s;
  }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

namespace detail {

// 21-point Gauss-Kronrod rule (QUADPACK dqk21). Odd entries of xgk are the
// 10-point Gauss abscissae; wg holds their Gauss weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error, resabs;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 10> fv1{};
  std::array<double, 10> fv2{};
  const double fc = f(centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 10; ++j) {
    const double absc = hlgth * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[static_cast<std::size_t>(j)] = f1;
    fv2[static_cast<std::size_t>(j)] = f2;
    const double fsum = f1 + f2;
    resk += kWgk[static_cast<std::size_t>(j)] * fsum;
    resabs += kWgk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 10; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) abserr = std::max(50.0 * eps * resabs, abserr);
  return {a, b, result, abserr, resabs};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
///
/// Interior breakpoints (kinks, support edges) seed the initial partition.
/// Throws NonConvergence when the subdivision budget runs out before the
/// error target max(abs_tol, rel_tol*|value|) is met.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {},
                     std::span<const double> breakpoints = {}) {
  spec.validate();
  if (a == b) return {};
  if (!std::isfinite(a) || !std::isfinite(b))
    throw DomainError("integrate: finite limits required; use integrate_tail");
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Panel> heap;
  double total = 0.0;
  double total_err = 0.0;
  double total_abs = 0.0;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto p = detail::gk21(f, cuts[i], cuts[i + 1]);
    evals += 21;
    total += p.value;
    total_err += p.error;
    total_abs += p.resabs;
    heap.push(p);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  int splits = 0;
  // Requests below the rule's roundoff floor are satisfied at that floor.
  auto target = [&] { return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 200.0 * eps * total_abs}); };
  while (total_err > target()) {
    if (splits >= spec.max_subdivisions)
      throw NonConvergence("integrate: subdivision budget exhausted (value " + std::to_string(total) +
                           ", error " + std::to_string(total_err) + ")");
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 100.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      // The worst panel cannot be resolved further; accept if the remaining
      // error is at roundoff level of the total, otherwise give up.
      if (total_err <= 1e3 * eps * std::abs(total)) break;
      throw NonConvergence("integrate: panel width underflow near r = " + std::to_string(mid));
    }
    heap.pop();
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    total_abs += left.resabs + right.resabs - worst.resabs;
    heap.push(left);
    heap.push(right);
    ++splits;
    if (splits % 64 == 0) {
      // Re-sum to keep accumulated cancellation out of the estimates.
      auto copy = heap;
      total = 0.0;
      total_err = 0.0;
      total_abs = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_err += copy.top().error;
        total_abs += copy.top().resabs;
        copy.pop();
      }
    }
  }
  return {sign * total, total_err, evals};
}

/// Integral of f over [a, inf) via a change of variables onto a finite
/// interval. `scale` should be comparable to the decay length of f.
template <class F>
QuadResult integrate_tail(F&& f, double a, double scale, const QuadratureSpec& spec = {}) {
  if (!(scale > 0.0)) throw DomainError("integrate_tail: scale must be positive");
  if (spec.transform == Transform::semi_infinite_exp_map) {
    auto g = [&](double u) {
      const double r = a - scale * std::log(u);
      const double v = f(r);
      return v == 0.0 ? 0.0 : v * scale / u;
    };
    return integrate(g, 0.0, 1.0, spec);
  }
  auto g = [&](double t) {
    const double one_minus = 1.0 - t;
    const double r = a + scale * t / one_minus;
    const double v = f(r);
    return v == 0.0 ? 0.0 : v * scale / (one_minus * one_minus);
  };
  return integrate(g, 0.0, 1.0, spec);
}

/// Integral of f over [0, inf). Breakpoints split the finite part; the last
/// breakpoint (or 0) starts the mapped tail. If `support` is finite the
/// integral stops there.
template <class F>
QuadResult integrate_radial(F&& f, const QuadratureSpec& spec = {}, double scale = 1.0,
                            std::span<const double> breakpoints = {},
                            double support = std::numeric_limits<double>::infinity()) {
  if (std::isfinite(support)) return integrate(f, 0.0, support, spec, breakpoints);
  double last = 0.0;
  for (double p : breakpoints) last = std::max(last, p);
  QuadResult head{};
  if (last > 0.0) head = integrate(f, 0.0, last, spec, breakpoints);
  QuadResult tail = integrate_tail(f, last, scale, spec);
  return {head.value + tail.value, head.error + tail.error, head.evaluations + tail.evaluations};
}

/// Nested integral of f(r, theta) over r in [0, inf), theta in [0, pi].
/// The inner theta integral is resolved to a tenth of the outer tolerance.
template <class F>
QuadResult integrate_polar(F&& f, const QuadratureSpec& spec = {}, double scale = 1.0,
                           std::span<const double> breakpoints = {},
                           double support = std::numeric_limits<double>::infinity()) {
  const QuadratureSpec inner = spec.with_rel(spec.rel_tol * 0.1).with_abs(spec.abs_tol * 0.1);
  long evals = 0;
  auto outer = [&](double r) {
    auto in = integrate([&](double th) { return f(r, th); }, 0.0, std::numbers::pi, inner);
    evals += in.evaluations;
    return in.value;
  };
  auto res = integrate_radial(outer, spec, scale, breakpoints, support);
  res.evaluations = evals;
  return res;
}

} // namespace gpsl::numerics
