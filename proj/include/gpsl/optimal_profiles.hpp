#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gpsl/errors.hpp"
#include "gpsl/functionals.hpp"
#include "gpsl/numerics/quadrature.hpp"
#include "gpsl/numerics/root_finding.hpp"
#include "gpsl/numerics/special_functions.hpp"
#include "gpsl/smearing.hpp"

namespace gpsl {

/// Log of a positive radial weight (typically the collapse profile g_C) and
/// its first two derivatives. The weight need not be normalized.
struct BaseWeight {
  std::function<double(double)> log_w;
  std::function<double(double)> dlog_w;
  std::function<double(double)> d2log_w;
  double support = std::numeric_limits<double>::infinity();
  double scale = std::numeric_limits<double>::quiet_NaN();  ///< NaN when the weight has no length scale
  bool gaussian = false;
  std::string label;

  static BaseWeight gaussian_weight(double r_c) {
    detail::require_positive(r_c, "r_C");
    const double k = 1.0 / (r_c * r_c);
    return {[k](double r) { return -0.5 * k * r * r; }, [k](double r) { return -k * r; },
            [k](double) { return -k; }, std::numeric_limits<double>::infinity(), r_c, true,
            "gaussian:" + detail::format_param(r_c)};
  }

  static BaseWeight constant() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
            std::numeric_limits<double>::infinity(), std::numeric_limits<double>::quiet_NaN(), false, "constant"};
  }

  static BaseWeight from_profile(const RadialProfile& p) {
    if (p.is_gaussian()) {
      auto w = gaussian_weight(p.scale());
      w.label = p.label();
      return w;
    }
    BaseWeight w;
    w.log_w = [p](double r) { return p.log_g(r); };
    w.dlog_w = [p](double r) { return p.dlog_g(r); };
    if (p.kind() == ProfileKind::sub_gaussian) {
      const double pe = p.params().at(0);
      const double b = sub_gaussian_alpha(pe) * p.scale();
      w.d2log_w = [pe, b](double r) {
        return r <= 0.0 ? 0.0 : -pe * (pe - 1.0) * std::pow(r / b, pe) / (r * r);
      };
    } else {
      const double h = 1e-5 * p.scale();
      w.d2log_w = [p, h](double r) {
        const double lo = std::max(r - h, 0.0);
        return (p.dlog_g(r + h) - p.dlog_g(lo)) / (r + h - lo);
      };
    }
    w.support = p.support();
    w.scale = p.scale();
    w.label = p.label();
    return w;
  }

  BaseWeight rescaled(double f) const {
    BaseWeight w = *this;
    auto l = log_w;
    auto d1 = dlog_w;
    auto d2 = d2log_w;
    w.log_w = [l, f](double r) { return l(r / f); };
    w.dlog_w = [d1, f](double r) { return d1(r / f) / f; };
    w.d2log_w = [d2, f](double r) { return d2(r / f) / (f * f); };
    w.support = support * f;
    w.scale = scale * f;
    return w;
  }
};

namespace detail {

/// g(r) = w(R) / (4 pi R^3 r^2) d/dr (r^3 / w(r)) on [0, R].
class OptimalFeedbackModel final : public ProfileModel {
public:
  OptimalFeedbackModel(BaseWeight base, double radius)
      : base_(std::move(base)), R_(radius), lR_(base_.log_w(radius)) {}

  double g(double r) const override {
    if (r > R_) return 0.0;
    return std::exp(lR_ - base_.log_w(r)) * (3.0 - r * base_.dlog_w(r)) / (kFourPi * R_ * R_ * R_);
  }
  double log_g(double r) const override {
    if (r > R_) return -kInf;
    return lR_ - base_.log_w(r) + std::log(3.0 - r * base_.dlog_w(r)) - std::log(kFourPi * R_ * R_ * R_);
  }
  double dlog_g(double r) const override {
    if (r > R_) return 0.0;
    const double l1 = base_.dlog_w(r);
    return -l1 - (l1 + r * base_.d2log_w(r)) / (3.0 - r * l1);
  }
  double Q(double r) const override {
    if (r >= R_) return 1.0;
    return std::exp(3.0 * std::log(r / R_) + lR_ - base_.log_w(r));
  }
  double tail_moment(double r) const override {
    if (r >= R_) return 0.0;
    if (base_.gaussian) {
      const double c2 = base_.scale * base_.scale;
      const double y = 0.5 * R_ * R_ / c2;
      const double v = 0.5 * r * r / c2;
      return c2 / (R_ * R_ * R_) * ((2.0 * y + 1.0) - (2.0 * v + 1.0) * std::exp(v - y));
    }
    return numerics::integrate([&](double m) { return kFourPi * m * g(m); }, r, R_, {1e-12, 0.0, 4000}).value;
  }
  double support() const override { return R_; }
  bool edge_jump() const override { return true; }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    return std::make_shared<OptimalFeedbackModel>(base_.rescaled(f), R_ * f);
  }

private:
  BaseWeight base_;
  double R_;
  double lR_;
};

} // namespace detail

struct SupportRadius {
  double y = 0.0;         ///< R^2 / (2 r_C^2)
  double R = 0.0;
  double residual = 0.0;  ///< LHS(y) - 3 (r_G/r_C)^2
};

struct OptimalFeedbackSolution {
  RadialProfile profile;
  double R = 0.0;
  double y = 0.0;
  double residual = 0.0;
};

/// 2y - 2 + 3/y - 3 y^(-3/2) F(sqrt y), with F Dawson's integral.
inline double support_lhs(double y) {
  if (!(y > 0.0)) throw DomainError("support_lhs: y must be positive");
  if (y < 1.0) {
    // 1.2 y + 3 sum_{n>=3} (-1)^(n+1) 2^n y^(n-1) / (2n+1)!!
    double term = 8.0 * y * y / 105.0;
    double sum = 1.2 * y;
    for (int n = 3; n < 60; ++n) {
      sum += 3.0 * ((n % 2 == 0) ? -term : term);
      term *= 2.0 * y / (2.0 * n + 3.0);
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  const double s = std::sqrt(y);
  return 2.0 * y - 2.0 + 3.0 / y - 3.0 * numerics::dawson(s) / (y * s);
}

/// Smallest positive root y of support_lhs(y) = 3 (r_G/r_C)^2; R = r_C sqrt(2y).
inline SupportRadius solve_support_radius(double r_g, double r_c, double tol = 1e-14) {
  detail::require_positive(r_g, "r_G");
  detail::require_positive(r_c, "r_C");
  const double rho = r_g / r_c;
  const double target = 3.0 * rho * rho;
  auto f = [&](double y) { return support_lhs(y) - target; };
  const double guess = rho < 1.0 ? 2.5 * rho * rho : 1.5 * rho * rho + 1.0;
  const double lo_limit = std::min(1e-6, 0.01 * rho * rho);
  const double hi_limit = 1e3 * rho * rho + 10.0;
  auto [lo, hi] = numerics::expand_bracket(f, 0.5 * guess, 2.0 * guess, lo_limit, hi_limit, 2.0);
  const auto root = numerics::brent(f, {lo, hi, tol, 300});
  return {root.root, r_c * std::sqrt(2.0 * root.root), f(root.root)};
}

/// Optimal feedback profile for a Gaussian collapse profile of width r_C.
inline OptimalFeedbackSolution optimal_feedback_gaussian_case(double r_c, double r_g) {
  const auto sr = solve_support_radius(r_g, r_c);
  auto model = std::make_shared<detail::OptimalFeedbackModel>(BaseWeight::gaussian_weight(r_c), sr.R);
  RadialProfile p(ProfileKind::optimal_feedback, r_g, {r_c, sr.R}, std::move(model),
                  "optimal:rc=" + detail::format_param(r_c) + ":rg=" + detail::format_param(r_g));
  return {std::move(p), sr.R, sr.y, sr.residual};
}

/// Variance equation R^2 - (2/R^3) int_0^R r^4 w(R)/w(r) dr - 3 r_G^2.
inline double optimal_variance_residual(const BaseWeight& w, double R, double r_g) {
  const double lR = w.log_w(R);
  auto f = [&](double r) { return std::pow(r / R, 4) * std::exp(lR - w.log_w(r)); };
  const double m = numerics::integrate(f, 0.0, R, {1e-13, 0.0, 4000}).value;
  return R * R - 2.0 * R * m - 3.0 * r_g * r_g;
}

/// Minimizer of I_0^(G) over feedback profiles of variance scale r_G for an
/// arbitrary positive collapse weight.
inline OptimalFeedbackSolution optimal_feedback_general(const BaseWeight& w, double r_g) {
  detail::require_positive(r_g, "r_G");
  auto h = [&](double R) { return optimal_variance_residual(w, R, r_g); };
  const double edge = w.support * (1.0 - 1e-12);
  double lo = std::sqrt(3.0) * r_g * (1.0 - 1e-9);
  double hi = std::sqrt(5.0) * r_g * (1.0 + 1e-9);
  if (lo >= edge) throw SingularProfile("optimal_feedback_general: collapse weight vanishes inside the support");
  hi = std::min(hi, edge);
  std::pair<double, double> br;
  try {
    br = numerics::expand_bracket(h, lo, hi, 1e-3 * r_g, std::min(1e3 * r_g, edge), 1.5);
  } catch (const NotBracketed&) {
    if (std::isfinite(w.support))
      throw SingularProfile("optimal_feedback_general: support radius would exceed the collapse-profile support");
    throw;
  }
  const auto root = numerics::brent(h, {br.first, br.second, 1e-14, 300});
  const double R = root.root;
  for (int i = 1; i <= 64; ++i) {
    const double r = R * i / 64.0;
    if (!std::isfinite(w.log_w(r)))
      throw SingularProfile("optimal_feedback_general: collapse weight vanishes inside the support");
    if (3.0 - r * w.dlog_w(r) < 0.0)
      throw DomainError("optimal_feedback_general: collapse weight grows too fast for a non-negative optimum");
  }
  auto model = std::make_shared<detail::OptimalFeedbackModel>(w, R);
  const double y = std::isfinite(w.scale) ? 0.5 * R * R / (w.scale * w.scale) : std::numeric_limits<double>::quiet_NaN();
  RadialProfile p(ProfileKind::optimal_feedback, r_g, {std::isfinite(w.scale) ? w.scale : 0.0, R}, std::move(model),
                  "optimal:base=" + w.label + ":rg=" + detail::format_param(r_g));
  return {std::move(p), R, y, root.residual};
}

inline OptimalFeedbackSolution optimal_feedback_general(const RadialProfile& g_c, double r_g) {
  return optimal_feedback_general(BaseWeight::from_profile(g_c), r_g);
}

struct RatioRow {
  double rg_over_rc = 0.0;
  double y = 0.0;
  double R_over_rg = 0.0;
  double log10_i0_gauss = 0.0;    ///< units r_C^-4
  double log10_i0_optimal = 0.0;  ///< units r_C^-4
  double log10_ratio = 0.0;
};

/// Gaussian-over-optimal feedback heating ratio, evaluated in the log domain.
inline RatioRow ratio_point(double rho) {
  detail::require_positive(rho, "r_G/r_C");
  const auto sr = solve_support_radius(rho, 1.0);
  RatioRow row;
  row.rg_over_rc = rho;
  row.y = sr.y;
  row.R_over_rg = sr.R / rho;
  row.log10_i0_gauss = log_i0_gauss_gauss(1.0 / rho) / std::numbers::ln10;
  row.log10_i0_optimal = log_i0_gauss_optimal(sr.y) / std::numbers::ln10;
  row.log10_ratio = row.log10_i0_gauss - row.log10_i0_optimal;
  return row;
}

inline std::vector<RatioRow> ratio_curve(const std::vector<double>& grid) {
  std::vector<RatioRow> out;
  out.reserve(grid.size());
  for (double rho : grid) out.push_back(ratio_point(rho));
  return out;
}

struct PslSearchRow {
  double p = 0.0;
  double value = 0.0;
  double error = 0.0;
};

struct PslSearchResult {
  std::vector<PslSearchRow> rows;
  std::size_t argmin = 0;
};

/// Two-particle PSL functional over sub-Gaussian exponents at fixed scale.
inline PslSearchResult psl_counterexample_search(double m1, double m2, double d, const std::vector<double>& p_grid,
                                                 double scale = 1.0, const numerics::QuadratureSpec& spec = {}) {
  if (p_grid.empty()) throw DomainError("psl_counterexample_search: empty exponent grid");
  PslSearchResult res;
  for (double pe : p_grid) {
    const auto g = pe == 2.0 ? make_gaussian(scale) : make_sub_gaussian(pe, scale);
    const auto v = two_particle_psl(g, m1, m2, d, spec);
    res.rows.push_back({pe, v.value, v.error_estimate});
  }
  for (std::size_t i = 1; i < res.rows.size(); ++i)
    if (res.rows[i].value < res.rows[res.argmin].value) res.argmin = i;
  return res;
}

struct GpslCounterexample {
  double z = 0.0;
  double i_z_aware = 0.0;     ///< I_0 + I(z) for the z-dependent optimum
  double i_z0_optimal = 0.0;  ///< I_0 + I(z) for the isolated-particle optimum
  double R_z = 0.0;
  double R_0 = 0.0;
  double gap() const { return i_z0_optimal - i_z_aware; }
};

namespace detail {

/// Feedback profile Q(r) = (r/R) W(R)/W(r) for a weight W ~ 1/r^2 at the origin.
class WeightedOptimum {
public:
  WeightedOptimum(std::function<double(double)> weight, double r_g, double rel)
      : W_(std::move(weight)), rg_(r_g), rel_(rel) {}

  double residual(double R) const {
    const double wr = W_(R);
    auto f = [&](double r) { return r <= 0.0 ? 0.0 : r * r / W_(r); };
    const double m = numerics::integrate(f, 0.0, R, {rel_, 0.0, 4000}).value;
    return R * R - 2.0 * wr / R * m - 3.0 * rg_ * rg_;
  }

  double solve(double hint_lo, double hint_hi) const {
    auto h = [&](double R) { return residual(R); };
    auto br = numerics::expand_bracket(h, hint_lo, hint_hi, 1e-3 * rg_, 1e3 * rg_, 1.5);
    return numerics::brent(h, {br.first, br.second, 1e-13, 300}).root;
  }

private:
  std::function<double(double)> W_;
  double rg_;
  double rel_;
};

} // namespace detail

/// Isolated plus pair feedback heating at offset z, for the z-aware optimum
/// and for the isolated-particle (z = 0) optimum. Lengths in units of g_C.
inline GpslCounterexample gpsl_counterexample(const RadialProfile& g_c, double r_g, double z, double rel_tol = 1e-11) {
  detail::require_positive(r_g, "r_G");
  if (!(z >= 0.0)) throw DomainError("gpsl_counterexample: z must be non-negative");
  const double s = g_c.scale();
  const auto p = g_c.rescaled(1.0 / s);
  const double rg = r_g / s;
  const double zz = z / s;
  const double inner = rel_tol * 1e-2;
  auto w0 = [&](double r) { return pair_weight(p, 0.0, r, inner); };
  auto wz = [&](double r) { return pair_weight(p, zz, r, inner); };
  auto W = [&](double r) { return w0(r) + wz(r); };

  const double lo = std::sqrt(3.0) * rg * (1.0 - 1e-9);
  const double hi = std::min(std::sqrt(5.0) * rg * (1.0 + 1e-9), p.support() * (1.0 - 1e-12));
  const double R0 = detail::WeightedOptimum(w0, rg, rel_tol * 1e-2).solve(lo, hi);
  const double Rz = detail::WeightedOptimum(W, rg, rel_tol * 1e-2).solve(lo, hi);

  const numerics::QuadratureSpec spec{rel_tol, 0.0, 4000};
  auto tail = [&](double R) {
    // int_R^inf W dr; the pair weight peaks near r = z.
    double value = 0.0;
    const double b = std::max(R, zz);
    if (b > R) value += numerics::integrate(W, R, b, spec).value;
    if (std::isfinite(p.support())) {
      const double end = p.support() + zz;
      if (end > b) value += numerics::integrate(W, b, end, spec).value;
    } else {
      value += numerics::integrate_tail(W, b, 1.0, spec).value;
    }
    return value;
  };
  auto objective = [&](auto&& q, double R) {
    auto f = [&](double r) {
      if (r <= 0.0) return 0.0;
      const double v = q(r);
      return W(r) * v * v;
    };
    const double bp[] = {zz};
    return numerics::integrate(f, 0.0, R, spec, bp).value + tail(R);
  };
  const double wRz = W(Rz);
  const double w0R0 = w0(R0);
  auto q_z = [&](double r) { return r / Rz * wRz / W(r); };
  auto q_0 = [&](double r) { return r / R0 * w0R0 / w0(r); };

  GpslCounterexample out;
  out.z = z;
  out.R_z = Rz * s;
  out.R_0 = R0 * s;
  const double unit = std::pow(s, -4);
  out.i_z_aware = objective(q_z, Rz) * unit;
  out.i_z0_optimal = objective(q_0, R0) * unit;
  return out;
}

struct PerturbationRow {
  double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;  ///< bump supports
  double epsilon = 0.0;
  double delta_i0 = 0.0;       ///< I_0[Q + eps phi] - I_0[Q]
  double predicted = 0.0;      ///< eps^2 int A phi^2, the exact second-order change
  double tolerance = 0.0;      ///< summed quadrature error of the two evaluations
  bool ok = false;
};

/// Random admissible perturbations of the Gaussian-case optimal feedback
/// profile. phi = b1 - c b2 with polynomial bumps vanishing to first order
/// at their ends, c chosen so that int r phi = 0 (variance preserved), and
/// eps small enough that Q + eps phi stays non-decreasing.
inline std::vector<PerturbationRow> optimality_perturbation(double r_c, double r_g, int count, std::uint64_t seed) {
  const auto sol = optimal_feedback_gaussian_case(r_c, r_g);
  const double R = sol.R;
  const auto gc = make_gaussian(r_c);
  const auto& opt = sol.profile;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  auto bump = [](double a, double b, double r) {
    if (r <= a || r >= b) return 0.0;
    const double u = (r - a) * (b - r);
    return u * u;
  };
  auto dbump = [](double a, double b, double r) {
    if (r <= a || r >= b) return 0.0;
    const double u = (r - a) * (b - r);
    return 2.0 * u * (a + b - 2.0 * r);
  };
  auto moment = [&](double a, double b) {
    return numerics::integrate([&](double r) { return r * bump(a, b, r); }, a, b, {1e-14, 0.0}).value;
  };
  const numerics::QuadratureSpec spec{1e-13, 0.0, 8000};
  const double tail = numerics::integrate_tail(
                          [&](double r) { return 2.0 * std::numbers::pi * gc.g(r) / (r * r); }, R, r_c, spec)
                          .value;

  std::vector<PerturbationRow> rows;
  for (int i = 0; i < count; ++i) {
    PerturbationRow row;
    auto draw = [&](double& a, double& b) {
      a = R * (0.03 + 0.6 * uni(rng));
      b = std::min(0.97 * R, a + R * (0.1 + 0.4 * uni(rng)));
    };
    draw(row.a1, row.b1);
    draw(row.a2, row.b2);
    const double c = moment(row.a1, row.b1) / moment(row.a2, row.b2);
    auto phi = [&](double r) { return bump(row.a1, row.b1, r) - c * bump(row.a2, row.b2, r); };
    auto dphi = [&](double r) { return dbump(row.a1, row.b1, r) - c * dbump(row.a2, row.b2, r); };

    double eps = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 4000; ++k) {
      const double r = R * k / 4000.0;
      const double dp = std::abs(dphi(r));
      if (dp > 0.0) eps = std::min(eps, 4.0 * std::numbers::pi * r * r * opt.g(r) / dp);
    }
    eps *= 0.5 * (uni(rng) < 0.5 ? -1.0 : 1.0);
    row.epsilon = eps;

    const double bp[] = {row.a1, row.b1, row.a2, row.b2};
    auto i0_of = [&](auto&& q) {
      auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        const double v = q(r);
        return 2.0 * std::numbers::pi * gc.g(r) * v * v / (r * r);
      };
      return numerics::integrate(f, 0.0, R, spec, bp);
    };
    const auto base = i0_of([&](double r) { return opt.Q(r); });
    const auto pert = i0_of([&](double r) { return opt.Q(r) + eps * phi(r); });
    const auto second = numerics::integrate(
        [&](double r) {
          if (r <= 0.0) return 0.0;
          const double v = phi(r);
          return 2.0 * std::numbers::pi * gc.g(r) * v * v / (r * r);
        },
        0.0, R, spec, bp);
    row.delta_i0 = (pert.value + tail) - (base.value + tail);
    row.predicted = eps * eps * second.value;
    row.tolerance = base.error + pert.error + 1e-14 * (base.value + tail);
    row.ok = row.delta_i0 >= -row.tolerance;
    rows.push_back(row);
  }
  return rows;
}

} // namespace gpsl
