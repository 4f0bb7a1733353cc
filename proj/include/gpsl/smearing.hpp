#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// Boost 1.74's pchip header calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gpsl/errors.hpp"
#include "gpsl/numerics/quadrature.hpp"
#include "gpsl/numerics/special_functions.hpp"

namespace gpsl {

enum class ProfileKind { gaussian, sub_gaussian, compact_quartic, optimal_feedback, uniform_ball, tabulated };

inline const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::gaussian: return "gaussian";
    case ProfileKind::sub_gaussian: return "sub_gaussian";
    case ProfileKind::compact_quartic: return "compact_quartic";
    case ProfileKind::optimal_feedback: return "optimal_feedback";
    case ProfileKind::uniform_ball: return "uniform_ball";
    case ProfileKind::tabulated: return "tabulated";
  }
  return "unknown";
}

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFourPi = 4.0 * std::numbers::pi;

/// Radial density model. Implementations are immutable.
class ProfileModel {
public:
  virtual ~ProfileModel() = default;

  virtual double g(double r) const = 0;
  virtual double log_g(double r) const {
    const double v = g(r);
    return v > 0.0 ? std::log(v) : -kInf;
  }
  /// d(log g)/dr, meaningful where g > 0.
  virtual double dlog_g(double r) const = 0;
  virtual double dg(double r) const {
    const double v = g(r);
    return v > 0.0 ? v * dlog_g(r) : 0.0;
  }
  /// Enclosed fraction 4 pi int_0^r mu^2 g.
  virtual double Q(double r) const = 0;
  /// 1 - Q(r), accurate where Q is close to one.
  virtual double survival(double r) const { return 1.0 - Q(r); }
  /// 4 pi int_r^inf mu g(mu) dmu.
  virtual double tail_moment(double r) const = 0;
  virtual double support() const { return kInf; }
  /// True when g jumps to zero at the support edge.
  virtual bool edge_jump() const { return false; }
  virtual std::shared_ptr<const ProfileModel> rescaled(double factor) const = 0;
};

} // namespace detail

/// Normalized radial probability density with variance scale
/// 4 pi int r^4 g = 3 scale^2. Cheap to copy; the model is shared.
class RadialProfile {
public:
  RadialProfile(ProfileKind kind, double scale, std::vector<double> params,
                std::shared_ptr<const detail::ProfileModel> model, std::string label)
      : kind_(kind), scale_(scale), params_(std::move(params)), model_(std::move(model)), label_(std::move(label)) {}

  ProfileKind kind() const { return kind_; }
  double scale() const { return scale_; }
  const std::vector<double>& params() const { return params_; }
  const std::string& label() const { return label_; }
  std::optional<double> support_radius() const {
    const double s = model_->support();
    return std::isfinite(s) ? std::optional<double>(s) : std::nullopt;
  }
  /// Support edge or +inf.
  double support() const { return model_->support(); }
  bool edge_jump() const { return model_->edge_jump(); }
  bool is_gaussian() const {
    return kind_ == ProfileKind::gaussian || (kind_ == ProfileKind::sub_gaussian && params_.at(0) == 2.0);
  }

  double g(double r) const { return model_->g(r); }
  double log_g(double r) const { return model_->log_g(r); }
  double dlog_g(double r) const { return model_->dlog_g(r); }
  double dg(double r) const { return model_->dg(r); }
  double Q(double r) const { return r <= 0.0 ? 0.0 : model_->Q(r); }
  double survival(double r) const { return r <= 0.0 ? 1.0 : model_->survival(r); }
  double tail_moment(double r) const { return model_->tail_moment(std::max(r, 0.0)); }

  /// Potential of the smeared unit mass, int g(y)/|x - y| d^3y.
  double f_pot(double r) const {
    if (r <= 0.0) return tail_moment(0.0);
    return Q(r) / r + tail_moment(r);
  }
  double f_pot_grad(double r) const { return r <= 0.0 ? 0.0 : -Q(r) / (r * r); }

  /// Same shape with every length multiplied by `factor`.
  RadialProfile rescaled(double factor) const {
    if (!(factor > 0.0)) throw DomainError("rescaled: factor must be positive");
    return {kind_, scale_ * factor, params_, model_->rescaled(factor), label_};
  }

  const std::shared_ptr<const detail::ProfileModel>& model() const { return model_; }

private:
  ProfileKind kind_;
  double scale_;
  std::vector<double> params_;
  std::shared_ptr<const detail::ProfileModel> model_;
  std::string label_;
};

/// Cumulative mass and potential of a profile.
struct ProfileDerived {
  std::function<double(double)> Q;
  std::function<double(double)> f_pot;
  std::function<double(double)> f_pot_grad;
};

inline ProfileDerived derive(const RadialProfile& p) {
  return {[p](double r) { return p.Q(r); }, [p](double r) { return p.f_pot(r); },
          [p](double r) { return p.f_pot_grad(r); }};
}

namespace detail {

class GaussianModel final : public ProfileModel {
public:
  explicit GaussianModel(double sigma) : s_(sigma), norm_(std::pow(2.0 * std::numbers::pi * sigma * sigma, -1.5)) {}

  double g(double r) const override { return norm_ * std::exp(-0.5 * r * r / (s_ * s_)); }
  double log_g(double r) const override { return std::log(norm_) - 0.5 * r * r / (s_ * s_); }
  double dlog_g(double r) const override { return -r / (s_ * s_); }
  double Q(double r) const override {
    const double x = r / s_;
    if (x < 1.0) {
      // sqrt(2/pi) sum_n (-1/2)^n x^(2n+3) / (n! (2n+3))
      double term = x * x * x;
      double sum = term / 3.0;
      for (int n = 1; n < 40; ++n) {
        term *= -0.5 * x * x / n;
        const double add = term / (2.0 * n + 3.0);
        sum += add;
        if (std::abs(add) < 1e-18 * sum) break;
      }
      return std::sqrt(2.0 / std::numbers::pi) * sum;
    }
    return std::erf(x / std::numbers::sqrt2) - std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-0.5 * x * x);
  }
  double survival(double r) const override {
    const double x = r / s_;
    if (x < 1.0) return 1.0 - Q(r);
    return std::erfc(x / std::numbers::sqrt2) + std::sqrt(2.0 / std::numbers::pi) * x * std::exp(-0.5 * x * x);
  }
  double tail_moment(double r) const override {
    const double x = r / s_;
    return std::sqrt(2.0 / std::numbers::pi) / s_ * std::exp(-0.5 * x * x);
  }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    return std::make_shared<GaussianModel>(s_ * f);
  }

private:
  double s_;
  double norm_;
};

class SubGaussianModel final : public ProfileModel {
public:
  SubGaussianModel(double p, double b) : p_(p), b_(b) {
    c_ = p / (kFourPi * std::tgamma(3.0 / p) * b * b * b);
  }
  double g(double r) const override { return c_ * std::exp(-std::pow(r / b_, p_)); }
  double log_g(double r) const override { return std::log(c_) - std::pow(r / b_, p_); }
  double dlog_g(double r) const override {
    if (r <= 0.0) return p_ > 1.0 ? 0.0 : (p_ == 1.0 ? -1.0 / b_ : -kInf);
    return -p_ / r * std::pow(r / b_, p_);
  }
  double Q(double r) const override { return boost::math::gamma_p(3.0 / p_, std::pow(r / b_, p_)); }
  double survival(double r) const override { return boost::math::gamma_q(3.0 / p_, std::pow(r / b_, p_)); }
  double tail_moment(double r) const override {
    return kFourPi * c_ * b_ * b_ / p_ * boost::math::tgamma(2.0 / p_, std::pow(r / b_, p_));
  }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    return std::make_shared<SubGaussianModel>(p_, b_ * f);
  }

private:
  double p_;
  double b_;
  double c_;
};

class QuarticModel final : public ProfileModel {
public:
  explicit QuarticModel(double a) : a_(a), c_(105.0 / (32.0 * std::numbers::pi * std::pow(a, 7))) {}

  double g(double r) const override {
    if (r >= a_) return 0.0;
    const double u = a_ * a_ - r * r;
    return c_ * u * u;
  }
  double log_g(double r) const override {
    if (r >= a_) return -kInf;
    return std::log(c_) + 2.0 * std::log(a_ * a_ - r * r);
  }
  double dlog_g(double r) const override {
    if (r >= a_) return 0.0;
    return -4.0 * r / (a_ * a_ - r * r);
  }
  double dg(double r) const override { return r >= a_ ? 0.0 : -4.0 * c_ * r * (a_ * a_ - r * r); }
  double Q(double r) const override {
    if (r >= a_) return 1.0;
    const double a2 = a_ * a_;
    const double r2 = r * r;
    return kFourPi * c_ * r2 * r * (a2 * a2 / 3.0 - 0.4 * a2 * r2 + r2 * r2 / 7.0);
  }
  double tail_moment(double r) const override {
    if (r >= a_) return 0.0;
    const double u = a_ * a_ - r * r;
    return kFourPi * c_ * u * u * u / 6.0;
  }
  double support() const override { return a_; }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    return std::make_shared<QuarticModel>(a_ * f);
  }

private:
  double a_;
  double c_;
};

class BallModel final : public ProfileModel {
public:
  explicit BallModel(double radius) : R_(radius), g0_(3.0 / (kFourPi * radius * radius * radius)) {}
  double g(double r) const override { return r <= R_ ? g0_ : 0.0; }
  double dlog_g(double) const override { return 0.0; }
  double dg(double) const override { return 0.0; }
  double Q(double r) const override { return r >= R_ ? 1.0 : std::pow(r / R_, 3); }
  double tail_moment(double r) const override {
    if (r >= R_) return 0.0;
    return 1.5 * (R_ * R_ - r * r) / (R_ * R_ * R_);
  }
  double support() const override { return R_; }
  bool edge_jump() const override { return true; }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    return std::make_shared<BallModel>(R_ * f);
  }

private:
  double R_;
  double g0_;
};

/// Knot table with monotone cubic (PCHIP) interpolation, zero beyond the
/// last knot and constant below the first.
class TabulatedModel final : public ProfileModel {
public:
  TabulatedModel(std::vector<double> knots, std::vector<double> values)
      : r_(std::move(knots)), g_(std::move(values)) {
    interp_ = std::make_shared<const Pchip>(std::vector<double>(r_), std::vector<double>(g_));
    const numerics::QuadratureSpec spec{1e-12, 0.0, 4000};
    cum_q_.assign(r_.size(), 0.0);
    cum_q_[0] = kFourPi * g_[0] * r_[0] * r_[0] * r_[0] / 3.0;
    for (std::size_t i = 1; i < r_.size(); ++i)
      cum_q_[i] = cum_q_[i - 1] +
                  numerics::integrate([&](double x) { return kFourPi * x * x * g(x); }, r_[i - 1], r_[i], spec).value;
    cum_t_.assign(r_.size(), 0.0);
    for (std::size_t i = r_.size() - 1; i-- > 0;)
      cum_t_[i] = cum_t_[i + 1] +
                  numerics::integrate([&](double x) { return kFourPi * x * g(x); }, r_[i], r_[i + 1], spec).value;
  }

  double g(double r) const override {
    if (r > r_.back()) return 0.0;
    if (r <= r_.front()) return g_.front();
    return std::max(0.0, (*interp_)(r));
  }
  double dg(double r) const override {
    if (r >= r_.back() || r <= r_.front()) return 0.0;
    return interp_->prime(r);
  }
  double dlog_g(double r) const override {
    const double v = g(r);
    return v > 0.0 ? dg(r) / v : 0.0;
  }
  double Q(double r) const override {
    if (r >= r_.back()) return cum_q_.back();
    if (r <= r_.front()) return kFourPi * g_.front() * r * r * r / 3.0;
    const std::size_t i = segment(r);
    const numerics::QuadratureSpec spec{1e-12, 0.0, 4000};
    return cum_q_[i] + numerics::integrate([&](double x) { return kFourPi * x * x * g(x); }, r_[i], r, spec).value;
  }
  double tail_moment(double r) const override {
    if (r >= r_.back()) return 0.0;
    if (r <= r_.front()) return cum_t_.front() + 2.0 * std::numbers::pi * g_.front() * (r_.front() * r_.front() - r * r);
    const std::size_t i = segment(r);
    const numerics::QuadratureSpec spec{1e-12, 0.0, 4000};
    return cum_t_[i + 1] + numerics::integrate([&](double x) { return kFourPi * x * g(x); }, r, r_[i + 1], spec).value;
  }
  double support() const override { return r_.back(); }
  bool edge_jump() const override { return g_.back() > 0.0; }
  std::shared_ptr<const ProfileModel> rescaled(double f) const override {
    std::vector<double> knots = r_;
    std::vector<double> values = g_;
    for (auto& x : knots) x *= f;
    for (auto& y : values) y /= f * f * f;
    return std::make_shared<TabulatedModel>(std::move(knots), std::move(values));
  }

private:
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

  std::size_t segment(double r) const {
    auto it = std::upper_bound(r_.begin(), r_.end(), r);
    return static_cast<std::size_t>(std::distance(r_.begin(), it)) - 1;
  }

  std::vector<double> r_;
  std::vector<double> g_;
  std::shared_ptr<const Pchip> interp_;
  std::vector<double> cum_q_;
  std::vector<double> cum_t_;
};

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be positive and finite");
}

inline std::string format_param(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

} // namespace detail

/// (2 pi s^2)^(-3/2) exp(-r^2 / 2 s^2).
inline RadialProfile make_gaussian(double scale) {
  detail::require_positive(scale, "gaussian scale");
  return {ProfileKind::gaussian, scale, {}, std::make_shared<detail::GaussianModel>(scale),
          "gaussian:" + detail::format_param(scale)};
}

/// alpha_p = sqrt(3 Gamma(3/p) / Gamma(5/p)), the stretch making the variance 3 scale^2.
inline double sub_gaussian_alpha(double p) {
  detail::require_positive(p, "sub-gaussian exponent");
  return std::sqrt(3.0 * std::tgamma(3.0 / p) / std::tgamma(5.0 / p));
}

/// C_p exp(-(r / alpha_p scale)^p).
inline RadialProfile make_sub_gaussian(double p, double scale) {
  detail::require_positive(p, "sub-gaussian exponent");
  detail::require_positive(scale, "sub-gaussian scale");
  return {ProfileKind::sub_gaussian, scale, {p},
          std::make_shared<detail::SubGaussianModel>(p, sub_gaussian_alpha(p) * scale),
          "subgauss:" + detail::format_param(p) + ":" + detail::format_param(scale)};
}

/// c [(3 scale)^2 - r^2]_+^2 with support 3 scale.
inline RadialProfile make_compact_quartic(double scale) {
  detail::require_positive(scale, "quartic scale");
  return {ProfileKind::compact_quartic, scale, {}, std::make_shared<detail::QuarticModel>(3.0 * scale),
          "quartic:" + detail::format_param(scale)};
}

/// Uniform ball of radius sqrt(5) scale.
inline RadialProfile make_uniform_ball(double scale) {
  detail::require_positive(scale, "ball scale");
  return {ProfileKind::uniform_ball, scale, {}, std::make_shared<detail::BallModel>(std::sqrt(5.0) * scale),
          "ball:" + detail::format_param(scale)};
}

/// Profile from (r, g) knots. The table is renormalized to unit mass and
/// its scale is read off the variance.
inline RadialProfile make_tabulated(std::vector<double> r, std::vector<double> g, std::string label = "table") {
  if (r.size() != g.size()) throw ParseError("tabulated profile: column lengths differ");
  if (r.size() < 4) throw ParseError("tabulated profile: at least 4 knots required");
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(g[i])) throw ParseError("tabulated profile: non-finite entry");
    if (r[i] < 0.0 || g[i] < 0.0) throw DomainError("tabulated profile: negative radius or density");
    if (i > 0 && !(r[i] > r[i - 1])) throw ParseError("tabulated profile: radii must be strictly increasing");
  }
  auto raw = std::make_shared<detail::TabulatedModel>(r, g);
  const double mass = raw->Q(r.back());
  if (!(mass > 0.0)) throw DomainError("tabulated profile: zero total mass");
  for (auto& v : g) v /= mass;
  auto model = std::make_shared<detail::TabulatedModel>(std::move(r), std::move(g));
  const double m4 = numerics::integrate([&](double x) { return detail::kFourPi * x * x * x * x * model->g(x); },
                                        0.0, model->support(), {1e-12, 0.0, 4000})
                        .value;
  return {ProfileKind::tabulated, std::sqrt(m4 / 3.0), {}, model, std::move(label)};
}

/// 4 pi int r^2 g.
inline double normalization(const RadialProfile& p, const numerics::QuadratureSpec& spec = {}) {
  const auto q = p.rescaled(1.0 / p.scale());
  auto f = [&](double r) { return detail::kFourPi * r * r * q.g(r); };
  return numerics::integrate_radial(f, spec, 1.0, {}, q.support())
      .value;
}

/// Variance moment 4 pi int r^4 g, equal to 3 scale^2 for a valid profile.
inline double second_moment(const RadialProfile& p, const numerics::QuadratureSpec& spec = {}) {
  const double s = p.scale();
  const auto q = p.rescaled(1.0 / s);
  auto f = [&](double r) { return detail::kFourPi * r * r * r * r * q.g(r); };
  return s * s * numerics::integrate_radial(f, spec, 1.0, {}, q.support()).value;
}

} // namespace gpsl
