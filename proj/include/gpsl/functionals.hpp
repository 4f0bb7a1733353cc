#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gpsl/errors.hpp"
#include "gpsl/numerics/quadrature.hpp"
#include "gpsl/numerics/root_finding.hpp"
#include "gpsl/numerics/special_functions.hpp"
#include "gpsl/smearing.hpp"

namespace gpsl {

enum class Method { quadrature, closed_form, monte_carlo };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::closed_form: return "closed_form";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

/// A functional value in units of length^length_power.
struct FunctionalResult {
  double value = 0.0;
  Method method = Method::quadrature;
  double error_estimate = 0.0;
  int length_power = 0;
};

namespace detail {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> finite_points(std::initializer_list<double> pts) {
  std::vector<double> out;
  for (double p : pts)
    if (std::isfinite(p) && p > 0.0) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

inline FunctionalResult scaled(numerics::QuadResult q, double scale, int power) {
  const double f = std::pow(scale, power);
  return {q.value * f, Method::quadrature, q.error * f, power};
}

/// 1 / (1 + exp(t)) without overflow.
inline double logistic_complement(double t) {
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

/// g L'^2 = g'^2 / g with zero-density points handled.
inline double fisher_density(const RadialProfile& p, double r) {
  const double v = p.g(r);
  if (v > 0.0) {
    const double l = p.dlog_g(r);
    return v * l * l;
  }
  if (p.dg(r) != 0.0) throw SingularProfile("g'^2/g diverges where the density vanishes");
  return 0.0;
}

inline numerics::QuadratureSpec fine(const numerics::QuadratureSpec& spec) {
  return spec.with_abs(0.0);
}

} // namespace detail

/// I[sqrt g] = (1/2) int |grad sqrt g|^2 = (pi/2) int r^2 g'^2/g dr.  [length^-2]
inline FunctionalResult dirichlet_energy(const RadialProfile& g, const numerics::QuadratureSpec& spec = {}) {
  if (g.edge_jump()) throw SingularProfile("dirichlet_energy: density jumps at the support edge");
  const double s = g.scale();
  const auto p = g.rescaled(1.0 / s);
  auto f = [&](double r) { return 0.5 * detail::kPi * r * r * detail::fisher_density(p, r); };
  auto q = numerics::integrate_radial(f, spec, 1.0, {}, p.support());
  if (!std::isfinite(q.value)) throw SingularProfile("dirichlet_energy: non-integrable integrand");
  return detail::scaled(q, s, -2);
}

/// I_{r_C} = (1/8) int |grad g|^2 = (pi/2) int r^2 g'^2 dr.  [length^-5]
inline FunctionalResult grad_sq_functional(const RadialProfile& g, const numerics::QuadratureSpec& spec = {}) {
  if (g.edge_jump()) throw SingularProfile("grad_sq_functional: density jumps at the support edge");
  const double s = g.scale();
  const auto p = g.rescaled(1.0 / s);
  auto f = [&](double r) {
    const double d = p.dg(r);
    return 0.5 * detail::kPi * r * r * d * d;
  };
  return detail::scaled(numerics::integrate_radial(f, detail::fine(spec), 1.0, {}, p.support()), s, -5);
}

/// I_0^(G) = (1/2) int g_C |grad f_G|^2 = 2 pi int g_C Q_G^2 / r^2 dr.  [length^-4]
inline FunctionalResult grav_functional_i0(const RadialProfile& g_c, const RadialProfile& g_g,
                                           const numerics::QuadratureSpec& spec = {}) {
  const double s = g_c.scale();
  const auto pc = g_c.rescaled(1.0 / s);
  const auto pg = g_g.rescaled(1.0 / s);
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double q = pg.Q(r);
    return 2.0 * detail::kPi * pc.g(r) * q * q / (r * r);
  };
  const auto bp = detail::finite_points({pg.support()});
  return detail::scaled(numerics::integrate_radial(f, detail::fine(spec), 1.0, bp, pc.support()), s, -4);
}

/// I_{r_G} = 2 pi int Q^2 / r^2 dr.  [length^-1]
inline FunctionalResult macro_feedback_functional(const RadialProfile& g_g, const numerics::QuadratureSpec& spec = {}) {
  const double s = g_g.scale();
  const auto p = g_g.rescaled(1.0 / s);
  const double x = std::isfinite(p.support()) ? p.support() : 8.0;
  auto head_f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double q = p.Q(r);
    return q * q / (r * r);
  };
  auto head = numerics::integrate(head_f, 0.0, x, detail::fine(spec));
  // int_x^inf Q^2/r^2 = 1/x - int_x^inf (1 - Q^2)/r^2, with 1 - Q^2 = S(2 - S).
  numerics::QuadResult tail{};
  if (!std::isfinite(p.support())) {
    auto tail_f = [&](double r) {
      const double sv = p.survival(r);
      return sv * (2.0 - sv) / (r * r);
    };
    tail = numerics::integrate_tail(tail_f, x, 1.0, detail::fine(spec));
  }
  const numerics::QuadResult total{2.0 * detail::kPi * (head.value + 1.0 / x - tail.value),
                                   2.0 * detail::kPi * (head.error + tail.error), head.evaluations + tail.evaluations};
  return detail::scaled(total, s, -1);
}

/// Both-Gaussian I_0^(G) in units of r_C^-4, as a function of eta = r_C / r_G.
inline double i0_gauss_gauss_closed(double eta) {
  if (!(eta > 0.0)) throw DomainError("i0_gauss_gauss_closed: eta must be positive");
  // I_0 = F(eta^2)/pi with F(t) = t/s - 2 atan((s-1)/(s+1)), s = sqrt(1 + 2t).
  const double t = eta * eta;
  double f;
  if (t < 0.08) {
    // Taylor coefficients of F(t)/t^3.
    static constexpr std::array<double, 31> c = {
        0.33333333333333331, -1.0, 2.2999999999999998, -4.833333333333333,
        9.7678571428571423, -19.375, 38.076388888888886, -74.487499999999997,
        145.41122159090909, -283.6484375, 553.28635817307691, -1079.6467633928571,
        2107.9942057291669, -4118.7021484375, 8053.3176413143383, -15758.585666232639,
        30859.083423815275, -60473.133685302731, 118588.65451558431, -232707.98307522861,
        456933.22119356238, -897745.93176142371, 1764817.4078855133, -3471192.395941074,
        6830897.9056117358, -13448859.121853454, 26490532.459694225, -52201534.7425908,
        102909059.26005989, -202951721.08519146, 400398364.38313562};
    double sum = 0.0;
    double tp = 1.0;
    for (double ck : c) {
      sum += ck * tp;
      tp *= t;
    }
    f = sum * t * t * t;
  } else {
    const double sq = std::sqrt(1.0 + 2.0 * t);
    f = t / sq - 2.0 * std::atan((sq - 1.0) / (sq + 1.0));
  }
  return f / detail::kPi;
}

inline double log_i0_gauss_gauss(double eta) { return std::log(i0_gauss_gauss_closed(eta)); }

/// log of the Gaussian-collapse / optimal-feedback I_0^(G) in units of r_C^-4,
/// where y = R^2 / (2 r_C^2).
inline double log_i0_gauss_optimal(double y) {
  if (!(y > 0.0)) throw DomainError("i0_gauss_optimal_closed: y must be positive");
  const double sqrtpi = std::sqrt(detail::kPi);
  if (y < 1.0) {
    // Direct split at the support edge: A from the interior, B from the tail.
    const double a = std::sqrt(2.0 * y);
    double term = 1.0;
    double sum = 1.0 / 5.0;
    for (int k = 1; k < 60; ++k) {
      term *= y / k;
      const double add = term / (2.0 * k + 5.0);
      sum += add;
      if (add < 1e-18 * sum) break;
    }
    const double A = std::exp(-2.0 * y) * sum / a;
    const double B = std::exp(-y) / a - std::sqrt(detail::kPi / 2.0) * std::erfc(std::sqrt(y));
    return std::log((A + B) / std::sqrt(2.0 * detail::kPi));
  }
  double inner;
  if (y <= 30.0) {
    const double s = std::sqrt(y);
    inner = -numerics::erfcx(s) + 3.0 * numerics::erfi_scaled(s) / (8.0 * y * y * y) +
            (1.0 / s + 0.5 / (y * s) - 0.75 / (y * y * s)) / sqrtpi;
  } else {
    // sqrt(pi) * inner = sum_{n>=1} c_n y^(-n-1/2)
    double dfact = 1.0;      // (2n-1)!!
    double dfact3 = 1.0;     // (2n-7)!!
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n < 80; ++n) {
      dfact *= 2.0 * n - 1.0;
      double c = -std::pow(-1.0, n) * dfact / std::pow(2.0, n);
      if (n == 1) c += 0.5;
      if (n == 2) c -= 0.75;
      if (n >= 3) {
        if (n >= 4) dfact3 *= 2.0 * n - 7.0;
        c += 0.375 * dfact3 / std::pow(2.0, n - 3);
      }
      const double term = c * std::pow(y, -n - 0.5);
      if (std::abs(term) > prev) break;
      sum += term;
      prev = std::abs(term);
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    inner = sum / sqrtpi;
  }
  return -y + std::log(0.5 * inner);
}

inline double i0_gauss_optimal_closed(double y) { return std::exp(log_i0_gauss_optimal(y)); }

/// Pair weight w_d(r) = (pi/r^2) int_0^pi sin(th) g(sqrt(d^2 + r^2 - 2 d r cos th)) dth.
inline double pair_weight(const RadialProfile& g, double d, double r, double rel_tol = 1e-12) {
  if (r <= 0.0) return std::numeric_limits<double>::infinity();
  // int_{|r-d|}^{r+d} s g(s) ds / (d r) = (1/max(r,d)) int_{-1}^{1} (c + h t) g(c + h t) dt
  const double c = std::max(r, d);
  const double h = std::min(r, d);
  const double supp = g.support();
  if (c - h >= supp) return 0.0;
  if (h == 0.0) return 2.0 * detail::kPi * g.g(c) / (r * r);
  double hi = 1.0;
  if (c + h > supp) hi = (supp - c) / h;
  auto f = [&](double t) {
    const double s = c + h * t;
    return s * g.g(s);
  };
  const auto q = numerics::integrate(f, -1.0, hi, {rel_tol, 0.0, 2000});
  return detail::kPi / (r * r * c) * q.value;
}

/// I^(G)(d) = int_0^inf w_d(r) Q_G(r)^2 dr.  [length^-4]
inline FunctionalResult pair_grav_functional(const RadialProfile& g_c, const RadialProfile& g_g, double d,
                                             const numerics::QuadratureSpec& spec = {}) {
  if (!(d >= 0.0)) throw DomainError("pair_grav_functional: d must be non-negative");
  const double s = g_c.scale();
  const auto pc = g_c.rescaled(1.0 / s);
  const auto pg = g_g.rescaled(1.0 / s);
  const double dd = d / s;
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double q = pg.Q(r);
    return pair_weight(pc, dd, r, spec.rel_tol * 1e-2) * q * q;
  };
  const double sc = pc.support();
  const auto bp = detail::finite_points({dd, pg.support(), dd - sc, dd + sc});
  const double upper = std::isfinite(sc) ? dd + sc : std::numeric_limits<double>::infinity();
  return detail::scaled(numerics::integrate_radial(f, detail::fine(spec), 1.0, bp, upper), s, -4);
}

/// I_N for two delta-localized particles of masses m1, m2 at separation d.  [length^-2]
inline FunctionalResult two_particle_psl(const RadialProfile& g, double m1, double m2, double d,
                                         const numerics::QuadratureSpec& spec = {}) {
  if (!(m1 > 0.0) || !(m2 > 0.0)) throw DomainError("two_particle_psl: masses must be positive");
  if (!(d >= 0.0)) throw DomainError("two_particle_psl: d must be non-negative");
  const double s = g.scale();
  const auto p = g.rescaled(1.0 / s);
  const double dd = d / s;
  const double l21 = std::log(m2 / m1);
  auto f = [&](double r, double th) {
    const double fd = detail::fisher_density(p, r);
    if (fd == 0.0) return 0.0;
    const double rt = std::sqrt(std::max(0.0, r * r + dd * dd + 2.0 * r * dd * std::cos(th)));
    const double dl = p.log_g(rt) - p.log_g(r);
    const double w = dl == -std::numeric_limits<double>::infinity()
                         ? 2.0
                         : detail::logistic_complement(l21 + dl) + detail::logistic_complement(-l21 + dl);
    return 0.25 * detail::kPi * r * r * std::sin(th) * fd * w;
  };
  const auto bp = detail::finite_points({dd, p.support()});
  return detail::scaled(numerics::integrate_polar(f, detail::fine(spec), 1.0, bp, p.support()), s, -2);
}

using Vec3 = std::array<double, 3>;

/// Delta-localized point masses; velocities are optional.
struct PointConfig {
  std::vector<double> masses;
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;

  std::size_t size() const { return masses.size(); }
  double total_mass() const {
    double m = 0.0;
    for (double v : masses) m += v;
    return m;
  }
  void validate() const {
    if (masses.empty()) throw DomainError("PointConfig: at least one particle required");
    if (positions.size() != masses.size()) throw DomainError("PointConfig: masses and positions differ in length");
    if (!velocities.empty() && velocities.size() != masses.size())
      throw DomainError("PointConfig: velocities and masses differ in length");
    for (double m : masses)
      if (!(m > 0.0)) throw DomainError("PointConfig: masses must be positive");
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo heating functionals for a point configuration. Differences
/// use common random numbers, so their errors are those of the pairs.
struct HeatingTriple {
  McEstimate i_n;        ///< I_N
  McEstimate i_com;      ///< I_CoM
  McEstimate n_i;        ///< N I[sqrt g]
  McEstimate i_single;   ///< I[sqrt g], mass-weighted per-particle average
  McEstimate n_minus_com;     ///< I_N - I_CoM
  McEstimate ni_minus_n;      ///< N I - I_N
  McEstimate single_minus_com;///< I - I_CoM
  McEstimate n_minus_single;  ///< I_N - I, the conjectured non-negative gap
  double analytic_single = 0.0;
  std::size_t samples = 0;
  bool analytic = false;
};

namespace detail {

class RadialSampler {
public:
  explicit RadialSampler(const RadialProfile& p) : p_(p) {
    if (p.is_gaussian()) {
      mode_ = Mode::gaussian;
    } else if (p.kind() == ProfileKind::sub_gaussian) {
      mode_ = Mode::sub_gaussian;
      const double pe = p.params().at(0);
      b_ = sub_gaussian_alpha(pe) * p.scale();
      inv_p_ = 1.0 / pe;
      gamma_ = std::gamma_distribution<double>(3.0 * inv_p_, 1.0);
    } else {
      mode_ = Mode::inverse_cdf;
    }
  }

  template <class Rng>
  Vec3 offset(Rng& rng) {
    Vec3 n{normal_(rng), normal_(rng), normal_(rng)};
    if (mode_ == Mode::gaussian) {
      for (auto& c : n) c *= p_.scale();
      return n;
    }
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    double r;
    if (mode_ == Mode::sub_gaussian) {
      r = b_ * std::pow(gamma_(rng), inv_p_);
    } else {
      const double u = uniform_(rng);
      double hi = std::isfinite(p_.support()) ? p_.support() : 4.0 * p_.scale();
      while (!std::isfinite(p_.support()) && p_.Q(hi) < u) hi *= 2.0;
      r = numerics::find_root([&](double x) { return p_.Q(x) - u; }, {0.0, hi, 1e-12, 200});
    }
    for (auto& c : n) c *= r / len;
    return n;
  }

private:
  enum class Mode { gaussian, sub_gaussian, inverse_cdf };
  RadialProfile p_;
  Mode mode_ = Mode::inverse_cdf;
  double b_ = 1.0;
  double inv_p_ = 0.5;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::gamma_distribution<double> gamma_{1.0, 1.0};
};

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
  McEstimate finish(std::size_t n) const {
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
    return {mean, std::sqrt(var / static_cast<double>(n))};
  }
};

} // namespace detail

/// Importance-sampled estimates of I_N, I_CoM and N I[sqrt g] for fixed
/// particle positions. Proposal: the mass-weighted mixture of the smeared
/// densities. One particle gives the analytic triple.  [length^-2]
inline HeatingTriple point_config_heating(const RadialProfile& g, const PointConfig& config, std::size_t mc_samples,
                                          std::uint64_t seed) {
  config.validate();
  const double single = dirichlet_energy(g).value;
  HeatingTriple out;
  out.analytic_single = single;
  const std::size_t n = config.size();
  if (n == 1) {
    out.i_n = out.i_com = out.n_i = out.i_single = {single, 0.0};
    out.analytic = true;
    return out;
  }
  if (mc_samples < 2) throw DomainError("point_config_heating: at least 2 samples required");

  const double s = g.scale();
  const auto p = g.rescaled(1.0 / s);
  const double mtot = config.total_mass();
  std::vector<double> cum(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += config.masses[k] / mtot;
    cum[k] = acc;
  }
  std::vector<Vec3> pos(n);
  for (std::size_t k = 0; k < n; ++k)
    for (int c = 0; c < 3; ++c) pos[k][static_cast<std::size_t>(c)] = config.positions[k][static_cast<std::size_t>(c)] / s;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  detail::RadialSampler sampler(p);
  detail::Accumulator a_n, a_com, a_ni, a_single, d1, d2, d3, d4;
  std::vector<double> gk(n), fk(n);
  std::vector<Vec3> grad(n);

  for (std::size_t i = 0; i < mc_samples; ++i) {
    const double u = pick(rng);
    std::size_t j = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    j = std::min(j, n - 1);
    const Vec3 off = sampler.offset(rng);
    const Vec3 x{pos[j][0] + off[0], pos[j][1] + off[1], pos[j][2] + off[2]};

    double mu = 0.0;
    Vec3 gmu{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
      const Vec3 dx{x[0] - pos[k][0], x[1] - pos[k][1], x[2] - pos[k][2]};
      const double r = std::sqrt(dx[0] * dx[0] + dx[1] * dx[1] + dx[2] * dx[2]);
      gk[k] = p.g(r);
      fk[k] = gk[k] > 0.0 ? detail::fisher_density(p, r) : 0.0;  // |grad g_k|^2 / g_k
      const double dg = p.dg(r);
      for (std::size_t c = 0; c < 3; ++c) grad[k][c] = r > 0.0 ? dg * dx[c] / r : 0.0;
      mu += config.masses[k] * gk[k];
      for (std::size_t c = 0; c < 3; ++c) gmu[c] += config.masses[k] * grad[k][c];
    }
    double e_n = 0.0, e_com = 0.0, e_ni = 0.0, e_single = 0.0;
    if (mu > 0.0) {
      for (std::size_t k = 0; k < n; ++k) {
        const double mk = config.masses[k];
        // m_k |grad g_k|^2 / mu^2 = m_k g_k fk / mu^2
        e_n += mtot * mk * gk[k] * fk[k] / (8.0 * mu * mu);
        e_ni += mtot * fk[k] / (8.0 * mu);
        e_single += mk * fk[k] / (8.0 * mu);
      }
      e_com = (gmu[0] * gmu[0] + gmu[1] * gmu[1] + gmu[2] * gmu[2]) / (8.0 * mu * mu);
    }
    a_n.add(e_n);
    a_com.add(e_com);
    a_ni.add(e_ni);
    a_single.add(e_single);
    d1.add(e_n - e_com);
    d2.add(e_ni - e_n);
    d3.add(e_single - e_com);
    d4.add(e_n - e_single);
  }
  const double f = 1.0 / (s * s);
  auto sc = [&](McEstimate e) { return McEstimate{e.mean * f, e.std_error * f}; };
  out.i_n = sc(a_n.finish(mc_samples));
  out.i_com = sc(a_com.finish(mc_samples));
  out.n_i = sc(a_ni.finish(mc_samples));
  out.i_single = sc(a_single.finish(mc_samples));
  out.n_minus_com = sc(d1.finish(mc_samples));
  out.ni_minus_n = sc(d2.finish(mc_samples));
  out.single_minus_com = sc(d3.finish(mc_samples));
  out.n_minus_single = sc(d4.finish(mc_samples));
  out.samples = mc_samples;
  return out;
}

/// Point-mass Newtonian potential energy -sum_{j<k} G m_j m_k / |x_j - x_k|.
inline double point_potential_energy(const PointConfig& config, double G) {
  config.validate();
  double v = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j)
    for (std::size_t k = j + 1; k < config.size(); ++k) {
      double r2 = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        const double dx = config.positions[k][c] - config.positions[j][c];
        r2 += dx * dx;
      }
      if (r2 == 0.0) throw CoincidentPoints("point_potential_energy: coincident particles");
      v -= G * config.masses[j] * config.masses[k] / std::sqrt(r2);
    }
  return v;
}

/// Work done by the mutual Newtonian forces, sum_j F_j . v_j.  [W]
inline double newtonian_work_flux(const PointConfig& config, double G) {
  config.validate();
  if (config.velocities.size() != config.size())
    throw DomainError("newtonian_work_flux: velocities required for every particle");
  double flux = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j) {
    Vec3 force{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < config.size(); ++k) {
      if (k == j) continue;
      Vec3 dx{};
      double r2 = 0.0;
      for (std::size_t c = 0; c < 3; ++c) {
        dx[c] = config.positions[k][c] - config.positions[j][c];
        r2 += dx[c] * dx[c];
      }
      if (r2 == 0.0) throw CoincidentPoints("newtonian_work_flux: coincident particles");
      const double f = G * config.masses[k] * config.masses[j] / (r2 * std::sqrt(r2));
      for (std::size_t c = 0; c < 3; ++c) force[c] += f * dx[c];
    }
    for (std::size_t c = 0; c < 3; ++c) flux += force[c] * config.velocities[j][c];
  }
  return flux;
}

} // namespace gpsl
