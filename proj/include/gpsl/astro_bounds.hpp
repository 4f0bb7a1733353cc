#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpsl/errors.hpp"
#include "gpsl/functionals.hpp"
#include "gpsl/numerics/quadrature.hpp"
#include "gpsl/regimes.hpp"
#include "gpsl/smearing.hpp"

namespace gpsl {

struct NeutronStar {
  std::string name;
  double radius = 0.0;       ///< L, m
  double mass = 0.0;         ///< M_N, kg
  double temperature = 0.0;  ///< K
  std::optional<double> radiation_power_override;  ///< W

  void validate() const {
    detail::require_positive(radius, "star radius");
    detail::require_positive(mass, "star mass");
    detail::require_positive(temperature, "star temperature");
    if (radiation_power_override && !(*radiation_power_override >= 0.0))
      throw DomainError("NeutronStar: radiation power override must be non-negative");
  }
};

/// The two catalogued stars: PSR J1840-1419 and the colder PSR J2144-3933.
inline std::vector<NeutronStar> builtin_stars(const PhysicalConstants& k = {}) {
  return {{"PSR J1840-1419", 1.0e4, 1.0 * k.M_sun, 2.8e5, std::nullopt},
          {"PSR J2144-3933", 1.3e4, 1.4 * k.M_sun, 4.2e4, std::nullopt}};
}

/// 4 pi L^2 sigma T^4, or the override when set.
inline double radiated_power(const NeutronStar& star, const PhysicalConstants& k = {}) {
  star.validate();
  if (star.radiation_power_override) return *star.radiation_power_override;
  const double t2 = star.temperature * star.temperature;
  return 4.0 * std::numbers::pi * star.radius * star.radius * k.sigma_SB * t2 * t2;
}

enum class DensityKind { uniform, tolman_vii };

inline std::string to_string(DensityKind d) { return d == DensityKind::uniform ? "uniform" : "tolman_vii"; }

/// Spherically symmetric star density of total mass M inside radius L.
struct DensityProfile {
  DensityKind kind = DensityKind::uniform;
  double mass = 0.0;
  double radius = 0.0;

  double mean_density() const { return mass / (4.0 / 3.0 * std::numbers::pi * radius * radius * radius); }

  /// mu(r); Tolman VII is (5/2) mean (1 - r^2/L^2).
  double density(double r) const {
    if (r > radius) return 0.0;
    if (kind == DensityKind::uniform) return mean_density();
    const double x = r / radius;
    return 2.5 * mean_density() * (1.0 - x * x);
  }

  void validate() const {
    detail::require_positive(mass, "density-profile mass");
    detail::require_positive(radius, "density-profile radius");
  }
};

/// int mu^2 d^3x by radial quadrature; uniform gives M^2/V, Tolman VII (10/7) M^2/V.
inline double density_sq_integral(const DensityProfile& p) {
  p.validate();
  auto f = [&](double r) {
    const double mu = p.density(r);
    return 4.0 * std::numbers::pi * r * r * mu * mu;
  };
  return numerics::integrate(f, 0.0, p.radius, {1e-13, 0.0, 200}).value;
}

/// Smearing families feeding the bound coefficients.
enum class BoundProfiles { optimal, gaussian };

inline std::string to_string(BoundProfiles b) { return b == BoundProfiles::optimal ? "optimal" : "gaussian"; }

/// Dimensionless prefactors of the quadratic heating inequality
///   a_coeff (hbar^2/m0)(L^3/r_C^5) lambda^2 - P lambda + c_coeff G^2 m0 M^2/(L^3 r_G) <= 0
/// and of its one-term approximations
///   lambda_+ ~ upper m0 sigma T^4 r_C^5 / (hbar^2 L),  lambda_- ~ lower G^2 m0 M^2 / (sigma T^4 L^5 r_G).
struct BoundCoefficients {
  double a_coeff = 0.0;
  double c_coeff = 0.0;
  double upper = 0.0;
  double lower = 0.0;
  bool strict = false;

  /// From the macroscopic functionals: a = (4 pi/3) r_C^5 I_{r_C}, c = (3/4 pi) r_G I_{r_G}.
  static BoundCoefficients computed(BoundProfiles profiles = BoundProfiles::optimal) {
    const auto g_c = profiles == BoundProfiles::optimal ? make_compact_quartic(1.0) : make_gaussian(1.0);
    const auto g_g = profiles == BoundProfiles::optimal ? make_uniform_ball(1.0) : make_gaussian(1.0);
    BoundCoefficients b;
    b.a_coeff = 4.0 * std::numbers::pi / 3.0 * grad_sq_functional(g_c).value;
    b.c_coeff = 3.0 / (4.0 * std::numbers::pi) * macro_feedback_functional(g_g).value;
    b.upper = 4.0 * std::numbers::pi / b.a_coeff;
    b.lower = b.c_coeff / (4.0 * std::numbers::pi);
    return b;
  }

  /// The rounded published constants 0.012, 0.80, 1047.2 and 0.064.
  static BoundCoefficients strict_reproduction() { return {0.012, 0.80, 1047.2, 0.064, true}; }
};

struct BoundsOptions {
  BoundProfiles profiles = BoundProfiles::optimal;
  DensityKind density = DensityKind::uniform;
  bool strict = false;

  BoundCoefficients coefficients() const {
    return strict ? BoundCoefficients::strict_reproduction() : BoundCoefficients::computed(profiles);
  }
};

/// Allowed collapse-rate interval [lambda_-, lambda_+] at fixed (r_C, r_G).
struct LambdaBounds {
  double a = 0.0;  ///< coefficient of lambda^2, J s
  double P = 0.0;  ///< radiated power, W
  double c = 0.0;  ///< constant term, J / s^2
  double discriminant = 0.0;
  bool excluded = false;  ///< no lambda satisfies the inequality
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  double approx_minus = 0.0;
  double approx_plus = 0.0;

  /// Relative residual of a lambda^2 - P lambda + c at a root.
  double residual(double lambda) const {
    const double scale = std::max({a * lambda * lambda, P * lambda, c});
    return (a * lambda * lambda - P * lambda + c) / scale;
  }
};

/// Roots of a x^2 - P x + c, computed without cancellation.
inline LambdaBounds solve_heating_quadratic(double a, double P, double c) {
  LambdaBounds b;
  b.a = a;
  b.P = P;
  b.c = c;
  b.discriminant = P * P - 4.0 * a * c;
  if (!(b.discriminant >= 0.0) || !(P > 0.0)) {
    b.excluded = true;
    b.lambda_minus = std::numeric_limits<double>::infinity();
    b.lambda_plus = -std::numeric_limits<double>::infinity();
    return b;
  }
  const double q = P + std::sqrt(b.discriminant);
  b.lambda_plus = q / (2.0 * a);
  b.lambda_minus = 2.0 * c / q;
  return b;
}

/// int mu^2 relative to the uniform star of the same mass and radius.
inline double density_enhancement(DensityKind kind, double mass, double radius) {
  if (kind == DensityKind::uniform) return 1.0;
  const DensityProfile d{kind, mass, radius};
  return density_sq_integral(d) / (mass * d.mean_density());
}

/// Exact and one-term bounds for one star at (r_C, r_G) with given prefactors.
inline LambdaBounds lambda_bounds(const NeutronStar& star, double r_c, double r_g, const BoundCoefficients& co,
                                  DensityKind density = DensityKind::uniform, const PhysicalConstants& k = {}) {
  star.validate();
  detail::require_positive(r_c, "r_C");
  detail::require_positive(r_g, "r_G");
  const double L = star.radius;
  const double L3 = L * L * L;
  const double M2 = star.mass * star.mass;
  const double enh = density_enhancement(density, star.mass, L);
  const double a = co.a_coeff * k.hbar * k.hbar / k.m0 * L3 / std::pow(r_c, 5);
  const double c = co.c_coeff * enh * k.G * k.G * k.m0 * M2 / (L3 * r_g);
  auto b = solve_heating_quadratic(a, radiated_power(star, k), c);
  const double t2 = star.temperature * star.temperature;
  const double st4 = k.sigma_SB * t2 * t2;
  b.approx_plus = co.upper * k.m0 * st4 * std::pow(r_c, 5) / (k.hbar * k.hbar * L);
  b.approx_minus = co.lower * enh * k.G * k.G * k.m0 * M2 / (st4 * L3 * L * L * r_g);
  return b;
}

inline LambdaBounds lambda_bounds(const NeutronStar& star, double r_c, double r_g, const BoundsOptions& opt = {},
                                  const PhysicalConstants& k = {}) {
  return lambda_bounds(star, r_c, r_g, opt.coefficients(), opt.density, k);
}

enum class GridAxis { r_C, r_G };

inline std::string to_string(GridAxis a) { return a == GridAxis::r_C ? "r_C" : "r_G"; }

struct ExclusionRow {
  double length = 0.0;  ///< the swept length, m
  LambdaBounds bounds;
};

struct ExclusionGrid {
  GridAxis axis = GridAxis::r_C;
  double fixed_length = 0.0;
  std::string star;
  std::vector<ExclusionRow> rows;
};

/// Bounds along one length axis with the other held fixed.
inline ExclusionGrid exclusion_grid(const NeutronStar& star, GridAxis axis, const std::vector<double>& grid,
                                    double fixed_length, const BoundsOptions& opt = {},
                                    const PhysicalConstants& k = {}) {
  auto in_range = [](double v) { return v > 0.0 && v <= kMaxSmearingLength * (1.0 + 1e-12); };
  if (!in_range(fixed_length)) throw DomainError("exclusion_grid: fixed length must lie in (0, 1e-4 m]");
  for (double v : grid)
    if (!in_range(v)) throw DomainError("exclusion_grid: grid points must lie in (0, 1e-4 m]");
  ExclusionGrid out;
  out.axis = axis;
  out.fixed_length = fixed_length;
  out.star = star.name;
  const auto co = opt.coefficients();
  for (double v : grid) {
    const double rc = axis == GridAxis::r_C ? v : fixed_length;
    const double rg = axis == GridAxis::r_G ? v : fixed_length;
    out.rows.push_back({v, lambda_bounds(star, rc, rg, co, opt.density, k)});
  }
  return out;
}

/// One point of an externally sourced upper-bound curve.
struct OverlayPoint {
  double r_c = 0.0;
  double lambda_upper = 0.0;
  std::string label;
};

/// Reads "r_C_m, lambda_upper_hz, label" rows; '#' starts a comment and a
/// non-numeric first row is taken as a header.
inline std::vector<OverlayPoint> parse_overlay(std::istream& in) {
  std::vector<OverlayPoint> pts;
  std::string line;
  std::size_t lineno = 0;
  bool seen_data = false;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(trim(cell));
    const std::string where = "overlay line " + std::to_string(lineno);
    if (cols.size() != 3) throw MalformedOverlay(where + ": expected 3 columns, got " + std::to_string(cols.size()));
    double rc = 0.0;
    double up = 0.0;
    try {
      std::size_t used = 0;
      rc = std::stod(cols[0], &used);
      if (used != cols[0].size()) throw std::invalid_argument("trailing characters");
      up = std::stod(cols[1], &used);
      if (used != cols[1].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      if (!seen_data && pts.empty()) {
        seen_data = true;  // header row
        continue;
      }
      throw MalformedOverlay(where + ": non-numeric value");
    }
    seen_data = true;
    if (!(rc > 0.0) || !(up > 0.0) || !std::isfinite(rc) || !std::isfinite(up))
      throw MalformedOverlay(where + ": r_C and lambda_upper must be positive");
    if (cols[2].empty()) throw MalformedOverlay(where + ": empty source label");
    pts.push_back({rc, up, cols[2]});
  }
  return pts;
}

inline std::vector<OverlayPoint> load_overlay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedOverlay("cannot open overlay file " + path);
  return parse_overlay(in);
}

struct MergedRow {
  double r_c = 0.0;
  double internal_upper = 0.0;
  double merged_upper = 0.0;
  std::string source;         ///< curve providing merged_upper
  double lambda_minus = 0.0;  ///< internal lower bound at the grid's fixed r_G
};

/// Pointwise minimum of the internal lambda_+ and each overlay curve,
/// interpolated log-log inside its own r_C range.
inline std::vector<MergedRow> merge_external_bounds(const ExclusionGrid& grid, const std::vector<OverlayPoint>& overlay) {
  if (grid.axis != GridAxis::r_C) throw DomainError("merge_external_bounds: grid must sweep r_C");
  std::map<std::string, std::vector<OverlayPoint>> curves;
  for (const auto& p : overlay) curves[p.label].push_back(p);
  for (auto& [label, pts] : curves) {
    std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.r_c < y.r_c; });
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].r_c == pts[i - 1].r_c) throw MalformedOverlay("overlay curve " + label + ": duplicate r_C");
  }
  auto at = [](const std::vector<OverlayPoint>& pts, double rc) -> std::optional<double> {
    if (rc < pts.front().r_c || rc > pts.back().r_c) return std::nullopt;
    if (pts.size() == 1) return pts.front().lambda_upper;
    auto hi = std::lower_bound(pts.begin(), pts.end(), rc, [](const auto& p, double v) { return p.r_c < v; });
    if (hi == pts.begin()) return hi->lambda_upper;
    auto lo = hi - 1;
    if (hi->r_c == rc) return hi->lambda_upper;
    const double t = std::log(rc / lo->r_c) / std::log(hi->r_c / lo->r_c);
    return std::exp(std::log(lo->lambda_upper) + t * std::log(hi->lambda_upper / lo->lambda_upper));
  };
  std::vector<MergedRow> out;
  for (const auto& row : grid.rows) {
    MergedRow m{row.length, row.bounds.lambda_plus, row.bounds.lambda_plus, "internal", row.bounds.lambda_minus};
    for (const auto& [label, pts] : curves) {
      const auto v = at(pts, row.length);
      if (v && *v < m.merged_upper) {
        m.merged_upper = *v;
        m.source = label;
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

} // namespace gpsl
