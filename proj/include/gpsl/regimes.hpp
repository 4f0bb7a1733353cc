#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gpsl/errors.hpp"
#include "gpsl/functionals.hpp"
#include "gpsl/smearing.hpp"

namespace gpsl {

enum class SigmaMode { paper, codata };

inline std::string to_string(SigmaMode m) { return m == SigmaMode::paper ? "paper" : "codata"; }

/// SI constants. CODATA 2018 except the Stefan-Boltzmann constant, which
/// defaults to the rounded 5.6e-8 used for the neutron-star table.
struct PhysicalConstants {
  double G = 6.67430e-11;              ///< m^3 kg^-1 s^-2
  double hbar = 1.054571817e-34;       ///< J s
  double m0 = 1.67262192369e-27;       ///< proton mass, kg
  double m_neutron = 1.67492749804e-27;///< kg
  double k_B = 1.380649e-23;           ///< J/K
  double sigma_SB = 5.6e-8;            ///< W m^-2 K^-4
  double M_sun = 1.988e30;             ///< kg
  double c = 299792458.0;              ///< m/s
  double eV = 1.602176634e-19;         ///< J

  static constexpr double kSigmaPaper = 5.6e-8;
  static constexpr double kSigmaCodata = 5.670374419e-8;

  static PhysicalConstants with_sigma(SigmaMode mode) {
    PhysicalConstants k;
    k.sigma_SB = mode == SigmaMode::paper ? kSigmaPaper : kSigmaCodata;
    return k;
  }

  void validate() const {
    for (double v : {G, hbar, m0, m_neutron, k_B, sigma_SB, M_sun, c, eV})
      if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("PhysicalConstants: every constant must be positive");
  }
};

/// Largest smearing length accepted by default; Newton's law is tested down to ~50 um.
inline constexpr double kMaxSmearingLength = 1e-4;

struct ModelParams {
  double lambda = 0.0;  ///< collapse rate, 1/s
  RadialProfile g_C;
  RadialProfile g_G;

  double r_C() const { return g_C.scale(); }
  double r_G() const { return g_G.scale(); }

  void validate(bool enforce_length_cap = true) const {
    detail::require_positive(lambda, "lambda");
    if (enforce_length_cap && (r_C() > kMaxSmearingLength || r_G() > kMaxSmearingLength))
      throw DomainError("ModelParams: r_C and r_G must not exceed 1e-4 m");
  }

  static ModelParams gaussian(double lambda, double r_c, double r_g) {
    return {lambda, make_gaussian(r_c), make_gaussian(r_g)};
  }
};

/// Heating-rate contributions in watts.
struct HeatingTerms {
  double psl = 0.0;   ///< measurement (collapse) channel
  double grav = 0.0;  ///< gravitational feedback channel
  double total() const { return psl + grav; }
};

/// Single isolated particle of mass m.
inline HeatingTerms isolated_particle_rate(const ModelParams& params, double m,
                                           const PhysicalConstants& k = {}) {
  params.validate(false);
  detail::require_positive(m, "particle mass");
  const double i_psl = dirichlet_energy(params.g_C).value;
  const double i0 = grav_functional_i0(params.g_C, params.g_G).value;
  return {params.lambda * k.hbar * k.hbar / k.m0 * i_psl, k.G * k.G * k.m0 / params.lambda * m * m * i0};
}

/// Order-of-magnitude PSL / feedback ratio lambda^2 r_C^2 hbar^2 / (m0^2 G^2 m^2),
/// without functional prefactors.
inline double contributions_ratio(double lambda, double r_c, double m, const PhysicalConstants& k = {}) {
  detail::require_positive(lambda, "lambda");
  detail::require_positive(r_c, "r_C");
  detail::require_positive(m, "particle mass");
  const double a = lambda * r_c * k.hbar / (k.m0 * k.G * m);
  return a * a;
}

/// Macroscopic body of volume V and mass-density-squared integral int mu^2.
inline HeatingTerms macro_body_rate(const ModelParams& params, double volume, double mass_density_sq_integral,
                                    const PhysicalConstants& k = {}) {
  params.validate(false);
  detail::require_positive(volume, "volume");
  if (!(mass_density_sq_integral >= 0.0)) throw DomainError("macro_body_rate: int mu^2 must be non-negative");
  const double i_rc = grad_sq_functional(params.g_C).value;
  const double i_rg = macro_feedback_functional(params.g_G).value;
  return {params.lambda * k.hbar * k.hbar / k.m0 * volume * i_rc,
          k.G * k.G * k.m0 / params.lambda * i_rg * mass_density_sq_integral};
}

/// N I[sqrt g] / (V I_{r_C}) for a body of constant number density n.
inline double collective_attenuation(const RadialProfile& g_c, double number_density) {
  detail::require_positive(number_density, "number density");
  return number_density * dirichlet_energy(g_c).value / grad_sq_functional(g_c).value;
}

struct DarkMatterMass {
  double kg = 0.0;
  double eV = 0.0;  ///< rest energy in eV, i.e. mass in eV/c^2
};

/// Mass at which the mean inter-particle spacing (m/rho)^(1/3) equals d_min.
inline DarkMatterMass dark_matter_min_mass(double rho, double d_min, const PhysicalConstants& k = {}) {
  detail::require_positive(rho, "dark-matter density");
  detail::require_positive(d_min, "spacing");
  const double kg = rho * d_min * d_min * d_min;
  return {kg, kg * k.c * k.c / k.eV};
}

/// Mean spacing n^(-1/3) for a number density n.
inline double mean_spacing(double number_density) {
  detail::require_positive(number_density, "number density");
  return std::cbrt(1.0 / number_density);
}

/// sqrt(2 pi hbar^2 / (m k_B T)).
inline double thermal_de_broglie(double m, double T, const PhysicalConstants& k = {}) {
  detail::require_positive(m, "mass");
  detail::require_positive(T, "temperature");
  return std::sqrt(2.0 * std::numbers::pi * k.hbar * k.hbar / (m * k.k_B * T));
}

/// Random configurations of 2..max_n particles with masses in [1, 10] and
/// coordinates uniform in [-5 scale, 5 scale].
inline std::vector<PointConfig> random_point_configs(std::size_t count, std::size_t max_n, double scale,
                                                     std::uint64_t seed) {
  if (max_n < 2) throw DomainError("random_point_configs: max_n must be at least 2");
  detail::require_positive(scale, "scale");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, max_n);
  std::uniform_real_distribution<double> mass(1.0, 10.0);
  std::uniform_real_distribution<double> coord(-5.0 * scale, 5.0 * scale);
  std::vector<PointConfig> out(count);
  for (auto& c : out) {
    const std::size_t n = size(rng);
    for (std::size_t k = 0; k < n; ++k) {
      c.masses.push_back(mass(rng));
      c.positions.push_back({coord(rng), coord(rng), coord(rng)});
    }
  }
  return out;
}

/// Independent 64-bit stream seed for item `index` of a run seeded with `master`.
inline std::uint64_t derived_seed(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

struct SandwichRow {
  std::size_t index = 0;
  std::size_t particles = 0;
  std::uint64_t seed = 0;
  HeatingTriple triple;
  bool com_le_n = false;       ///< I_CoM <= I_N
  bool n_le_ni = false;        ///< I_N <= N I[sqrt g]
  bool com_le_single = false;  ///< I_CoM <= I[sqrt g]
  bool conjecture = false;     ///< I_N >= I[sqrt g] within the same band
  bool pass() const { return com_le_n && n_le_ni && com_le_single; }
};

struct SandwichReport {
  std::vector<SandwichRow> rows;
  std::size_t passed = 0;
  std::size_t conjecture_holds = 0;
  double sigmas = 3.0;
  bool all_pass() const { return passed == rows.size(); }
};

namespace detail {

/// Non-negativity of a paired difference within `sigmas` standard errors.
/// The floor absorbs pointwise cancellation when one term dominates.
inline bool nonnegative_within(const McEstimate& d, double sigmas, double magnitude) {
  return d.mean + sigmas * d.std_error + 1e-12 * std::abs(magnitude) >= 0.0;
}

} // namespace detail

/// Checks I_CoM <= I_N <= N I[sqrt g] and I_CoM <= I[sqrt g] on each
/// configuration. Each configuration draws from its own seed derived from
/// `seed`, so the table does not depend on `threads`.
inline SandwichReport sandwich_report(const RadialProfile& g, const std::vector<PointConfig>& configs,
                                      std::size_t mc_samples, std::uint64_t seed, unsigned threads = 0,
                                      double sigmas = 3.0) {
  for (const auto& c : configs) c.validate();
  SandwichReport rep;
  rep.sigmas = sigmas;
  rep.rows.resize(configs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(configs.size(), 1)));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](unsigned t) {
    try {
      for (std::size_t i = next++; i < configs.size(); i = next++) {
        auto& row = rep.rows[i];
        row.index = i;
        row.particles = configs[i].size();
        row.seed = derived_seed(seed, i);
        row.triple = point_config_heating(g, configs[i], mc_samples, row.seed);
        const auto& h = row.triple;
        if (h.analytic) {
          row.com_le_n = row.n_le_ni = row.com_le_single = row.conjecture = true;
          continue;
        }
        row.com_le_n = detail::nonnegative_within(h.n_minus_com, sigmas, h.i_n.mean);
        row.n_le_ni = detail::nonnegative_within(h.ni_minus_n, sigmas, h.n_i.mean);
        row.com_le_single = detail::nonnegative_within(h.single_minus_com, sigmas, h.i_single.mean);
        row.conjecture = detail::nonnegative_within(h.n_minus_single, sigmas, h.i_n.mean);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work, t);
  work(0);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& row : rep.rows) {
    rep.passed += row.pass() ? 1 : 0;
    rep.conjecture_holds += row.conjecture ? 1 : 0;
  }
  return rep;
}

} // namespace gpsl
