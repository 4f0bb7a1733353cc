#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "gpsl/astro_bounds.hpp"
#include "gpsl/errors.hpp"
#include "gpsl/regimes.hpp"
#include "json.hpp"

namespace gpsl::io {

inline nlohmann::ordered_json constants_json(const PhysicalConstants& k) {
  return {{"G", k.G},         {"hbar", k.hbar},         {"m0", k.m0}, {"m_neutron", k.m_neutron},
          {"k_B", k.k_B},     {"sigma_SB", k.sigma_SB}, {"M_sun", k.M_sun}, {"c", k.c}, {"eV", k.eV}};
}

/// Applies {"sigma_mode": "paper"|"codata", "constants": {name: value}} on top of `k`.
/// An explicit sigma_SB wins over sigma_mode.
inline PhysicalConstants apply_constants_overrides(PhysicalConstants k, const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("config: top level must be an object");
  if (doc.contains("sigma_mode")) {
    const auto& m = doc["sigma_mode"];
    if (m == "paper") k.sigma_SB = PhysicalConstants::kSigmaPaper;
    else if (m == "codata") k.sigma_SB = PhysicalConstants::kSigmaCodata;
    else throw ParseError("config: sigma_mode must be \"paper\" or \"codata\"");
  }
  if (doc.contains("constants")) {
    const auto& c = doc["constants"];
    if (!c.is_object()) throw ParseError("config: constants must be an object");
    for (const auto& [name, value] : c.items()) {
      if (!value.is_number()) throw ParseError("config: constant " + name + " must be a number");
      const double v = value.get<double>();
      if (name == "G") k.G = v;
      else if (name == "hbar") k.hbar = v;
      else if (name == "m0") k.m0 = v;
      else if (name == "m_neutron") k.m_neutron = v;
      else if (name == "k_B") k.k_B = v;
      else if (name == "sigma_SB") k.sigma_SB = v;
      else if (name == "M_sun") k.M_sun = v;
      else if (name == "c") k.c = v;
      else if (name == "eV") k.eV = v;
      else throw ParseError("config: unknown constant " + name);
    }
  }
  try {
    k.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  return k;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

/// Star catalog: array of {name, radius_m, mass_kg, temperature_K[, radiation_power_W]}.
inline std::vector<NeutronStar> parse_star_catalog(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("star catalog: expected a JSON array");
  std::vector<NeutronStar> stars;
  for (const auto& e : doc) {
    try {
      NeutronStar s{e.at("name").get<std::string>(), e.at("radius_m").get<double>(), e.at("mass_kg").get<double>(),
                    e.at("temperature_K").get<double>(), std::nullopt};
      if (e.contains("radiation_power_W")) s.radiation_power_override = e["radiation_power_W"].get<double>();
      s.validate();
      stars.push_back(std::move(s));
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError(std::string("star catalog: ") + ex.what());
    } catch (const DomainError& ex) {
      throw ParseError(std::string("star catalog: ") + ex.what());
    }
  }
  if (stars.empty()) throw ParseError("star catalog: no stars");
  return stars;
}

inline std::vector<NeutronStar> load_star_catalog(const std::string& path) {
  return parse_star_catalog(read_json_file(path));
}

} // namespace gpsl::io
