#pragma once

// Reference values computed independently with mpmath at 50 significant
// digits by tests/oracles/generate_oracles.py. Do not edit by hand.

#include <array>
#include <utility>

namespace oracle {

inline constexpr std::array<std::pair<double, double>, 13> kDawson = {{
    {1e-8, 9.9999999999999993333e-9},
    {0.1, 0.09933599239785286115},
    {0.5, 0.42443638350202229593},
    {0.9241388730, 0.54104422463518169847},
    {1, 0.53807950691276841914},
    {2, 0.30134038892379196603},
    {3, 0.17827103061055828734},
    {5, 0.10213407442427683544},
    {10, 0.050253847187598528033},
    {15, 0.033407906808639225873},
    {30, 0.016675941401059175798},
    {100, 5.0002500375093782827e-3},
    {1000, 5.0000025000037500094e-4},
}};

inline constexpr std::array<std::pair<double, double>, 7> kErfcx = {{
    {0, 1.0},
    {0.5, 0.61569034419292587487},
    {1, 0.42758357615580700441},
    {5, 0.11070463773306862637},
    {12, 0.04685422101489376262},
    {30, 0.018795888861416751497},
    {100, 5.6416137829894329036e-3},
}};

inline constexpr double kGamma3Over1p9 = 0.89131795908104366284;
inline constexpr double kAlphaP1p9 = 1.3513424049403037424;
inline constexpr double kGaussianQ1 = 0.19874804309879919757;
inline constexpr double kGaussianG0 = 0.063493635934240969786;

// r_G / r_C -> y = R^2 / (2 r_C^2)
inline constexpr std::array<std::pair<double, double>, 6> kSupportY = {{
    {1e-3, 2.4999988095256046831e-6},
    {0.25, 0.15199419199296519791},
    {1, 1.9883276442816732724},
    {4, 24.941089751983456431},
    {10, 150.99009858139087601},
    {1e3, 1.500000999999000001e+6},
}};

struct I0Row {
  double eta;             // r_C / r_G
  double gauss_gauss;     // units r_C^-4
  double gauss_optimal;   // optimal feedback for r_G = r_C / eta
};

inline constexpr std::array<I0Row, 3> kI0 = {{
    {0.25, 2.1663900862500817692e-5, 3.1464074740746348649e-14},
    {1, 0.017109631807264016504, 7.688695189051931854e-3},
    {4, 0.49629201497951336244, 0.44993453639645010153},
}};

inline constexpr double kLog10RatioAt10 = 62.409290878895187537;
inline constexpr double kRatioAt1 = 2.2252971910795373703;

// Pair feedback functional for unit Gaussians at separation d.
inline constexpr double kPairD1 = 0.015794772268597399245;
inline constexpr double kPairD3 = 6.1285218982934211754e-3;

} // namespace oracle
