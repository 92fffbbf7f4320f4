#pragma once

namespace omswap {

inline constexpr const char* kVersion = "0.1.0";

// Quadrature convention used throughout: X = b† + b, P = i(b† - b),
// so [X, P] = 2i and the vacuum has unit variance in each quadrature.
inline constexpr const char* kConventionNote = "[X,P] = 2i, vacuum variance 1";

namespace constants {

// CODATA 2018 (exact by SI definition where applicable)
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double speed_of_light = 299792458.0;  // m/s

}  // namespace constants
}  // namespace omswap
