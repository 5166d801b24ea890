#pragma once

namespace ecmnoise {

/// Physical constants used by the noise models. Defaults are the exact SI
/// (CODATA 2018) values; tests may pass a perturbed set.
struct PhysicalConstants {
  double boltzmann = 1.380649e-23;        // J/K
  double elementary_charge = 1.602176634e-19;  // C
};

inline constexpr PhysicalConstants kCodata{};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultTemperature = 300.0;  // K
inline constexpr double kReferencePressure = 20e-6;   // Pa, 0 dB SPL

}  // namespace ecmnoise
