#pragma once

#include <span>
#include <variant>
#include <vector>

#include "ecmnoise/constants.hpp"
#include "ecmnoise/spectrum.hpp"

namespace ecmnoise {

/// sqrt(4 k T R), V/sqrt(Hz).
double thermal_voltage_density(double resistance, double temperature,
                               const PhysicalConstants& k = kCodata);

/// sqrt(4 k T / R), A/sqrt(Hz).
double thermal_current_density(double resistance, double temperature,
                               const PhysicalConstants& k = kCodata);

/// sqrt(2 q I), A/sqrt(Hz). Zero current gives zero.
double shot_current_density(double current, const PhysicalConstants& k = kCodata);

struct ThermalVoltage {
  double resistance;
  double temperature = kDefaultTemperature;
};

struct ShotCurrent {
  double current;
};

struct FlatVoltage {
  double density;  // V/sqrt(Hz)
};

struct FlatCurrent {
  double density;  // A/sqrt(Hz)
};

/// e0 * (f0 / f)^(alpha / 2): amplitude density falling at 10*alpha dB/dec.
struct FlickerVoltage {
  double density_at_pivot;
  double pivot_hz = 1000.0;
  double exponent = 1.0;
};

/// A one-port stochastic source with a spectral density defined for f > 0.
class NoiseSource {
 public:
  using Kind = std::variant<ThermalVoltage, ShotCurrent, FlatVoltage, FlatCurrent, FlickerVoltage>;

  /// Validates the parameters of `kind`; throws DomainError.
  explicit NoiseSource(Kind kind);

  const Kind& kind() const noexcept { return kind_; }
  DensityUnit unit() const noexcept;

  double density(double f, const PhysicalConstants& k = kCodata) const;
  Spectrum sample(std::span<const double> grid, const PhysicalConstants& k = kCodata) const;

 private:
  Kind kind_;
};

}  // namespace ecmnoise
