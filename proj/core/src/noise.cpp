#include "ecmnoise/noise.hpp"

#include <cmath>

#include "ecmnoise/errors.hpp"

namespace ecmnoise {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be nonnegative and finite");
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double thermal_voltage_density(double resistance, double temperature, const PhysicalConstants& k) {
  require_positive(resistance, "resistance");
  require_positive(temperature, "temperature");
  return std::sqrt(4.0 * k.boltzmann * temperature * resistance);
}

double thermal_current_density(double resistance, double temperature, const PhysicalConstants& k) {
  require_positive(resistance, "resistance");
  require_positive(temperature, "temperature");
  return std::sqrt(4.0 * k.boltzmann * temperature / resistance);
}

double shot_current_density(double current, const PhysicalConstants& k) {
  require_nonnegative(current, "current");
  return std::sqrt(2.0 * k.elementary_charge * current);
}

NoiseSource::NoiseSource(Kind kind) : kind_(kind) {
  std::visit(Overloaded{
                 [](const ThermalVoltage& s) {
                   require_positive(s.resistance, "resistance");
                   require_positive(s.temperature, "temperature");
                 },
                 [](const ShotCurrent& s) { require_nonnegative(s.current, "current"); },
                 [](const FlatVoltage& s) { require_nonnegative(s.density, "voltage density"); },
                 [](const FlatCurrent& s) { require_nonnegative(s.density, "current density"); },
                 [](const FlickerVoltage& s) {
                   require_nonnegative(s.density_at_pivot, "flicker density");
                   require_positive(s.pivot_hz, "flicker pivot");
                   require_nonnegative(s.exponent, "flicker exponent");
                 },
             },
             kind_);
}

DensityUnit NoiseSource::unit() const noexcept {
  return std::visit(Overloaded{
                        [](const ShotCurrent&) { return DensityUnit::AmperePerRootHz; },
                        [](const FlatCurrent&) { return DensityUnit::AmperePerRootHz; },
                        [](const auto&) { return DensityUnit::VoltPerRootHz; },
                    },
                    kind_);
}

double NoiseSource::density(double f, const PhysicalConstants& k) const {
  require_positive(f, "frequency");
  return std::visit(Overloaded{
                        [&](const ThermalVoltage& s) {
                          return thermal_voltage_density(s.resistance, s.temperature, k);
                        },
                        [&](const ShotCurrent& s) { return shot_current_density(s.current, k); },
                        [](const FlatVoltage& s) { return s.density; },
                        [](const FlatCurrent& s) { return s.density; },
                        [f](const FlickerVoltage& s) {
                          return s.density_at_pivot * std::pow(s.pivot_hz / f, 0.5 * s.exponent);
                        },
                    },
                    kind_);
}

Spectrum NoiseSource::sample(std::span<const double> grid, const PhysicalConstants& k) const {
  std::vector<double> values;
  values.reserve(grid.size());
  for (double f : grid) values.push_back(density(f, k));
  return Spectrum(std::vector<double>(grid.begin(), grid.end()), std::move(values), unit());
}

}  // namespace ecmnoise
