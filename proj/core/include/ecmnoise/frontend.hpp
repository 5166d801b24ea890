#pragma once

#include <complex>
#include <optional>
#include <span>
#include <variant>

#include "ecmnoise/constants.hpp"
#include "ecmnoise/noise.hpp"
#include "ecmnoise/spectrum.hpp"

namespace ecmnoise {

/// Electret capsule around its operating point: quiescent capacitance C_m,
/// electret field voltage E_el (so Q_0 = C_m * E_el) and a small capacitance
/// modulation amplitude.
struct EcmModel {
  double capacitance;              // F
  double electret_voltage = 1.0;   // V
  double modulation = 0.0;         // F

  double charge() const noexcept { return capacitance * electret_voltage; }
};

/// Largest |modulation| / capacitance for which the constant-charge
/// linearization is accepted.
inline constexpr double kSmallSignalLimit = 0.01;

/// -(Q_0 / C_m^2) * c_tilde.
double equivalent_source_voltage(const EcmModel& ecm);

/// 1 / (1 + j 2 pi f R C).
std::complex<double> rc_lowpass(double f, double resistance, double capacitance);

/// 1 / (2 pi R C).
double cutoff_frequency(double resistance, double capacitance);

/// Resistance at which the RC corner sits exactly at `cutoff_hz`; any larger
/// resistance gives a lower corner.
double resistance_for_cutoff(double cutoff_hz, double capacitance);

/// i_n / (2 pi f C): a current density integrated on a capacitance.
double current_to_gate_voltage(double current_density, double f, double capacitance);

struct ResistorBias {
  double resistance;  // ohm
};

struct PhotocurrentBias {
  double current;  // A
};

using BiasElement = std::variant<ResistorBias, PhotocurrentBias>;

enum class InputCapMode {
  SingleStage,             // common-source, Miller-multiplied C_gd
  Cascode,                 // drain pinned, C_gs + C_gd
  ConstantCurrentCascode,  // source bootstrapped, only C_gd remains
  IdealBootstrap,          // nothing loads the gate
};

struct InputCapModel {
  InputCapMode mode = InputCapMode::IdealBootstrap;
  double c_gs = 0.0;          // F
  double c_gd = 0.0;          // F
  double voltage_gain = 1.0;  // A_v, used by SingleStage only
};

double effective_input_capacitance(const InputCapModel& m);

struct DividerRatio {
  double ratio;
  double db;
};

/// Capacitive divider between the capsule and the amplifier input.
DividerRatio divider_ratio(double capsule_capacitance, double input_capacitance);

struct FrontEndConfig {
  EcmModel ecm;
  BiasElement bias;
  InputCapModel input_cap;
  double jfet_noise = 2e-9;  // V/rtHz, flat
  std::optional<FlickerVoltage> jfet_flicker;
  double gate_leak = 0.0;  // A
  double temperature = kDefaultTemperature;

  /// Throws DomainError on the first violated invariant.
  void validate() const;
};

/// C_m plus the effective input capacitance of the configured stage.
double gate_node_capacitance(const FrontEndConfig& cfg);

/// Voltage noise density at the JFET gate. The bias element's current
/// noise (thermal for a resistor, shot for a photocurrent) and the gate-leak
/// shot noise flow into the gate-node impedance; the JFET voltage noise adds
/// in power.
Spectrum gate_noise_spectrum(const FrontEndConfig& cfg, std::span<const double> grid,
                             const PhysicalConstants& k = kCodata);

}  // namespace ecmnoise
