#include "ecmnoise/frontend.hpp"

#include <cmath>
#include <string>

#include "ecmnoise/errors.hpp"

namespace ecmnoise {

namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be nonnegative and finite");
}

}  // namespace

double equivalent_source_voltage(const EcmModel& ecm) {
  require_positive(ecm.capacitance, "capsule capacitance");
  if (!std::isfinite(ecm.electret_voltage) || !std::isfinite(ecm.modulation)) {
    throw DomainError("ecm: non-finite parameter");
  }
  if (std::abs(ecm.modulation) > kSmallSignalLimit * ecm.capacitance) {
    throw SmallSignalError("ecm: |c_tilde| exceeds 1% of C_m; linearized model invalid");
  }
  return -(ecm.charge() / (ecm.capacitance * ecm.capacitance)) * ecm.modulation;
}

std::complex<double> rc_lowpass(double f, double resistance, double capacitance) {
  require_nonnegative(f, "frequency");
  require_positive(resistance, "resistance");
  require_positive(capacitance, "capacitance");
  return 1.0 / std::complex<double>(1.0, 2.0 * kPi * f * resistance * capacitance);
}

double cutoff_frequency(double resistance, double capacitance) {
  require_positive(resistance, "resistance");
  require_positive(capacitance, "capacitance");
  return 1.0 / (2.0 * kPi * resistance * capacitance);
}

double resistance_for_cutoff(double cutoff_hz, double capacitance) {
  require_positive(cutoff_hz, "cutoff");
  require_positive(capacitance, "capacitance");
  return 1.0 / (2.0 * kPi * cutoff_hz * capacitance);
}

double current_to_gate_voltage(double current_density, double f, double capacitance) {
  require_nonnegative(current_density, "current density");
  require_positive(f, "frequency");
  require_positive(capacitance, "capacitance");
  return current_density / (2.0 * kPi * f * capacitance);
}

double effective_input_capacitance(const InputCapModel& m) {
  require_nonnegative(m.c_gs, "C_gs");
  require_nonnegative(m.c_gd, "C_gd");
  switch (m.mode) {
    case InputCapMode::SingleStage:
      require_positive(m.voltage_gain, "A_v");
      return m.c_gs + (1.0 + m.voltage_gain) * m.c_gd;
    case InputCapMode::Cascode:
      return m.c_gs + m.c_gd;
    case InputCapMode::ConstantCurrentCascode:
      return m.c_gd;
    case InputCapMode::IdealBootstrap:
      return 0.0;
  }
  throw DomainError("unknown input capacitance mode");
}

DividerRatio divider_ratio(double capsule_capacitance, double input_capacitance) {
  require_positive(capsule_capacitance, "capsule capacitance");
  require_nonnegative(input_capacitance, "input capacitance");
  const double r = capsule_capacitance / (capsule_capacitance + input_capacitance);
  return {r, 20.0 * std::log10(r)};
}

void FrontEndConfig::validate() const {
  require_positive(ecm.capacitance, "capsule capacitance");
  if (std::abs(ecm.modulation) > kSmallSignalLimit * ecm.capacitance) {
    throw SmallSignalError("ecm: |c_tilde| exceeds 1% of C_m");
  }
  if (const auto* r = std::get_if<ResistorBias>(&bias)) {
    require_positive(r->resistance, "bias resistance");
  } else {
    require_nonnegative(std::get<PhotocurrentBias>(bias).current, "bias photocurrent");
  }
  effective_input_capacitance(input_cap);
  require_nonnegative(jfet_noise, "JFET noise");
  if (jfet_flicker) NoiseSource{*jfet_flicker};
  require_nonnegative(gate_leak, "gate leak");
  require_positive(temperature, "temperature");
}

double gate_node_capacitance(const FrontEndConfig& cfg) {
  return cfg.ecm.capacitance + effective_input_capacitance(cfg.input_cap);
}

Spectrum gate_noise_spectrum(const FrontEndConfig& cfg, std::span<const double> grid,
                             const PhysicalConstants& k) {
  if (grid.empty()) throw ShapeError("gate_noise_spectrum: empty grid");
  cfg.validate();

  const double c_node = gate_node_capacitance(cfg);
  const double leak_shot = shot_current_density(cfg.gate_leak, k);
  std::optional<NoiseSource> flicker;
  if (cfg.jfet_flicker) flicker.emplace(*cfg.jfet_flicker);

  std::vector<double> values;
  values.reserve(grid.size());
  for (double f : grid) {
    if (!(f > 0.0)) throw DomainError("gate_noise_spectrum: frequencies must be positive");
    const double omega_c = 2.0 * kPi * f * c_node;
    double node_power = 0.0;  // V^2/Hz at the gate from current noise
    if (const auto* r = std::get_if<ResistorBias>(&cfg.bias)) {
      // |R || 1/(jwC)|^2 = R^2 / (1 + (wRC)^2)
      const double x = omega_c * r->resistance;
      const double z2 = r->resistance * r->resistance / (1.0 + x * x);
      const double i_thermal = thermal_current_density(r->resistance, cfg.temperature, k);
      node_power = z2 * (i_thermal * i_thermal + leak_shot * leak_shot);
    } else {
      const double i_bias = shot_current_density(std::get<PhotocurrentBias>(cfg.bias).current, k);
      node_power = (i_bias * i_bias + leak_shot * leak_shot) / (omega_c * omega_c);
    }
    double amp_power = cfg.jfet_noise * cfg.jfet_noise;
    if (flicker) {
      const double e = flicker->density(f, k);
      amp_power += e * e;
    }
    values.push_back(std::sqrt(node_power + amp_power));
  }
  return Spectrum(std::vector<double>(grid.begin(), grid.end()), std::move(values),
                  DensityUnit::VoltPerRootHz);
}

}  // namespace ecmnoise
