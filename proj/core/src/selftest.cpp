#include "ecmnoise/selftest.hpp"

#include <cmath>
#include <cstdio>

#include "ecmnoise/frontend.hpp"
#include "ecmnoise/noise.hpp"
#include "ecmnoise/servo.hpp"
#include "ecmnoise/spectrum.hpp"
#include "ecmnoise/weighting.hpp"

namespace ecmnoise {

namespace {

double round_sig(double x, int digits) {
  if (x == 0.0) return 0.0;
  const double magnitude = std::floor(std::log10(std::abs(x)));
  const double scale = std::pow(10.0, digits - 1 - magnitude);
  return std::round(x * scale) / scale;
}

double integrated_rc_power(double r, double c, const PhysicalConstants& k) {
  FrontEndConfig cfg{.ecm = {c}, .bias = ResistorBias{r}, .input_cap = {}, .jfet_noise = 0.0};
  const double fc = cutoff_frequency(r, c);
  const auto grid = log_grid(fc * 1e-4, fc * 1e4, 64);
  return integrate_power(gate_noise_spectrum(cfg, grid, k), {.tail = TailModel::FirstOrderLowpass});
}

}  // namespace

bool RegressionCheck::passed() const {
  switch (kind) {
    case Tolerance::Relative:
      return std::abs(computed - expected) <= tolerance * std::abs(expected);
    case Tolerance::Absolute:
      return std::abs(computed - expected) <= tolerance;
    case Tolerance::SignificantDigits: {
      const double rounded = round_sig(computed, static_cast<int>(tolerance));
      return std::abs(rounded - expected) <= 1e-9 * std::abs(expected);
    }
  }
  return false;
}

std::vector<RegressionCheck> run_self_test(const PhysicalConstants& k) {
  using enum Tolerance;
  std::vector<RegressionCheck> checks;
  auto add = [&](std::string name, double expected, double computed, double tol, Tolerance kind) {
    checks.push_back({std::move(name), expected, computed, tol, kind});
  };
  const double T = kDefaultTemperature;
  const double cm = 12e-12;

  add("thermal current 1 GOhm [fA/rtHz]", 4.1, thermal_current_density(1e9, T, k) * 1e15, 2, SignificantDigits);
  add("thermal current 10 GOhm [fA/rtHz]", 1.3, thermal_current_density(1e10, T, k) * 1e15, 2, SignificantDigits);
  add("shot current 1 pA [fA/rtHz]", 0.57, shot_current_density(1e-12, k) * 1e15, 2, SignificantDigits);
  add("5 pA/rtHz on 12 pF at 1 kHz [uV/rtHz]", 66.0, current_to_gate_voltage(5e-12, 1000.0, cm) * 1e6, 2,
      SignificantDigits);
  add("cutoff 1 GOhm, 12 pF [Hz]", 13.0, cutoff_frequency(1e9, cm), 2, SignificantDigits);
  add("cutoff 10 GOhm, 12 pF [Hz]", 1.3, cutoff_frequency(1e10, cm), 2, SignificantDigits);
  add("R_m for f_c = 20 Hz, 12 pF [GOhm, truncated]", 0.6, std::floor(resistance_for_cutoff(20.0, cm) * 1e-8) / 10.0,
      1e-12, Absolute);

  const double ktc = 3.452e-10;
  for (double r : {1e9, 1e10, 1e11}) {
    add("kT/C power, R = " + std::to_string(static_cast<int>(r / 1e9)) + " GOhm [V^2]", ktc,
        integrated_rc_power(r, cm, k), 1e-3, Relative);
  }

  const InputCapModel base{InputCapMode::SingleStage, 11.8e-12, 1.2e-12, 10.0};
  auto cin = [&](InputCapMode m) {
    InputCapModel x = base;
    x.mode = m;
    return effective_input_capacitance(x) * 1e12;
  };
  add("C_in single stage, A_v = 10 [pF]", 25.0, cin(InputCapMode::SingleStage), 0.05, Absolute);
  add("C_in cascode [pF]", 13.0, cin(InputCapMode::Cascode), 0.05, Absolute);
  add("C_in constant-current cascode [pF]", 1.2, cin(InputCapMode::ConstantCurrentCascode), 0.05, Absolute);
  add("C_in ideal bootstrap [pF]", 0.0, cin(InputCapMode::IdealBootstrap), 0.05, Absolute);
  add("divider 12/(12+25)", 0.32, divider_ratio(cm, 25e-12).ratio, 0.01, Absolute);
  add("divider 12/(12+25) [dB]", -9.8, divider_ratio(cm, 25e-12).db, 0.05, Absolute);
  add("divider 12/(12+13)", 0.48, divider_ratio(cm, 13e-12).ratio, 0.01, Absolute);
  add("divider 12/(12+13) [dB]", -6.4, divider_ratio(cm, 13e-12).db, 0.05, Absolute);
  add("divider 12/(12+1.2)", 0.91, divider_ratio(cm, 1.2e-12).ratio, 0.01, Absolute);
  add("divider 12/(12+1.2) [dB]", -0.8, divider_ratio(cm, 1.2e-12).db, 0.05, Absolute);

  add("uncorrelated doubling [dB]", 3.01, 20.0 * std::log10(std::hypot(1.0, 1.0)), 0.005, Absolute);
  add("calibrator 1 Pa [dB SPL]", 94.0, to_dba_spl(0.01, Calibration{0.01}).value(), 0.03, Absolute);

  const ServoPlant plant{1e-9, cm, 1.0};
  for (double target : {10.0, 20.0}) {
    const auto c = design_lag_lead(plant, target, 60.0);
    const auto report = verify_stability(plant, c, log_grid(target * 1e-3, target * 1e3, 64));
    const std::string label = std::to_string(static_cast<int>(target)) + " Hz, 60 deg design";
    add("servo crossover, " + label + " [Hz]", target, report.crossover_hz, 0.02, Relative);
    add("servo phase margin, " + label + " [deg]", 60.0, report.phase_margin_deg, 1.0, Absolute);
  }
  {
    const LoopTransfer double_integrator{.gain = std::pow(2.0 * kPi * 15.0, 2), .integrators = 2};
    const auto report = verify_stability(double_integrator, log_grid(0.015, 15e3, 64));
    add("integrating controller phase margin [deg]", 0.0, report.phase_margin_deg, 5.0, Absolute);
  }
  return checks;
}

bool print_self_test(const std::vector<RegressionCheck>& checks, std::ostream& out) {
  bool all = true;
  char line[256];
  std::snprintf(line, sizeof line, "%-44s %14s %14s %12s  %s\n", "check", "expected", "computed", "tolerance",
                "result");
  out << line;
  for (const auto& c : checks) {
    const bool ok = c.passed();
    all = all && ok;
    const char* tol_kind = c.kind == Tolerance::Relative ? "rel" : c.kind == Tolerance::Absolute ? "abs" : "sig";
    char tol[32];
    std::snprintf(tol, sizeof tol, "%g %s", c.tolerance, tol_kind);
    std::snprintf(line, sizeof line, "%-44s %14.6g %14.6g %12s  %s\n", c.name.c_str(), c.expected, c.computed, tol,
                  ok ? "PASS" : "FAIL");
    out << line;
  }
  out << (all ? "all checks passed\n" : "SOME CHECKS FAILED\n");
  return all;
}

}  // namespace ecmnoise
