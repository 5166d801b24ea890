#pragma once

#include <complex>
#include <span>
#include <vector>

namespace ecmnoise {

/// C(jf) = K (1 + jf/f_z) / (1 + jf/f_p) with 0 < f_p < f_z: full gain K
/// below the pole, K f_p / f_z above the zero.
struct LagLeadCompensator {
  double gain;
  double zero_hz;
  double pole_hz;

  void validate() const;
};

std::complex<double> compensator_response(const LagLeadCompensator& c, double f);

/// Compensator phase in degrees; never positive for a valid compensator.
double compensator_phase_deg(const LagLeadCompensator& c, double f);

/// Photoelectric DC servo plant: the controller output drives the LED, the
/// photoelement turns it into a current (lumped transconductance), and that
/// current integrates on the gate node ahead of a flat preamplifier.
struct ServoPlant {
  double transconductance;   // A/V
  double node_capacitance;   // F
  double preamp_gain = 1.0;

  void validate() const;
};

/// Loop gain in factored form, gain * prod(1 + jf/z) / prod(1 + jf/p) /
/// (j 2 pi f)^integrators, so that the phase can be evaluated unwrapped.
struct LoopTransfer {
  double gain;
  int integrators = 1;
  std::vector<double> zeros_hz;
  std::vector<double> poles_hz;

  std::complex<double> response(double f) const;
  double magnitude(double f) const;
  double phase_deg(double f) const;
};

LoopTransfer make_loop(const ServoPlant& plant, const LagLeadCompensator& c);

/// L(jf) = A_pre C(jf) g / (j 2 pi f C_node).
std::complex<double> loop_gain(const ServoPlant& plant, const LagLeadCompensator& c, double f);

/// A_pre / (1 + L(jf)): sensor-to-output transfer with the servo closed.
std::complex<double> closed_loop_signal_transfer(const ServoPlant& plant, const LagLeadCompensator& c,
                                                 double f);

struct DesignOptions {
  double pole_ratio = 20.0;         // f_z / f_p before any clamping
  double max_pole_fraction = 0.1;   // f_p <= fraction * target crossover
};

/// Places the lag-lead so that the loop crosses unity at `target_hpf_hz`
/// with `target_pm_deg` of phase margin. Requires 1 <= target_hpf_hz <= 100
/// and 30 <= target_pm_deg <= 90.
LagLeadCompensator design_lag_lead(const ServoPlant& plant, double target_hpf_hz, double target_pm_deg,
                                   const DesignOptions& options = {});

struct LoopReport {
  double crossover_hz;
  double phase_margin_deg;
  double closed_loop_hpf_hz;
  bool stable;
  /// More than one unity-gain crossing was found; the highest is reported.
  bool multiple_crossovers = false;
};

/// Locates crossover and closed-loop -3 dB corner on `grid` (bisection
/// between bracketing points). Throws RangeError without a crossover.
LoopReport verify_stability(const LoopTransfer& loop, std::span<const double> grid);

LoopReport verify_stability(const ServoPlant& plant, const LagLeadCompensator& c,
                            std::span<const double> grid);

}  // namespace ecmnoise
