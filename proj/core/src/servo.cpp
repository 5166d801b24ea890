#include "ecmnoise/servo.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "ecmnoise/constants.hpp"
#include "ecmnoise/errors.hpp"

namespace ecmnoise {

namespace {

constexpr double kRadToDeg = 180.0 / kPi;
constexpr double kDegToRad = kPi / 180.0;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(std::string(what) + " must be positive and finite");
}

/// Bisection in log f on a sign change of `g` between lo and hi.
template <class G>
double bisect_log(G&& g, double lo, double hi) {
  double g_lo = g(lo);
  for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-13; ++i) {
    const double mid = std::sqrt(lo * hi);
    const double g_mid = g(mid);
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace

void LagLeadCompensator::validate() const {
  require_positive(gain, "compensator gain");
  require_positive(zero_hz, "compensator zero");
  require_positive(pole_hz, "compensator pole");
  if (!(pole_hz < zero_hz)) throw DomainError("compensator: pole must lie below zero");
}

std::complex<double> compensator_response(const LagLeadCompensator& c, double f) {
  c.validate();
  return c.gain * std::complex<double>(1.0, f / c.zero_hz) / std::complex<double>(1.0, f / c.pole_hz);
}

double compensator_phase_deg(const LagLeadCompensator& c, double f) {
  c.validate();
  return (std::atan(f / c.zero_hz) - std::atan(f / c.pole_hz)) * kRadToDeg;
}

void ServoPlant::validate() const {
  require_positive(transconductance, "opto transconductance");
  require_positive(node_capacitance, "node capacitance");
  require_positive(preamp_gain, "preamp gain");
}

std::complex<double> LoopTransfer::response(double f) const {
  return std::polar(magnitude(f), phase_deg(f) * kDegToRad);
}

double LoopTransfer::magnitude(double f) const {
  require_positive(f, "frequency");
  double m = gain / std::pow(2.0 * kPi * f, integrators);
  for (double z : zeros_hz) m *= std::hypot(1.0, f / z);
  for (double p : poles_hz) m /= std::hypot(1.0, f / p);
  return m;
}

double LoopTransfer::phase_deg(double f) const {
  require_positive(f, "frequency");
  double ph = -90.0 * integrators;
  for (double z : zeros_hz) ph += std::atan(f / z) * kRadToDeg;
  for (double p : poles_hz) ph -= std::atan(f / p) * kRadToDeg;
  return ph;
}

LoopTransfer make_loop(const ServoPlant& plant, const LagLeadCompensator& c) {
  plant.validate();
  c.validate();
  return LoopTransfer{
      .gain = plant.preamp_gain * c.gain * plant.transconductance / plant.node_capacitance,
      .integrators = 1,
      .zeros_hz = {c.zero_hz},
      .poles_hz = {c.pole_hz},
  };
}

std::complex<double> loop_gain(const ServoPlant& plant, const LagLeadCompensator& c, double f) {
  return make_loop(plant, c).response(f);
}

std::complex<double> closed_loop_signal_transfer(const ServoPlant& plant, const LagLeadCompensator& c,
                                                 double f) {
  return plant.preamp_gain / (1.0 + loop_gain(plant, c, f));
}

LagLeadCompensator design_lag_lead(const ServoPlant& plant, double target_hpf_hz, double target_pm_deg,
                                   const DesignOptions& options) {
  plant.validate();
  if (!(target_hpf_hz >= 1.0 && target_hpf_hz <= 100.0)) {
    throw DomainError("design_lag_lead: target HPF cutoff must lie in [1, 100] Hz");
  }
  if (!(target_pm_deg >= 30.0 && target_pm_deg <= 90.0)) {
    throw DomainError("design_lag_lead: target phase margin must lie in [30, 90] deg");
  }
  if (!(options.pole_ratio > 1.0) || !(options.max_pole_fraction > 0.0)) {
    throw DomainError("design_lag_lead: pole_ratio must exceed 1 and max_pole_fraction be positive");
  }

  const double fc = target_hpf_hz;
  const double ratio = options.pole_ratio;
  const double pole_limit = options.max_pole_fraction * fc;
  // The integrating plant already sits at -90 deg; the compensator must add
  // exactly this much lag at the crossover.
  const double lag = (90.0 - target_pm_deg) * kDegToRad;

  double zero_hz = 0.0;
  double pole_hz = 0.0;
  if (lag < 1e-4) {
    // Pure gain across the crossover region: park the pair far below.
    zero_hz = fc * 1e-4;
    pole_hz = zero_hz / ratio;
  } else {
    // With x = fc / f_z the lag is atan(ratio x) - atan(x), maximal at
    // x = 1/sqrt(ratio) and falling to zero as x grows. Take the upper
    // branch so the pole sits well below the crossover.
    const double x_peak = 1.0 / std::sqrt(ratio);
    const double max_lag = std::atan(ratio * x_peak) - std::atan(x_peak);
    std::optional<double> x;
    if (lag <= max_lag) {
      auto excess = [&](double xv) { return std::atan(ratio * xv) - std::atan(xv) - lag; };
      x = bisect_log(excess, x_peak, 1e9);
    }
    if (x && fc / *x / ratio <= pole_limit) {
      zero_hz = fc / *x;
      pole_hz = zero_hz / ratio;
    } else {
      // Pin the pole at its limit and solve the zero directly.
      pole_hz = pole_limit;
      const double zero_phase = std::atan(fc / pole_hz) - lag;
      if (!(zero_phase > 0.0)) {
        throw DesignError("design_lag_lead: " + std::to_string(target_pm_deg) +
                          " deg margin needs more lag than a pole at " + std::to_string(pole_hz) +
                          " Hz can supply");
      }
      zero_hz = fc / std::tan(zero_phase);
      if (!(zero_hz > pole_hz)) throw DesignError("design_lag_lead: zero would fall below pole");
    }
  }

  // |L| is linear in K, so unity gain at fc fixes it directly.
  const LagLeadCompensator unit{1.0, zero_hz, pole_hz};
  const double unit_mag = make_loop(plant, unit).magnitude(fc);
  return LagLeadCompensator{1.0 / unit_mag, zero_hz, pole_hz};
}

LoopReport verify_stability(const LoopTransfer& loop, std::span<const double> grid) {
  if (grid.size() < 2) throw ShapeError("verify_stability: grid needs at least two points");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]) || !(grid[0] > 0.0)) {
      throw ShapeError("verify_stability: grid must be positive and strictly increasing");
    }
  }

  auto log_mag = [&](double f) { return std::log(loop.magnitude(f)); };
  int crossings = 0;
  std::optional<double> crossover;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double a = log_mag(grid[i - 1]);
    const double b = log_mag(grid[i]);
    if (a == 0.0 && i == 1) {
      ++crossings;
      crossover = grid[0];
    }
    if (b == 0.0 || (a > 0.0) != (b > 0.0)) {
      ++crossings;
      crossover = b == 0.0 ? grid[i] : bisect_log(log_mag, grid[i - 1], grid[i]);
    }
  }
  if (!crossover) throw RangeError("verify_stability: no unity-gain crossover inside the grid");

  LoopReport report{};
  report.crossover_hz = *crossover;
  report.phase_margin_deg = 180.0 + loop.phase_deg(*crossover);
  report.stable = report.phase_margin_deg > 0.0;
  report.multiple_crossovers = crossings > 1;

  // Closed-loop |1/(1+L)| relative to its high-frequency asymptote; the -3 dB
  // corner is where |1 + L|^2 = 2. Search from the top of the grid down.
  auto excess = [&](double f) { return std::norm(1.0 + loop.response(f)) - 2.0; };
  std::optional<double> hpf;
  for (std::size_t i = grid.size() - 1; i > 0; --i) {
    if (excess(grid[i - 1]) >= 0.0 && excess(grid[i]) < 0.0) {
      hpf = bisect_log(excess, grid[i - 1], grid[i]);
      break;
    }
  }
  if (!hpf) throw RangeError("verify_stability: closed-loop -3 dB corner outside the grid");
  report.closed_loop_hpf_hz = *hpf;
  return report;
}

LoopReport verify_stability(const ServoPlant& plant, const LagLeadCompensator& c,
                            std::span<const double> grid) {
  return verify_stability(make_loop(plant, c), grid);
}

}  // namespace ecmnoise
