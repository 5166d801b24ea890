#include "ecmnoise/weighting.hpp"

#include <cmath>
#include <string>

#include "ecmnoise/errors.hpp"

namespace ecmnoise {

namespace {

double unnormalized_a(double f) {
  using P = AWeightingPoles;
  const double f2 = f * f;
  const double num = P::f4 * P::f4 * f2 * f2;
  const double den = (f2 + P::f1 * P::f1) * std::sqrt((f2 + P::f2 * P::f2) * (f2 + P::f3 * P::f3)) *
                     (f2 + P::f4 * P::f4);
  return num / den;
}

const double kOneKilohertz = unnormalized_a(1000.0);

}  // namespace

double a_weight(double f) {
  if (!(f > 0.0) || !std::isfinite(f)) throw DomainError("a_weight: frequency must be positive");
  return unnormalized_a(f) / kOneKilohertz;
}

double a_weight_db(double f) { return 20.0 * std::log10(a_weight(f)); }

void Band::validate() const {
  if (!(low_hz > 0.0) || !(high_hz > low_hz) || !std::isfinite(high_hz)) {
    throw DomainError("band: need 0 < low < high");
  }
}

double a_weighted_rms(const Spectrum& s, const Band& band) {
  band.validate();
  if (band.low_hz < s.front_hz() || band.high_hz > s.back_hz()) {
    throw RangeError("a_weighted_rms: band [" + std::to_string(band.low_hz) + ", " +
                     std::to_string(band.high_hz) + "] Hz not covered by spectrum");
  }
  std::vector<double> weighted(s.size());
  const auto f = s.freqs();
  const auto v = s.values();
  for (std::size_t i = 0; i < weighted.size(); ++i) weighted[i] = a_weight(f[i]) * v[i];
  const Spectrum ws(std::vector<double>(f.begin(), f.end()), std::move(weighted), s.unit());
  return std::sqrt(integrate_power(ws, band.low_hz, band.high_hz));
}

void Calibration::validate() const {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw DomainError("calibration: sensitivity must be positive");
  }
}

std::optional<double> to_dba_spl(double rms, const Calibration& cal) {
  cal.validate();
  if (!(rms >= 0.0) || !std::isfinite(rms)) throw DomainError("to_dba_spl: rms must be nonnegative");
  if (rms == 0.0) return std::nullopt;
  const double pressure = rms / cal.sensitivity;
  return 20.0 * std::log10(pressure / kReferencePressure);
}

NoiseFloorResult self_noise_report(const Spectrum& gate_spectrum, const FrontEndConfig& cfg,
                                   const Calibration& cal, const Band& band) {
  cfg.validate();
  cal.validate();
  const double divider =
      divider_ratio(cfg.ecm.capacitance, effective_input_capacitance(cfg.input_cap)).ratio;
  const double rms = a_weighted_rms(gate_spectrum, band) / divider;
  return NoiseFloorResult{rms, to_dba_spl(rms, cal), band};
}

NoiseFloorResult self_noise_report(const FrontEndConfig& cfg, const Calibration& cal, const Band& band,
                                   int points_per_decade, const PhysicalConstants& k) {
  band.validate();
  const auto grid = log_grid(band.low_hz, band.high_hz, points_per_decade);
  return self_noise_report(gate_noise_spectrum(cfg, grid, k), cfg, cal, band);
}

}  // namespace ecmnoise
