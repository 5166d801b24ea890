#pragma once

#include <optional>

#include "ecmnoise/constants.hpp"
#include "ecmnoise/frontend.hpp"
#include "ecmnoise/spectrum.hpp"

namespace ecmnoise {

/// Analog A-weighting pole frequencies (IEC 61672-1).
struct AWeightingPoles {
  static constexpr double f1 = 20.598997;
  static constexpr double f2 = 107.65265;
  static constexpr double f3 = 737.86223;
  static constexpr double f4 = 12194.217;
};

/// A-weighting amplitude, unity at 1 kHz.
double a_weight(double f);

/// 20 log10 of a_weight(f).
double a_weight_db(double f);

struct Band {
  double low_hz = 20.0;
  double high_hz = 20000.0;

  void validate() const;
};

/// sqrt of the A-weighted power of `s` inside `band`.
double a_weighted_rms(const Spectrum& s, const Band& band);

/// Capsule sensitivity at 1 kHz; a 94 dB SPL calibrator produces 1 Pa RMS.
struct Calibration {
  double sensitivity;  // V/Pa

  void validate() const;
};

inline constexpr double kCalibratorLevelDb = 94.0;

/// 20 log10((rms / sensitivity) / 20 uPa). Zero rms yields nullopt ("below
/// floor").
std::optional<double> to_dba_spl(double rms, const Calibration& cal);

struct NoiseFloorResult {
  double a_weighted_rms;            // V, referred to the capsule source
  std::optional<double> equivalent_spl;  // dBA SPL; nullopt below floor
  Band band;
};

/// Gate noise referred back through the capsule/input divider, A-weighted
/// and converted to an equivalent sound level.
NoiseFloorResult self_noise_report(const FrontEndConfig& cfg, const Calibration& cal, const Band& band,
                                   int points_per_decade = 64, const PhysicalConstants& k = kCodata);

/// The same result from an already computed gate spectrum.
NoiseFloorResult self_noise_report(const Spectrum& gate_spectrum, const FrontEndConfig& cfg,
                                   const Calibration& cal, const Band& band);

}  // namespace ecmnoise
