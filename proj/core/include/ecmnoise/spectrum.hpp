#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace ecmnoise {

enum class DensityUnit { VoltPerRootHz, AmperePerRootHz };

std::string_view to_string(DensityUnit unit) noexcept;

/// Log-spaced frequency grid from f_lo to f_hi inclusive, with
/// `points_per_decade` intervals per decade (the last interval is shortened
/// so that f_hi lands exactly on the grid).
std::vector<double> log_grid(double f_lo, double f_hi, int points_per_decade = 64);

/// Amplitude spectral density sampled on a strictly increasing frequency grid.
/// Power densities are obtained by squaring on demand; only amplitudes are
/// stored.
class Spectrum {
 public:
  Spectrum(std::vector<double> freqs, std::vector<double> values, DensityUnit unit);

  static Spectrum zeros(std::vector<double> freqs, DensityUnit unit);

  std::span<const double> freqs() const noexcept { return freqs_; }
  std::span<const double> values() const noexcept { return values_; }
  DensityUnit unit() const noexcept { return unit_; }
  std::size_t size() const noexcept { return freqs_.size(); }

  double front_hz() const noexcept { return freqs_.front(); }
  double back_hz() const noexcept { return freqs_.back(); }

  /// Density at f, interpolated linearly in log-log space between samples
  /// (linear in log f when a neighbour is zero). f must lie on the grid span.
  double at(double f) const;

  Spectrum scaled(double factor) const;

  bool same_grid(const Spectrum& other) const noexcept;

 private:
  std::vector<double> freqs_;
  std::vector<double> values_;
  DensityUnit unit_;
};

/// Pointwise sqrt(a^2 + b^2); both spectra must share grid and unit.
Spectrum combine_uncorrelated(const Spectrum& a, const Spectrum& b);

enum class TailModel {
  None,
  /// Flat below the first sample, 1/f^2 power above the last: the shape of a
  /// first-order low-pass.
  FirstOrderLowpass,
};

struct IntegrationOptions {
  TailModel tail = TailModel::None;
  /// When set and no tail model is used, the grid must extend at least
  /// six decades above this corner.
  std::optional<double> highest_corner_hz;
};

/// Largest ratio between adjacent grid points accepted by the integrator.
inline constexpr double kMaxGridRatio = 1.3;

/// Total power (V^2 or A^2): trapezoid in linear f over the samples, plus
/// the optional analytic head/tail corrections.
double integrate_power(const Spectrum& s, const IntegrationOptions& options = {});

/// Power restricted to [f_lo, f_hi]; edges are interpolated, never
/// extrapolated.
double integrate_power(const Spectrum& s, double f_lo, double f_hi);

}  // namespace ecmnoise
