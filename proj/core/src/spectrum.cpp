#include "ecmnoise/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ecmnoise/errors.hpp"

namespace ecmnoise {

std::string_view to_string(DensityUnit unit) noexcept {
  switch (unit) {
    case DensityUnit::VoltPerRootHz:
      return "V/rtHz";
    case DensityUnit::AmperePerRootHz:
      return "A/rtHz";
  }
  return "?";
}

std::vector<double> log_grid(double f_lo, double f_hi, int points_per_decade) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo) || !std::isfinite(f_hi)) {
    throw DomainError("log_grid: need 0 < f_lo < f_hi");
  }
  if (points_per_decade < 1) throw DomainError("log_grid: points_per_decade must be >= 1");

  const double decades = std::log10(f_hi / f_lo);
  const double step = 1.0 / points_per_decade;
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(std::ceil(decades * points_per_decade)) + 1);
  const double lo_exp = std::log10(f_lo);
  for (int i = 0;; ++i) {
    const double e = i * step;
    // Snap the last point onto f_hi when within a tenth of a step.
    if (e >= decades - 0.1 * step) break;
    grid.push_back(i == 0 ? f_lo : std::pow(10.0, lo_exp + e));
  }
  grid.push_back(f_hi);
  return grid;
}

Spectrum::Spectrum(std::vector<double> freqs, std::vector<double> values, DensityUnit unit)
    : freqs_(std::move(freqs)), values_(std::move(values)), unit_(unit) {
  if (freqs_.empty()) throw ShapeError("spectrum: empty grid");
  if (freqs_.size() != values_.size()) throw ShapeError("spectrum: freqs and values differ in length");
  for (std::size_t i = 0; i < freqs_.size(); ++i) {
    if (!(freqs_[i] > 0.0) || !std::isfinite(freqs_[i])) {
      throw DomainError("spectrum: frequencies must be finite and positive");
    }
    if (i > 0 && !(freqs_[i] > freqs_[i - 1])) {
      throw ShapeError("spectrum: frequencies must be strictly increasing");
    }
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw DomainError("spectrum: densities must be finite and nonnegative");
    }
  }
}

Spectrum Spectrum::zeros(std::vector<double> freqs, DensityUnit unit) {
  std::vector<double> values(freqs.size(), 0.0);
  return Spectrum(std::move(freqs), std::move(values), unit);
}

double Spectrum::at(double f) const {
  if (f < freqs_.front() || f > freqs_.back()) {
    throw RangeError("spectrum: " + std::to_string(f) + " Hz outside grid span");
  }
  auto hi = std::lower_bound(freqs_.begin(), freqs_.end(), f);
  auto i = static_cast<std::size_t>(hi - freqs_.begin());
  if (freqs_[i] == f) return values_[i];
  const double f0 = freqs_[i - 1], f1 = freqs_[i];
  const double v0 = values_[i - 1], v1 = values_[i];
  const double t = std::log(f / f0) / std::log(f1 / f0);
  if (v0 > 0.0 && v1 > 0.0) return std::exp(std::log(v0) + t * (std::log(v1) - std::log(v0)));
  return v0 + t * (v1 - v0);
}

Spectrum Spectrum::scaled(double factor) const {
  if (!(factor >= 0.0) || !std::isfinite(factor)) throw DomainError("spectrum: scale must be >= 0");
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Spectrum(freqs_, std::move(v), unit_);
}

bool Spectrum::same_grid(const Spectrum& other) const noexcept {
  return unit_ == other.unit_ && freqs_ == other.freqs_;
}

Spectrum combine_uncorrelated(const Spectrum& a, const Spectrum& b) {
  if (a.unit() != b.unit()) throw ShapeError("combine_uncorrelated: unit mismatch");
  if (!a.same_grid(b)) throw ShapeError("combine_uncorrelated: grid mismatch");
  std::vector<double> out(a.size());
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(va[i], vb[i]);
  return Spectrum(std::vector<double>(a.freqs().begin(), a.freqs().end()), std::move(out), a.unit());
}

namespace {

void check_density(std::span<const double> f) {
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i] / f[i - 1] > kMaxGridRatio) {
      throw AccuracyError("integrate_power: adjacent grid ratio " + std::to_string(f[i] / f[i - 1]) +
                          " exceeds " + std::to_string(kMaxGridRatio));
    }
  }
}

double trapezoid_power(std::span<const double> f, std::span<const double> v) {
  double sum = 0.0;
  for (std::size_t i = 1; i < f.size(); ++i) {
    sum += 0.5 * (f[i] - f[i - 1]) * (v[i] * v[i] + v[i - 1] * v[i - 1]);
  }
  return sum;
}

}  // namespace

double integrate_power(const Spectrum& s, const IntegrationOptions& options) {
  const auto f = s.freqs();
  const auto v = s.values();
  check_density(f);
  if (options.tail == TailModel::None && options.highest_corner_hz) {
    if (f.back() < *options.highest_corner_hz * 1e6) {
      throw AccuracyError("integrate_power: grid must extend six decades past the highest corner");
    }
  }
  double power = trapezoid_power(f, v);
  if (options.tail == TailModel::FirstOrderLowpass) {
    // int_0^f0 of a flat density, plus int_fN^inf of A/f^2 = p(fN) * fN.
    power += v.front() * v.front() * f.front();
    power += v.back() * v.back() * f.back();
  }
  return power;
}

double integrate_power(const Spectrum& s, double f_lo, double f_hi) {
  if (!(f_lo > 0.0) || !(f_hi > f_lo)) throw DomainError("integrate_power: need 0 < f_lo < f_hi");
  if (f_lo < s.front_hz() || f_hi > s.back_hz()) {
    throw RangeError("integrate_power: band outside spectrum span");
  }
  const auto f = s.freqs();
  const auto v = s.values();
  check_density(f);

  std::vector<double> bf{f_lo};
  std::vector<double> bv{s.at(f_lo)};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] > f_lo && f[i] < f_hi) {
      bf.push_back(f[i]);
      bv.push_back(v[i]);
    }
  }
  bf.push_back(f_hi);
  bv.push_back(s.at(f_hi));
  return trapezoid_power(bf, bv);
}

}  // namespace ecmnoise
