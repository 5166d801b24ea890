#include <doctest.h>

#include <cmath>
#include <random>

#include "ecmnoise/errors.hpp"
#include "ecmnoise/noise.hpp"
#include "ecmnoise/spectrum.hpp"
#include "oracles.hpp"

using namespace ecmnoise;
namespace oracle = ecmnoise::testing;

namespace {

double round_sig(double x, int digits) {
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(x))));
  return std::round(x * scale) / scale;
}

Spectrum rc_spectrum(double r, double c, int ppd = 64) {
  const double fc = 1.0 / (2 * oracle::kPi * r * c);
  auto grid = log_grid(fc * 1e-4, fc * 1e4, ppd);
  std::vector<double> v;
  for (double f : grid) v.push_back(oracle::rc_thermal_density(f, r, c));
  return Spectrum(std::move(grid), std::move(v), DensityUnit::VoltPerRootHz);
}

}  // namespace

TEST_CASE("thermal voltage density") {
  CHECK(thermal_voltage_density(1e9, 300) == doctest::Approx(4.0703547757e-6).epsilon(1e-10));
  CHECK(thermal_voltage_density(1e10, 300) == doctest::Approx(1.2871591976e-5).epsilon(1e-10));
  CHECK(thermal_voltage_density(4e9, 300) == doctest::Approx(2 * thermal_voltage_density(1e9, 300)).epsilon(1e-15));
  CHECK_THROWS_AS(thermal_voltage_density(0.0, 300), DomainError);
  CHECK_THROWS_AS(thermal_voltage_density(1e9, -1), DomainError);
}

TEST_CASE("thermal current density rounds to 4.1 and 1.3 fA/rtHz") {
  CHECK(round_sig(thermal_current_density(1e9, 300) * 1e15, 2) == doctest::Approx(4.1));
  CHECK(round_sig(thermal_current_density(1e10, 300) * 1e15, 2) == doctest::Approx(1.3));
  CHECK(thermal_current_density(100e9, 300) == doctest::Approx(thermal_current_density(1e9, 300) / 10).epsilon(1e-14));
  CHECK_THROWS_AS(thermal_current_density(-5.0, 300), DomainError);
}

TEST_CASE("voltage density equals R times current density") {
  for (double r : {1e3, 1e6, 1e9, 1e11}) {
    const double v = thermal_voltage_density(r, 300);
    CHECK(std::abs(v - r * thermal_current_density(r, 300)) <= 4e-16 * v);
  }
}

TEST_CASE("shot current density") {
  CHECK(shot_current_density(1e-12) == doctest::Approx(5.66070072341e-16).epsilon(1e-10));
  CHECK(round_sig(shot_current_density(1e-12) * 1e15, 2) == doctest::Approx(0.57));
  CHECK(shot_current_density(0.0) == 0.0);
  CHECK(shot_current_density(4e-12) == doctest::Approx(2 * shot_current_density(1e-12)).epsilon(1e-15));
  CHECK_THROWS_AS(shot_current_density(-1e-12), DomainError);
}

TEST_CASE("noise sources are nonnegative and finite over 1 mHz .. 1 GHz") {
  const std::vector<NoiseSource> sources{
      NoiseSource{ThermalVoltage{1e9, 300}}, NoiseSource{ShotCurrent{1e-12}}, NoiseSource{FlatVoltage{2e-9}},
      NoiseSource{FlatCurrent{5e-15}}, NoiseSource{FlickerVoltage{2e-9, 1000, 1.0}}};
  const auto grid = log_grid(1e-3, 1e9, 8);
  for (const auto& s : sources) {
    for (double f : grid) {
      const double d = s.density(f);
      CHECK(std::isfinite(d));
      CHECK(d >= 0.0);
    }
  }
  CHECK(sources[1].unit() == DensityUnit::AmperePerRootHz);
  CHECK(sources[0].unit() == DensityUnit::VoltPerRootHz);
  CHECK_THROWS_AS(NoiseSource(ThermalVoltage{0.0, 300}), DomainError);
  CHECK_THROWS_AS(NoiseSource(ShotCurrent{-1.0}), DomainError);
}

TEST_CASE("flicker term falls 10 dB per decade for alpha = 1") {
  const NoiseSource s{FlickerVoltage{3e-9, 1000, 1.0}};
  CHECK(s.density(1000) == doctest::Approx(3e-9));
  CHECK(20 * std::log10(s.density(100) / s.density(1000)) == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("log grid") {
  const auto g = log_grid(1.0, 1e5, 64);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 1e5);
  CHECK(g.size() == 5 * 64 + 1);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(g[64] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK_THROWS_AS(log_grid(10.0, 10.0), DomainError);
  CHECK_THROWS_AS(log_grid(0.0, 10.0), DomainError);
}

TEST_CASE("spectrum invariants are enforced") {
  CHECK_THROWS_AS(Spectrum({}, {}, DensityUnit::VoltPerRootHz), ShapeError);
  CHECK_THROWS_AS(Spectrum({1, 2}, {1}, DensityUnit::VoltPerRootHz), ShapeError);
  CHECK_THROWS_AS(Spectrum({2, 1}, {1, 1}, DensityUnit::VoltPerRootHz), ShapeError);
  CHECK_THROWS_AS(Spectrum({1, 2}, {1, -1}, DensityUnit::VoltPerRootHz), DomainError);
  CHECK_THROWS_AS(Spectrum({1, 2}, {1, NAN}, DensityUnit::VoltPerRootHz), DomainError);
}

TEST_CASE("kT/C: integrated RC thermal power is independent of R") {
  const double ktc = oracle::kBoltzmann * 300 / 12e-12;
  CHECK(ktc == doctest::Approx(3.452e-10).epsilon(1e-3));
  for (double r : {1e9, 1e10, 1e11}) {
    const double p = integrate_power(rc_spectrum(r, 12e-12), {.tail = TailModel::FirstOrderLowpass});
    CHECK(std::abs(p / ktc - 1) < 1e-3);
  }
}

TEST_CASE("integrate_power: trapezoid alone misses the tail, the analytic tail recovers it") {
  const double fc = 1.0 / (2 * oracle::kPi * 1e9 * 12e-12);
  auto grid = log_grid(fc / 10, fc * 10, 64);
  std::vector<double> v;
  for (double f : grid) v.push_back(oracle::rc_thermal_density(f, 1e9, 12e-12));
  const Spectrum s(std::move(grid), std::move(v), DensityUnit::VoltPerRootHz);
  const double ktc = oracle::kBoltzmann * 300 / 12e-12;
  const double bare = integrate_power(s);
  const double tailed = integrate_power(s, {.tail = TailModel::FirstOrderLowpass});
  CHECK(bare < tailed);
  CHECK(bare < 0.9 * ktc);
  CHECK(std::abs(tailed / ktc - 1) < 0.02);
}

TEST_CASE("integrate_power edge cases") {
  CHECK(integrate_power(Spectrum::zeros(log_grid(1, 1e4, 16), DensityUnit::VoltPerRootHz)) == 0.0);
  // Coarse grid: ratio 10 between samples.
  CHECK_THROWS_AS(integrate_power(Spectrum({1, 10, 100}, {1, 1, 1}, DensityUnit::VoltPerRootHz)), AccuracyError);
  // Without a tail model the grid must run six decades past the corner.
  const auto s = rc_spectrum(1e9, 12e-12);
  CHECK_THROWS_AS(integrate_power(s, {.tail = TailModel::None, .highest_corner_hz = 13.26}), AccuracyError);
  // Flat density: exact.
  const Spectrum flat(log_grid(10, 1000, 32), std::vector<double>(65, 2.0), DensityUnit::VoltPerRootHz);
  CHECK(integrate_power(flat) == doctest::Approx(4.0 * 990).epsilon(1e-12));
  CHECK(integrate_power(flat, 20.0, 500.0) == doctest::Approx(4.0 * 480).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_power(flat, 5.0, 500.0), RangeError);
}

TEST_CASE("band integration agrees with an independent dense quadrature") {
  const auto s = rc_spectrum(1e9, 12e-12);
  const double expected = oracle::simpson_log(
      [](double f) { return std::pow(oracle::rc_thermal_density(f, 1e9, 12e-12), 2); }, 20, 20000);
  CHECK(integrate_power(s, 20, 20000) == doctest::Approx(expected).epsilon(2e-4));
}

TEST_CASE("combine_uncorrelated") {
  const Spectrum a({1, 2, 3}, {1, 2, 3}, DensityUnit::VoltPerRootHz);
  const Spectrum b({1, 2, 3}, {0, 0, 4}, DensityUnit::VoltPerRootHz);
  const auto c = combine_uncorrelated(a, b);
  CHECK(c.values()[0] == 1.0);
  CHECK(c.values()[1] == 2.0);
  CHECK(c.values()[2] == 5.0);

  const auto doubled = combine_uncorrelated(a, a);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(20 * std::log10(doubled.values()[i] / a.values()[i]) == doctest::Approx(3.0103).epsilon(1e-4));
  }
  const auto id = combine_uncorrelated(a, Spectrum::zeros({1, 2, 3}, DensityUnit::VoltPerRootHz));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(id.values()[i] == a.values()[i]);

  CHECK_THROWS_AS(combine_uncorrelated(a, Spectrum({1, 2, 4}, {0, 0, 0}, DensityUnit::VoltPerRootHz)), ShapeError);
  CHECK_THROWS_AS(combine_uncorrelated(a, Spectrum({1, 2, 3}, {0, 0, 0}, DensityUnit::AmperePerRootHz)), ShapeError);
}

TEST_CASE("combine_uncorrelated is commutative and associative (property)") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  const std::vector<double> grid{1, 2, 3, 4, 5};
  auto random_spectrum = [&] {
    std::vector<double> v(grid.size());
    for (double& x : v) x = dist(rng);
    return Spectrum(grid, v, DensityUnit::VoltPerRootHz);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_spectrum(), b = random_spectrum(), c = random_spectrum();
    const auto ab = combine_uncorrelated(a, b);
    const auto ba = combine_uncorrelated(b, a);
    const auto left = combine_uncorrelated(ab, c);
    const auto right = combine_uncorrelated(a, combine_uncorrelated(b, c));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(ab.values()[i] == ba.values()[i]);
      CHECK(left.values()[i] == doctest::Approx(right.values()[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("spectrum interpolation") {
  const Spectrum s({10, 100}, {1.0, 0.1}, DensityUnit::VoltPerRootHz);
  CHECK(s.at(10) == 1.0);
  CHECK(s.at(std::sqrt(1000.0)) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-12));
  CHECK_THROWS_AS(s.at(5), RangeError);
  CHECK(s.scaled(2.0).values()[1] == doctest::Approx(0.2));
}
