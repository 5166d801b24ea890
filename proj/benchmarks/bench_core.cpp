#include <benchmark/benchmark.h>

#include "ecmnoise/frontend.hpp"
#include "ecmnoise/mna.hpp"
#include "ecmnoise/servo.hpp"
#include "ecmnoise/spectrum.hpp"
#include "ecmnoise/weighting.hpp"

using namespace ecmnoise;

namespace {

FrontEndConfig pds_config() {
  return FrontEndConfig{.ecm = {12e-12},
                        .bias = PhotocurrentBias{1e-12},
                        .input_cap = {InputCapMode::ConstantCurrentCascode, 11.8e-12, 1.2e-12, 1.0},
                        .jfet_noise = 2e-9,
                        .gate_leak = 0.4e-12};
}

void BM_GateSpectrum(benchmark::State& state) {
  const auto grid = log_grid(1, 1e5, static_cast<int>(state.range(0)));
  const auto cfg = pds_config();
  for (auto _ : state) benchmark::DoNotOptimize(gate_noise_spectrum(cfg, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_GateSpectrum)->Arg(16)->Arg(64)->Arg(256);

void BM_IntegratePower(benchmark::State& state) {
  const auto s = gate_noise_spectrum(pds_config(), log_grid(1, 1e5, static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_power(s, {.tail = TailModel::FirstOrderLowpass}));
}
BENCHMARK(BM_IntegratePower)->Arg(64)->Arg(256);

void BM_SelfNoiseReport(benchmark::State& state) {
  const auto cfg = pds_config();
  for (auto _ : state) benchmark::DoNotOptimize(self_noise_report(cfg, Calibration{10e-3}, Band{}));
}
BENCHMARK(BM_SelfNoiseReport);

void BM_DesignAndVerify(benchmark::State& state) {
  const ServoPlant plant{1e-9, 12e-12, 1.0};
  const auto grid = log_grid(15e-3, 15e3, 64);
  for (auto _ : state) {
    const auto c = design_lag_lead(plant, 15.0, 60.0);
    benchmark::DoNotOptimize(verify_stability(plant, c, grid));
  }
}
BENCHMARK(BM_DesignAndVerify);

void BM_NoiseSolve(benchmark::State& state) {
  const int stages = static_cast<int>(state.range(0));
  mna::Network net(stages + 1);
  for (int i = 1; i <= stages; ++i) {
    const std::string n = std::to_string(i);
    net.add_resistor("R" + n, i, i - 1, 1e9);
    net.add_capacitor("C" + n, i, 0, 12e-12);
    net.add_noise("R" + n, NoiseSource{ThermalVoltage{1e9, 300}});
  }
  net.set_output(stages);
  double f = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mna::noise_solve(net, f));
    f = f < 2e4 ? f * 1.01 : 10.0;
  }
}
BENCHMARK(BM_NoiseSolve)->Arg(1)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
