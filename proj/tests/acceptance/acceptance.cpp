// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ecmnoise/frontend.hpp"
#include "ecmnoise/mna.hpp"
#include "ecmnoise/noise.hpp"
#include "ecmnoise/servo.hpp"
#include "ecmnoise/spectrum.hpp"
#include "ecmnoise/weighting.hpp"
#include "oracles.hpp"

using namespace ecmnoise;
namespace oracle = ecmnoise::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double round_sig(double x, int digits) {
  if (x == 0.0) return 0.0;
  const double scale = std::pow(10.0, digits - 1 - std::floor(std::log10(std::abs(x))));
  return std::round(x * scale) / scale;
}

double round_dec(double x, int decimals) {
  const double s = std::pow(10.0, decimals);
  return std::round(x * s) / s;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

FrontEndConfig resistor(double r) {
  return FrontEndConfig{.ecm = {12e-12}, .bias = ResistorBias{r}, .input_cap = {}, .jfet_noise = 0.0};
}

Outcome kt_over_c() {
  Outcome o;
  const auto t0 = Clock::now();
  for (double r : {1e9, 1e10, 1e11}) {
    const double fc = cutoff_frequency(r, 12e-12);
    const auto s = gate_noise_spectrum(resistor(r), log_grid(fc * 1e-4, fc * 1e4, 64));
    const double p = integrate_power(s, {.tail = TailModel::FirstOrderLowpass});
    const double err = std::abs(p / 3.452e-10 - 1);
    o.require(err <= 1e-3, "R=" + num(r) + " off by " + num(err * 100) + "%");
    o.note(num(r / 1e9) + " GOhm: " + num(p, "%.5e") + " V^2");
  }
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + num(dt) + " s");
  return o;
}

Outcome cutoff_arithmetic() {
  Outcome o;
  const double f1 = cutoff_frequency(1e9, 12e-12);
  const double f10 = cutoff_frequency(1e10, 12e-12);
  const double rmin = resistance_for_cutoff(20.0, 12e-12);
  o.require(round_dec(f1, 2) == 13.26, "f_c(1G) = " + num(f1));
  o.require(round_dec(f10, 2) == 1.33, "f_c(10G) = " + num(f10));
  o.require(std::round(f1) == 13.0 && round_sig(f10, 2) == 1.3, "rounding to 13 / 1.3");
  o.require(round_dec(rmin / 1e9, 3) == 0.663 && rmin > 0.6e9, "R_min = " + num(rmin));
  o.note("f_c = " + num(f1) + " / " + num(f10) + " Hz, R_min = " + num(rmin / 1e9) + " GOhm");
  return o;
}

Outcome spot_values() {
  Outcome o;
  const double i1 = thermal_current_density(1e9, 300) * 1e15;
  const double i10 = thermal_current_density(1e10, 300) * 1e15;
  const double shot = shot_current_density(1e-12) * 1e15;
  const double v = current_to_gate_voltage(5e-12, 1000.0, 12e-12) * 1e6;
  o.require(round_sig(i1, 2) == 4.1, "1G: " + num(i1));
  o.require(round_sig(i10, 2) == 1.3, "10G: " + num(i10));
  o.require(round_sig(shot, 2) == 0.57, "shot: " + num(shot));
  o.require(round_sig(v, 2) == 66.0, "66 uV: " + num(v));
  // The same 66 uV through the full gate-spectrum path.
  FrontEndConfig cfg{.ecm = {12e-12}, .bias = PhotocurrentBias{25e-24 / (2 * oracle::kCharge)}, .input_cap = {},
                     .jfet_noise = 0.0};
  const double via_spectrum = gate_noise_spectrum(cfg, std::vector<double>{1000.0}).values()[0] * 1e6;
  o.require(round_sig(via_spectrum, 2) == 66.0, "gate spectrum: " + num(via_spectrum));
  o.note(num(i1, "%.3g") + " / " + num(i10, "%.3g") + " / " + num(shot, "%.3g") + " fA/rtHz, " +
         num(v, "%.3g") + " uV/rtHz");
  return o;
}

Outcome capacitance_ledger() {
  Outcome o;
  InputCapModel m{InputCapMode::SingleStage, 11.8e-12, 1.2e-12, 10.0};
  const double expected[] = {25.0, 13.0, 1.2, 0.0};
  const InputCapMode modes[] = {InputCapMode::SingleStage, InputCapMode::Cascode,
                                InputCapMode::ConstantCurrentCascode, InputCapMode::IdealBootstrap};
  std::string caps;
  for (int i = 0; i < 4; ++i) {
    m.mode = modes[i];
    const double c = effective_input_capacitance(m) * 1e12;
    o.require(std::abs(c - expected[i]) <= 0.01, "mode " + std::to_string(i) + ": " + num(c) + " pF");
    caps += (i ? "/" : "") + num(c, "%.1f");
  }
  struct Div {
    double cin, ratio, db;
  };
  for (const Div d : {Div{25e-12, 0.32, -9.8}, Div{13e-12, 0.48, -6.4}, Div{1.2e-12, 0.91, -0.8}}) {
    const auto r = divider_ratio(12e-12, d.cin);
    o.require(std::abs(r.ratio - d.ratio) <= 0.01, "ratio " + num(r.ratio));
    o.require(std::abs(r.db - d.db) <= 0.05, "dB " + num(r.db));
  }
  o.note("C_in " + caps + " pF");
  return o;
}

Outcome nsd_ordering() {
  Outcome o;
  const auto grid = log_grid(0.01, 1e5, 64);
  const auto s1 = gate_noise_spectrum(resistor(1e9), grid);
  const auto s10 = gate_noise_spectrum(resistor(1e10), grid);
  const auto s100 = gate_noise_spectrum(resistor(1e11), grid);
  int checked = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] <= 13.3) continue;
    ++checked;
    if (!(s100.values()[i] < s10.values()[i] && s10.values()[i] < s1.values()[i])) {
      o.require(false, "ordering broken at " + num(grid[i]) + " Hz");
      break;
    }
  }
  for (double r : {1e9, 1e10, 1e11}) {
    const double fc = cutoff_frequency(r, 12e-12);
    const auto ends = gate_noise_spectrum(resistor(r), std::vector<double>{10 * fc, 100 * fc});
    const double slope = 20 * std::log10(ends.values()[1] / ends.values()[0]);
    o.require(std::abs(slope + 20.0) <= 0.2, "slope " + num(slope) + " dB/dec for R=" + num(r));
  }
  o.note(std::to_string(checked) + " grid points ordered above 13.3 Hz");
  return o;
}

Outcome servo_round_trip() {
  Outcome o;
  const auto t0 = Clock::now();
  const ServoPlant plant{1e-9, 12e-12, 1.0};
  double worst_fc = 0.0, worst_pm = 0.0;
  for (double hpf : {10.0, 15.0, 20.0}) {
    for (double pm : {45.0, 60.0, 75.0}) {
      const auto c = design_lag_lead(plant, hpf, pm);
      const auto r = verify_stability(plant, c, log_grid(hpf * 1e-3, hpf * 1e3, 64));
      const double efc = std::abs(r.crossover_hz / hpf - 1);
      const double epm = std::abs(r.phase_margin_deg - pm);
      worst_fc = std::max(worst_fc, efc);
      worst_pm = std::max(worst_pm, epm);
      o.require(efc <= 0.02 && epm <= 1.0 && r.stable, "(" + num(hpf) + " Hz, " + num(pm) + " deg)");
    }
  }
  const LoopTransfer integrating_controller{.gain = std::pow(2 * oracle::kPi * 15.0, 2), .integrators = 2};
  const auto bad = verify_stability(integrating_controller, log_grid(0.015, 15e3, 64));
  o.require(bad.phase_margin_deg <= 5.0 && !bad.stable, "integrating controller PM " + num(bad.phase_margin_deg));
  const double dt = seconds_since(t0);
  o.require(dt < 1.0, "runtime " + num(dt) + " s");
  o.note("worst crossover error " + num(worst_fc * 100, "%.3g") + "%, worst PM error " + num(worst_pm, "%.3g") +
         " deg, integrating controller PM " + num(bad.phase_margin_deg, "%.3g") + " deg");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  mna::Network rc(2);
  rc.add_resistor("Rm", 1, 0, 1e9);
  rc.add_capacitor("Cm", 1, 0, 12e-12);
  rc.add_noise("Rm", NoiseSource{ThermalVoltage{1e9, 300}});
  rc.set_output(1);

  mna::Network shot(2);
  shot.add_capacitor("Cm", 1, 0, 12e-12);
  shot.add_noise("Cm", NoiseSource{ShotCurrent{1e-12}});
  shot.set_output(1);

  std::vector<double> points;
  for (int i = 0; i < 200; ++i) points.push_back(10.0 * std::pow(2000.0, i / 199.0));
  const auto eq5 = gate_noise_spectrum(resistor(1e9), points);
  const double in = shot_current_density(1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double f = points[i];
    worst = std::max(worst, std::abs(mna::noise_solve(rc, f) / eq5.values()[i] - 1));
    worst = std::max(worst, std::abs(mna::noise_solve(shot, f) / (in / (2 * oracle::kPi * f * 12e-12)) - 1));
  }
  o.require(worst <= 1e-9, "worst relative error " + num(worst));
  o.note("200 points, worst relative error " + num(worst, "%.2e"));
  return o;
}

Outcome a_weighting() {
  Outcome o;
  const double w1k = a_weight_db(1000.0);
  const double w100 = a_weight_db(100.0);
  const double w10k = a_weight_db(10000.0);
  o.require(std::abs(w1k) <= 0.01, "1 kHz: " + num(w1k));
  o.require(std::abs(w100 + 19.1) <= 0.1, "100 Hz: " + num(w100));
  o.require(std::abs(w10k + 2.5) <= 0.1, "10 kHz: " + num(w10k));
  double worst = 0.0;
  for (double f : log_grid(10, 20000, 64)) {
    worst = std::max(worst, std::abs(a_weight(f) / oracle::a_weight_pole_zero(f) - 1));
  }
  o.require(worst <= 1e-10, "pole/zero oracle mismatch " + num(worst));
  // A-weighted integration against dense Simpson quadrature.
  const auto grid = log_grid(10, 30000, 64);
  const Spectrum flat(grid, std::vector<double>(grid.size(), 1e-6), DensityUnit::VoltPerRootHz);
  const double rms = a_weighted_rms(flat, {20, 20000});
  const double dense = std::sqrt(
      oracle::simpson_log([](double f) { return std::pow(oracle::a_weight_pole_zero(f) * 1e-6, 2); }, 20, 20000));
  o.require(std::abs(rms / dense - 1) <= 1e-3, "flat-spectrum rms " + num(rms) + " vs " + num(dense));
  o.note(num(w1k, "%.4f") + " / " + num(w100, "%.3f") + " / " + num(w10k, "%.3f") + " dB");
  return o;
}

Outcome pds_vs_resistor() {
  Outcome o;
  FrontEndConfig res{.ecm = {12e-12}, .bias = ResistorBias{1e9}, .input_cap = {}, .jfet_noise = 2e-9};
  FrontEndConfig pds = res;
  pds.bias = PhotocurrentBias{1e-12};
  const auto grid = log_grid(10, 20000, 64);
  const auto sr = gate_noise_spectrum(res, grid);
  const auto sp = gate_noise_spectrum(pds, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(sp.values()[i] <= sr.values()[i])) {
      o.require(false, "PDS above resistor at " + num(grid[i]) + " Hz");
      break;
    }
  }
  const Calibration cal{10e-3};
  const Band band{20, 20000};
  const auto a = self_noise_report(res, cal, band);
  const auto b = self_noise_report(pds, cal, band);
  o.require(*b.equivalent_spl < *a.equivalent_spl, "dBA not lower");

  const double one = *to_dba_spl(a_weighted_rms(sr, band), cal);
  const double two = *to_dba_spl(a_weighted_rms(combine_uncorrelated(sr, sr), band), cal);
  o.require(std::abs(two - one - 3.01) <= 0.02, "doubling " + num(two - one) + " dB");

  const double rms = 3.7e-7;
  const double shift = *to_dba_spl(5.0 * rms, cal) - *to_dba_spl(rms, cal);
  o.require(std::abs(shift - 20 * std::log10(5.0)) <= 1e-12, "20 log10 scaling");
  o.note("resistor " + num(*a.equivalent_spl, "%.2f") + " dBA, PDS " + num(*b.equivalent_spl, "%.2f") +
         " dBA at 10 mV/Pa (scenario-dependent), doubling +" + num(two - one, "%.4f") + " dB");
  return o;
}

int run_cli(const std::string& args, std::string* captured = nullptr) {
  const fs::path log = fs::temp_directory_path() / "ecmnoise-acceptance-cli.log";
  const std::string cmd = std::string(ECMNOISE_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (captured) {
    std::ifstream in(log);
    std::ostringstream ss;
    ss << in.rdbuf();
    *captured = ss.str();
  }
  fs::remove(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism_and_selftest() {
  Outcome o;
  const auto t0 = Clock::now();
  std::string out1, out2;
  o.require(run_cli("selftest", &out1) == 0, "selftest failed");
  run_cli("selftest", &out2);
  o.require(out1 == out2, "selftest output differs between runs");

  const fs::path a = fs::temp_directory_path() / "ecmnoise-acceptance-a";
  const fs::path b = fs::temp_directory_path() / "ecmnoise-acceptance-b";
  fs::remove_all(a);
  fs::remove_all(b);
  const std::string scenario = std::string(ECMNOISE_SCENARIO_DIR) + "/bias-comparison.yaml";
  o.require(run_cli("run " + scenario + " --out " + a.string()) == 0, "first run failed");
  o.require(run_cli("run " + scenario + " --out " + b.string()) == 0, "second run failed");
  int files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    ++files;
    const auto other = b / entry.path().filename();
    o.require(fs::exists(other) && slurp(entry.path()) == slurp(other),
              entry.path().filename().string() + " differs");
  }
  o.require(files == 5, std::to_string(files) + " output files");
  fs::remove_all(a);
  fs::remove_all(b);
  const double dt = seconds_since(t0);
  o.require(dt < 10.0, "wall time " + num(dt) + " s");
  o.note(std::to_string(files) + " files byte-identical, wall " + num(dt, "%.2f") + " s");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"1  kT/C invariance over R", kt_over_c},
      {"2  cutoff arithmetic", cutoff_arithmetic},
      {"3  noise-density spot values", spot_values},
      {"4  capacitance ledger and dividers", capacitance_ledger},
      {"5  NSD ordering and -20 dB/dec roll-off", nsd_ordering},
      {"6  servo design round trip", servo_round_trip},
      {"7  MNA oracle equivalence", oracle_equivalence},
      {"8  A-weighting", a_weighting},
      {"9  photocurrent vs resistor bias", pds_vs_resistor},
      {"10 determinism and self-test", determinism_and_selftest},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %-42s %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
