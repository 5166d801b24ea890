// Command-line front end: scenario runner, self-test, quick A-weight lookup
// and netlist noise sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ecmnoise/errors.hpp"
#include "ecmnoise/mna.hpp"
#include "ecmnoise/netlist.hpp"
#include "ecmnoise/scenario.hpp"
#include "ecmnoise/selftest.hpp"
#include "ecmnoise/spectrum.hpp"
#include "ecmnoise/units.hpp"
#include "ecmnoise/weighting.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kDesign = 3,
  kIo = 4,
};

int run_command(const std::string& scenario_path, const std::string& outdir, std::optional<int> grid_ppd) {
  ecmnoise::Scenario scenario;
  try {
    scenario = ecmnoise::parse_scenario(scenario_path);
    if (grid_ppd) {
      if (*grid_ppd < 1) throw ecmnoise::DomainError("--grid-ppd must be >= 1");
      scenario.grid.points_per_decade = *grid_ppd;
    }
  } catch (const ecmnoise::ParseError& e) {
    std::cerr << scenario_path << ": " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::DomainError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::Error& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  }

  ecmnoise::ReportBundle bundle;
  try {
    bundle = ecmnoise::run_scenario(scenario, outdir);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ecmnoise::DomainError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::Error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }

  for (const auto& p : bundle.written) std::cout << "wrote " << p.string() << '\n';
  if (bundle.servo_failed()) {
    std::cerr << "servo design infeasible: " << bundle.servo->failure << '\n';
    return kDesign;
  }
  return kOk;
}

int netlist_command(const std::string& path, double low, double high, int ppd) {
  try {
    const auto net = ecmnoise::mna::parse_netlist_file(path);
    std::cout << "frequency_hz,density_v_per_rthz\n";
    for (double f : ecmnoise::log_grid(low, high, ppd)) {
      std::cout << ecmnoise::format_scientific(f) << ','
                << ecmnoise::format_scientific(ecmnoise::mna::noise_solve(net, f)) << '\n';
    }
  } catch (const ecmnoise::ParseError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::TopologyError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::DomainError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kParse;
  } catch (const ecmnoise::Error& e) {
    std::cerr << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacitive-sensor front-end noise toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<int> grid_ppd;
  app.add_option("--grid-ppd", grid_ppd, "Override the scenario grid resolution (points per decade)");

  auto* run = app.add_subcommand("run", "Evaluate a scenario file and write CSV/text reports");
  std::string scenario_path;
  std::string outdir = "out";
  run->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
  run->add_option("--out", outdir, "Output directory")->required();

  auto* selftest = app.add_subcommand("selftest", "Recompute the reference regression values");
  double kb_scale = 1.0;
  // Debug hook: scales the Boltzmann constant to show the checks react to it.
  selftest->add_option("--perturb-kb", kb_scale)->group("");

  auto* aweight = app.add_subcommand("aweight", "Print the A-weighting at one or more frequencies");
  std::vector<double> freqs;
  aweight->add_option("--freq", freqs, "Frequencies in Hz")->required()->check(CLI::PositiveNumber);

  auto* netlist = app.add_subcommand("netlist", "Output noise density of a netlist as CSV on stdout");
  std::string netlist_path;
  double low = 10.0;
  double high = 20e3;
  int ppd = 16;
  netlist->add_option("file", netlist_path, "Netlist file")->required();
  netlist->add_option("--low", low, "Lowest frequency in Hz")->check(CLI::PositiveNumber);
  netlist->add_option("--high", high, "Highest frequency in Hz")->check(CLI::PositiveNumber);
  netlist->add_option("--ppd", ppd, "Points per decade")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (run->parsed()) return run_command(scenario_path, outdir, grid_ppd);

  if (selftest->parsed()) {
    ecmnoise::PhysicalConstants k;
    k.boltzmann *= kb_scale;
    const bool ok = ecmnoise::print_self_test(ecmnoise::run_self_test(k), std::cout);
    return ok ? kOk : kFailure;
  }

  if (aweight->parsed()) {
    for (double freq : freqs) {
      const double w = ecmnoise::a_weight(freq);
      std::printf("%.9g Hz  weight %.9g  (%+.4f dB)\n", freq, w, 20.0 * std::log10(w));
    }
    return kOk;
  }

  if (netlist->parsed()) return netlist_command(netlist_path, low, high, ppd);
  return kFailure;
}
