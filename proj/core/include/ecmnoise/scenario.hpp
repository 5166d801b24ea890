#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecmnoise/frontend.hpp"
#include "ecmnoise/servo.hpp"
#include "ecmnoise/spectrum.hpp"
#include "ecmnoise/weighting.hpp"

namespace ecmnoise {

inline constexpr int kScenarioSchema = 1;
inline constexpr double kDefaultSensitivity = 10e-3;  // V/Pa

struct LabeledFrontEnd {
  std::string label;
  FrontEndConfig config;
};

struct ServoRequest {
  ServoPlant plant;
  double target_hpf_hz;
  double target_pm_deg = 60.0;
  DesignOptions options;
};

struct GridSpec {
  double low_hz = 1.0;
  double high_hz = 100e3;
  int points_per_decade = 64;
};

/// One evaluation run: front ends sharing a calibration and band, plus an
/// optional servo design request.
struct Scenario {
  std::string name;
  std::vector<LabeledFrontEnd> frontends;
  std::optional<ServoRequest> servo;
  Calibration calibration{kDefaultSensitivity};
  Band band;
  GridSpec grid;

  /// Throws DomainError naming the violated invariant.
  void validate() const;
};

/// Reads a YAML scenario. Every dimensional value carries a unit suffix.
/// Errors are ParseError with the line of the offending key.
Scenario parse_scenario(const std::filesystem::path& path);
Scenario parse_scenario_text(const std::string& text);

struct ServoOutcome {
  std::optional<LagLeadCompensator> compensator;
  std::optional<LoopReport> report;
  std::string failure;  // non-empty when the design was infeasible
};

struct LabeledResult {
  std::string label;
  Spectrum spectrum;
  NoiseFloorResult floor;
};

struct PairwiseDelta {
  std::string from;
  std::string to;
  std::optional<double> delta_db;  // to minus from; nullopt if either is below floor
};

struct ReportBundle {
  std::vector<LabeledResult> results;
  std::optional<ServoOutcome> servo;
  std::vector<PairwiseDelta> deltas;
  std::vector<std::filesystem::path> written;

  bool servo_failed() const noexcept { return servo && !servo->failure.empty(); }
};

/// Computes every result of the scenario without touching the filesystem.
ReportBundle evaluate_scenario(const Scenario& s);

/// Evaluates and writes `<label>-nsd.csv`, `dba-table.csv`, `summary.txt`
/// and (with a servo request) `servo-report.txt` into `outdir`. Each file is
/// written to a temporary name and renamed into place. Throws
/// std::filesystem::filesystem_error or ecmnoise::Error on I/O failure.
ReportBundle run_scenario(const Scenario& s, const std::filesystem::path& outdir);

// Renderers, exposed so the file formats can be tested directly.
std::string render_nsd_csv(const Spectrum& s);
std::string render_dba_table(const ReportBundle& bundle);
std::string render_servo_report(const Scenario& s, const ServoOutcome& outcome);
std::string render_summary(const Scenario& s, const ReportBundle& bundle);

}  // namespace ecmnoise
