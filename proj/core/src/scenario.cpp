#include "ecmnoise/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ecmnoise/errors.hpp"
#include "ecmnoise/units.hpp"

namespace ecmnoise {

namespace fs = std::filesystem;

namespace {

std::size_t line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& message) {
  throw ParseError(message, line_of(n), n.Mark().column >= 0 ? static_cast<std::size_t>(n.Mark().column) + 1 : 0);
}

/// A YAML mapping whose keys are checked against an allow-list.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, std::set<std::string> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) fail(node_, "'" + path_ + "' must be a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail(kv.first, "unknown key '" + key + "' in " + path_);
    }
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node get(const std::string& key) const {
    const YAML::Node n = node_[key];
    if (!n) fail(node_, "missing key '" + key + "' in " + path_);
    return n;
  }

  double quantity(const std::string& key, Dimension d) const { return parse(get(key), key, d); }

  double quantity_or(const std::string& key, Dimension d, double fallback) const {
    return has(key) ? quantity(key, d) : fallback;
  }

  double number(const std::string& key) const {
    const YAML::Node n = get(key);
    if (!n.IsScalar()) fail(n, "'" + key + "' must be a number");
    const std::string& text = n.Scalar();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
      fail(n, "'" + key + "' must be a plain number, got '" + text + "'");
    }
    return v;
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::string text(const std::string& key) const {
    const YAML::Node n = get(key);
    if (!n.IsScalar()) fail(n, "'" + key + "' must be a string");
    return n.Scalar();
  }

  static double parse(const YAML::Node& n, const std::string& key, Dimension d) {
    if (!n.IsScalar()) fail(n, "'" + key + "' must be a value with unit " + std::string(unit_symbol(d)));
    try {
      return parse_quantity(n.Scalar(), d);
    } catch (const std::invalid_argument& e) {
      fail(n, key + ": " + e.what());
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
};

InputCapMode parse_mode(const YAML::Node& n) {
  const std::string s = n.Scalar();
  if (s == "single-stage") return InputCapMode::SingleStage;
  if (s == "cascode") return InputCapMode::Cascode;
  if (s == "constant-current-cascode") return InputCapMode::ConstantCurrentCascode;
  if (s == "ideal-bootstrap") return InputCapMode::IdealBootstrap;
  fail(n, "unknown input capacitance mode '" + s +
              "' (single-stage, cascode, constant-current-cascode, ideal-bootstrap)");
}

bool valid_label(const std::string& label) {
  return !label.empty() && std::all_of(label.begin(), label.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

/// Runs `check`, turning DomainError into a ParseError anchored at `n`.
template <class F>
void validated(const YAML::Node& n, F&& check) {
  try {
    check();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(n, e.what());
  }
}

LabeledFrontEnd parse_frontend(const YAML::Node& node, double default_temperature) {
  const Section fe(node, "frontend",
                   {"label", "capsule", "bias", "input_capacitance", "jfet_noise", "jfet_flicker", "gate_leak",
                    "temperature"});
  LabeledFrontEnd out{fe.text("label"), {}};
  if (!valid_label(out.label)) fail(fe.get("label"), "label must be [A-Za-z0-9._-]+, got '" + out.label + "'");
  FrontEndConfig& cfg = out.config;

  const Section capsule(fe.get("capsule"), "capsule", {"capacitance", "electret_voltage"});
  cfg.ecm.capacitance = capsule.quantity("capacitance", Dimension::Capacitance);
  cfg.ecm.electret_voltage = capsule.quantity_or("electret_voltage", Dimension::Voltage, 1.0);
  if (!(cfg.ecm.capacitance > 0.0)) {
    fail(capsule.get("capacitance"), "capsule capacitance must be positive (C_m > 0)");
  }

  const Section bias(fe.get("bias"), "bias", {"resistor", "photocurrent"});
  if (bias.has("resistor") == bias.has("photocurrent")) {
    fail(fe.get("bias"), "bias needs exactly one of 'resistor' or 'photocurrent'");
  }
  if (bias.has("resistor")) {
    const double r = bias.quantity("resistor", Dimension::Resistance);
    if (!(r > 0.0)) fail(bias.get("resistor"), "bias resistance must be positive (R_m > 0)");
    cfg.bias = ResistorBias{r};
  } else {
    const double i = bias.quantity("photocurrent", Dimension::Current);
    if (!(i >= 0.0)) fail(bias.get("photocurrent"), "bias photocurrent must be nonnegative (I_bias >= 0)");
    cfg.bias = PhotocurrentBias{i};
  }

  if (fe.has("input_capacitance")) {
    const Section ic(fe.get("input_capacitance"), "input_capacitance", {"mode", "c_gs", "c_gd", "gain"});
    cfg.input_cap.mode = parse_mode(ic.get("mode"));
    cfg.input_cap.c_gs = ic.quantity_or("c_gs", Dimension::Capacitance, 0.0);
    cfg.input_cap.c_gd = ic.quantity_or("c_gd", Dimension::Capacitance, 0.0);
    cfg.input_cap.voltage_gain = ic.number_or("gain", 1.0);
    validated(fe.get("input_capacitance"), [&] { effective_input_capacitance(cfg.input_cap); });
  }

  cfg.jfet_noise = fe.quantity_or("jfet_noise", Dimension::VoltageDensity, cfg.jfet_noise);
  if (fe.has("jfet_flicker")) {
    const Section fl(fe.get("jfet_flicker"), "jfet_flicker", {"density", "pivot", "exponent"});
    cfg.jfet_flicker = FlickerVoltage{fl.quantity("density", Dimension::VoltageDensity),
                                      fl.quantity_or("pivot", Dimension::Frequency, 1000.0),
                                      fl.number_or("exponent", 1.0)};
  }
  cfg.gate_leak = fe.quantity_or("gate_leak", Dimension::Current, 0.0);
  cfg.temperature = fe.quantity_or("temperature", Dimension::Temperature, default_temperature);
  validated(node, [&] { cfg.validate(); });
  return out;
}

ServoRequest parse_servo(const YAML::Node& node) {
  const Section servo(node, "servo", {"plant", "target_hpf", "target_pm", "pole_ratio", "max_pole_fraction"});
  const Section plant(servo.get("plant"), "servo.plant", {"transconductance", "node_capacitance", "preamp_gain"});
  ServoRequest out{
      .plant = {plant.quantity("transconductance", Dimension::Transconductance),
                plant.quantity("node_capacitance", Dimension::Capacitance), plant.number_or("preamp_gain", 1.0)},
      .target_hpf_hz = servo.quantity("target_hpf", Dimension::Frequency),
      .target_pm_deg = servo.quantity_or("target_pm", Dimension::Angle, 60.0),
      .options = {},
  };
  out.options.pole_ratio = servo.number_or("pole_ratio", out.options.pole_ratio);
  out.options.max_pole_fraction = servo.number_or("max_pole_fraction", out.options.max_pole_fraction);
  validated(servo.get("plant"), [&] { out.plant.validate(); });
  if (!(out.target_hpf_hz >= 1.0 && out.target_hpf_hz <= 100.0)) {
    fail(servo.get("target_hpf"), "target_hpf must lie in [1, 100] Hz");
  }
  if (!(out.target_pm_deg >= 30.0 && out.target_pm_deg <= 90.0)) {
    fail(servo.get("target_pm"), "target_pm must lie in [30, 90] deg");
  }
  if (!(out.options.pole_ratio > 1.0)) fail(servo.get("pole_ratio"), "pole_ratio must exceed 1");
  if (!(out.options.max_pole_fraction > 0.0)) {
    fail(servo.get("max_pole_fraction"), "max_pole_fraction must be positive");
  }
  return out;
}

Scenario parse_root(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ParseError("empty scenario file", 1);
  const Section top(root, "scenario",
                    {"schema", "name", "temperature", "band", "grid", "calibration", "frontends", "servo"});
  const YAML::Node schema = top.get("schema");
  if (top.number("schema") != kScenarioSchema) {
    fail(schema, "unsupported schema " + schema.Scalar() + " (expected " + std::to_string(kScenarioSchema) + ")");
  }

  Scenario s;
  s.name = top.has("name") ? top.text("name") : "scenario";
  const double temperature = top.quantity_or("temperature", Dimension::Temperature, kDefaultTemperature);
  if (!(temperature > 0.0)) fail(top.get("temperature"), "temperature must be positive");

  if (top.has("band")) {
    const Section band(top.get("band"), "band", {"low", "high"});
    s.band.low_hz = band.quantity_or("low", Dimension::Frequency, s.band.low_hz);
    s.band.high_hz = band.quantity_or("high", Dimension::Frequency, s.band.high_hz);
    validated(top.get("band"), [&] { s.band.validate(); });
  }
  s.grid.low_hz = std::min(s.grid.low_hz, s.band.low_hz);
  s.grid.high_hz = std::max(s.grid.high_hz, s.band.high_hz);
  if (top.has("grid")) {
    const Section grid(top.get("grid"), "grid", {"low", "high", "points_per_decade"});
    s.grid.low_hz = grid.quantity_or("low", Dimension::Frequency, s.grid.low_hz);
    s.grid.high_hz = grid.quantity_or("high", Dimension::Frequency, s.grid.high_hz);
    const double ppd = grid.number_or("points_per_decade", s.grid.points_per_decade);
    if (!(ppd >= 1.0) || ppd != static_cast<int>(ppd)) {
      fail(grid.get("points_per_decade"), "points_per_decade must be a positive integer");
    }
    s.grid.points_per_decade = static_cast<int>(ppd);
  }

  if (top.has("calibration")) {
    const Section cal(top.get("calibration"), "calibration", {"sensitivity"});
    s.calibration.sensitivity = cal.quantity("sensitivity", Dimension::Sensitivity);
    validated(top.get("calibration"), [&] { s.calibration.validate(); });
  }

  const YAML::Node fes = top.get("frontends");
  if (!fes.IsSequence() || fes.size() == 0) fail(fes, "'frontends' must be a non-empty list");
  std::set<std::string> labels;
  for (const auto& fe : fes) {
    s.frontends.push_back(parse_frontend(fe, temperature));
    if (!labels.insert(s.frontends.back().label).second) {
      fail(fe, "duplicate front-end label '" + s.frontends.back().label + "'");
    }
  }
  if (top.has("servo")) s.servo = parse_servo(top.get("servo"));
  validated(root, [&] { s.validate(); });
  return s;
}

void write_atomically(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, path);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string dba_text(const std::optional<double>& dba) { return dba ? fixed(*dba, 2) : "below-floor"; }

}  // namespace

void Scenario::validate() const {
  if (frontends.empty()) throw DomainError("scenario: at least one front end is required");
  std::set<std::string> labels;
  for (const auto& fe : frontends) {
    if (!labels.insert(fe.label).second) throw DomainError("scenario: duplicate label '" + fe.label + "'");
    fe.config.validate();
  }
  band.validate();
  calibration.validate();
  if (grid.points_per_decade < 1) throw DomainError("scenario: points_per_decade must be >= 1");
  if (!(grid.low_hz > 0.0) || !(grid.high_hz > grid.low_hz)) throw DomainError("scenario: empty grid");
  if (band.low_hz < grid.low_hz || band.high_hz > grid.high_hz) {
    throw DomainError("scenario: grid must cover the evaluation band");
  }
  if (servo) servo->plant.validate();
}

Scenario parse_scenario_text(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line) + 1, static_cast<std::size_t>(e.mark.column) + 1);
  }
  try {
    return parse_root(root);
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(std::max(e.mark.line, 0)) + 1);
  }
}

Scenario parse_scenario(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

ReportBundle evaluate_scenario(const Scenario& s) {
  s.validate();
  ReportBundle bundle;
  const auto grid = log_grid(s.grid.low_hz, s.grid.high_hz, s.grid.points_per_decade);
  for (const auto& fe : s.frontends) {
    Spectrum spectrum = gate_noise_spectrum(fe.config, grid);
    NoiseFloorResult floor = self_noise_report(spectrum, fe.config, s.calibration, s.band);
    bundle.results.push_back({fe.label, std::move(spectrum), floor});
  }
  for (std::size_t i = 0; i < bundle.results.size(); ++i) {
    for (std::size_t j = i + 1; j < bundle.results.size(); ++j) {
      const auto& a = bundle.results[i];
      const auto& b = bundle.results[j];
      std::optional<double> delta;
      if (a.floor.equivalent_spl && b.floor.equivalent_spl) {
        delta = *b.floor.equivalent_spl - *a.floor.equivalent_spl;
      }
      bundle.deltas.push_back({a.label, b.label, delta});
    }
  }
  if (s.servo) {
    ServoOutcome outcome;
    try {
      const auto c = design_lag_lead(s.servo->plant, s.servo->target_hpf_hz, s.servo->target_pm_deg,
                                     s.servo->options);
      outcome.compensator = c;
      const double fc = s.servo->target_hpf_hz;
      outcome.report = verify_stability(s.servo->plant, c, log_grid(fc * 1e-3, fc * 1e3, 64));
    } catch (const DesignError& e) {
      outcome.failure = e.what();
    } catch (const RangeError& e) {
      outcome.failure = e.what();
    }
    bundle.servo = std::move(outcome);
  }
  return bundle;
}

std::string render_nsd_csv(const Spectrum& s) {
  std::string out = "frequency_hz,density_v_per_rthz\n";
  const auto f = s.freqs();
  const auto v = s.values();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_scientific(f[i]);
    out += ',';
    out += format_scientific(v[i]);
    out += '\n';
  }
  return out;
}

std::string render_dba_table(const ReportBundle& bundle) {
  std::string out = "label,a_weighted_rms_v,dba_spl\n";
  for (const auto& r : bundle.results) {
    out += r.label + ',' + format_scientific(r.floor.a_weighted_rms) + ',' + dba_text(r.floor.equivalent_spl) + '\n';
  }
  return out;
}

std::string render_servo_report(const Scenario& s, const ServoOutcome& outcome) {
  std::ostringstream out;
  const auto& req = *s.servo;
  out << "servo design\n";
  out << "  target_hpf_hz        " << format_scientific(req.target_hpf_hz) << '\n';
  out << "  target_pm_deg        " << fixed(req.target_pm_deg, 3) << '\n';
  out << "  transconductance_a_v " << format_scientific(req.plant.transconductance) << '\n';
  out << "  node_capacitance_f   " << format_scientific(req.plant.node_capacitance) << '\n';
  out << "  preamp_gain          " << format_scientific(req.plant.preamp_gain) << '\n';
  if (!outcome.failure.empty()) {
    out << "status INFEASIBLE\n  reason " << outcome.failure << '\n';
    return out.str();
  }
  const auto& c = *outcome.compensator;
  const auto& r = *outcome.report;
  out << "compensator\n";
  out << "  gain                 " << format_scientific(c.gain) << '\n';
  out << "  zero_hz              " << format_scientific(c.zero_hz) << '\n';
  out << "  pole_hz              " << format_scientific(c.pole_hz) << '\n';
  out << "loop\n";
  out << "  crossover_hz         " << format_scientific(r.crossover_hz) << '\n';
  out << "  phase_margin_deg     " << fixed(r.phase_margin_deg, 3) << '\n';
  out << "  closed_loop_hpf_hz   " << format_scientific(r.closed_loop_hpf_hz) << '\n';
  out << "  stable               " << (r.stable ? "yes" : "no") << '\n';
  if (r.multiple_crossovers) out << "  warning              multiple crossovers, highest reported\n";
  out << "status OK\n";
  return out.str();
}

std::string render_summary(const Scenario& s, const ReportBundle& bundle) {
  std::ostringstream out;
  out << "scenario " << s.name << '\n';
  out << "band_hz " << fixed(s.band.low_hz, 3) << ' ' << fixed(s.band.high_hz, 3) << '\n';
  out << "sensitivity_v_per_pa " << format_scientific(s.calibration.sensitivity) << '\n';
  out << "self-noise (A-weighted, dB SPL)\n";
  for (const auto& r : bundle.results) out << "  " << r.label << ' ' << dba_text(r.floor.equivalent_spl) << '\n';
  if (!bundle.deltas.empty()) {
    out << "pairwise deltas (second minus first, dB)\n";
    for (const auto& d : bundle.deltas) {
      out << "  " << d.from << " -> " << d.to << ' ' << (d.delta_db ? fixed(*d.delta_db, 2) : "n/a") << '\n';
    }
  }
  if (bundle.servo) {
    if (bundle.servo_failed()) {
      out << "servo INFEASIBLE\n";
    } else {
      out << "servo closed_loop_hpf_hz " << fixed(bundle.servo->report->closed_loop_hpf_hz, 3)
          << " phase_margin_deg " << fixed(bundle.servo->report->phase_margin_deg, 2) << '\n';
    }
  }
  return out.str();
}

ReportBundle run_scenario(const Scenario& s, const fs::path& outdir) {
  ReportBundle bundle = evaluate_scenario(s);
  fs::create_directories(outdir);
  auto emit = [&](const std::string& name, const std::string& contents) {
    const fs::path p = outdir / name;
    write_atomically(p, contents);
    bundle.written.push_back(p);
  };
  for (const auto& r : bundle.results) emit(r.label + "-nsd.csv", render_nsd_csv(r.spectrum));
  emit("dba-table.csv", render_dba_table(bundle));
  if (bundle.servo) emit("servo-report.txt", render_servo_report(s, *bundle.servo));
  emit("summary.txt", render_summary(s, bundle));
  return bundle;
}

}  // namespace ecmnoise
