#include "ecmnoise/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace ecmnoise {

namespace {

struct UnitSpelling {
  std::string_view text;
  Dimension dimension;
};

// Longest spellings first so that "A/rtHz" wins over "A".
constexpr std::array kSpellings{
    UnitSpelling{"V/rtHz", Dimension::VoltageDensity},
    UnitSpelling{"V/√Hz", Dimension::VoltageDensity},
    UnitSpelling{"A/rtHz", Dimension::CurrentDensity},
    UnitSpelling{"A/√Hz", Dimension::CurrentDensity},
    UnitSpelling{"V/Pa", Dimension::Sensitivity},
    UnitSpelling{"A/V", Dimension::Transconductance},
    UnitSpelling{"Ohm", Dimension::Resistance},
    UnitSpelling{"ohm", Dimension::Resistance},
    UnitSpelling{"Ω", Dimension::Resistance},
    UnitSpelling{"deg", Dimension::Angle},
    UnitSpelling{"Hz", Dimension::Frequency},
    UnitSpelling{"F", Dimension::Capacitance},
    UnitSpelling{"A", Dimension::Current},
    UnitSpelling{"V", Dimension::Voltage},
    UnitSpelling{"K", Dimension::Temperature},
};

constexpr std::pair<std::string_view, double> kPrefixes[] = {
    {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6}, {"µ", 1e-6}, {"μ", 1e-6},
    {"m", 1e-3},  {"k", 1e3},   {"M", 1e6},  {"G", 1e9},  {"T", 1e12},
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view unit_symbol(Dimension d) noexcept {
  switch (d) {
    case Dimension::Capacitance: return "F";
    case Dimension::Resistance: return "Ohm";
    case Dimension::Current: return "A";
    case Dimension::Voltage: return "V";
    case Dimension::Temperature: return "K";
    case Dimension::Frequency: return "Hz";
    case Dimension::VoltageDensity: return "V/rtHz";
    case Dimension::CurrentDensity: return "A/rtHz";
    case Dimension::Sensitivity: return "V/Pa";
    case Dimension::Transconductance: return "A/V";
    case Dimension::Angle: return "deg";
  }
  return "?";
}

double parse_quantity(std::string_view text, Dimension expected) {
  const std::string_view s = trim(text);
  double number = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
  if (ec != std::errc{} || ptr == s.data()) {
    throw std::invalid_argument("'" + std::string(s) + "' does not start with a number");
  }
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
  if (unit.empty()) {
    throw std::invalid_argument("'" + std::string(s) + "' is missing a unit (expected " +
                                std::string(unit_symbol(expected)) + ")");
  }

  for (const auto& spelling : kSpellings) {
    if (!ends_with(unit, spelling.text)) continue;
    const std::string_view prefix = unit.substr(0, unit.size() - spelling.text.size());
    if (spelling.dimension != expected) {
      throw std::invalid_argument("'" + std::string(s) + "' has unit " + std::string(spelling.text) +
                                  ", expected " + std::string(unit_symbol(expected)));
    }
    double scale = 1.0;
    if (!prefix.empty()) {
      bool found = false;
      for (const auto& [p, v] : kPrefixes) {
        if (p == prefix) {
          scale = v;
          found = true;
          break;
        }
      }
      if (!found || expected == Dimension::Angle) {
        throw std::invalid_argument("'" + std::string(s) + "' has unknown prefix '" + std::string(prefix) + "'");
      }
    }
    const double value = number * scale;
    if (!std::isfinite(value)) throw std::invalid_argument("'" + std::string(s) + "' is not finite");
    return value;
  }
  throw std::invalid_argument("'" + std::string(s) + "' has unknown unit (expected " +
                              std::string(unit_symbol(expected)) + ")");
}

std::string format_scientific(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", significant_digits - 1, value);
  return buf;
}

}  // namespace ecmnoise
