#pragma once

#include <string>
#include <string_view>

namespace ecmnoise {

/// Physical dimension a configuration value must carry.
enum class Dimension {
  Capacitance,     // F
  Resistance,      // Ohm
  Current,         // A
  Voltage,         // V
  Temperature,     // K
  Frequency,       // Hz
  VoltageDensity,  // V/rtHz
  CurrentDensity,  // A/rtHz
  Sensitivity,     // V/Pa
  Transconductance,  // A/V
  Angle,           // deg
};

std::string_view unit_symbol(Dimension d) noexcept;

/// Parses "<number> <prefix><unit>", e.g. "12 pF", "1 GOhm", "1 GΩ",
/// "2 nV/rtHz", "20 kHz". The space is optional. A bare number is rejected.
/// Returns the value in SI base units (degrees stay degrees). Throws
/// std::invalid_argument with a readable message.
double parse_quantity(std::string_view text, Dimension expected);

/// Formats an SI value with the given number of significant digits in
/// scientific notation, e.g. "1.23456789e-06".
std::string format_scientific(double value, int significant_digits = 9);

}  // namespace ecmnoise
