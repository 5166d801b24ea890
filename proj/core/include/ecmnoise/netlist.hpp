#pragma once

#include <istream>
#include <string>
#include <string_view>

#include "ecmnoise/mna.hpp"

namespace ecmnoise::mna {

/// Reads a plain-text netlist, one statement per line:
///
///   R <name> <n+> <n-> <value>
///   C <name> <n+> <n-> <value>
///   G <name> <out+> <out-> <ctrl+> <ctrl-> <gm>
///   NOISE <element> thermal [<temperature>]     (default 300 K)
///   NOISE <element> shot <current>
///   NOISE <element> current <A/rtHz>
///   NOISE <element> voltage <V/rtHz>
///   OUT <n+> [<n->]
///
/// Node names are arbitrary tokens; `0` and `gnd` are ground. Values take an
/// optional SI suffix (f p n u m k meg g t) and an optional unit word
/// (12p, 12pF, 1G, 1e9); temperatures are kelvin (300 or 300K). `#` starts
/// a comment. Errors are ParseError with the 1-based line and column of the
/// offending token.
Network parse_netlist(std::istream& in);
Network parse_netlist_file(const std::string& path);

/// Parses a SPICE-style number with optional SI suffix and trailing unit
/// letters. Throws std::invalid_argument when malformed.
double parse_spice_value(std::string_view token);

}  // namespace ecmnoise::mna
