#include "ecmnoise/netlist.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ecmnoise/errors.hpp"

namespace ecmnoise::mna {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct PendingElement {
  char kind;
  std::string name;
  std::vector<std::string> nodes;
  double value;
  std::size_t line;
};

struct PendingNoise {
  Token element;
  std::string kind;
  std::optional<double> param;
  std::size_t line;
};

}  // namespace

double parse_spice_value(std::string_view token) {
  if (token.empty()) throw std::invalid_argument("empty value");
  double value = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr == begin) throw std::invalid_argument("not a number");
  std::string rest = lower(std::string(ptr, end));
  double scale = 1.0;
  std::size_t used = 0;
  if (rest.rfind("meg", 0) == 0) {
    scale = 1e6;
    used = 3;
  } else if (!rest.empty()) {
    switch (rest[0]) {
      case 'f': scale = 1e-15; used = 1; break;
      case 'p': scale = 1e-12; used = 1; break;
      case 'n': scale = 1e-9; used = 1; break;
      case 'u': scale = 1e-6; used = 1; break;
      case 'm': scale = 1e-3; used = 1; break;
      case 'k': scale = 1e3; used = 1; break;
      case 'g': scale = 1e9; used = 1; break;
      case 't': scale = 1e12; used = 1; break;
      default: break;
    }
  }
  // Whatever follows the multiplier must be a unit word (letters only).
  for (std::size_t i = used; i < rest.size(); ++i) {
    if (!std::isalpha(static_cast<unsigned char>(rest[i]))) throw std::invalid_argument("trailing garbage");
  }
  if (!std::isfinite(value * scale)) throw std::invalid_argument("value out of range");
  return value * scale;
}

Network parse_netlist(std::istream& in) {
  std::vector<PendingElement> elements;
  std::vector<PendingNoise> noises;
  std::optional<std::pair<std::vector<Token>, std::size_t>> output;
  std::map<std::string, int> node_ids{{"0", 0}};

  auto value_at = [](const Token& t, std::size_t line) {
    try {
      return parse_spice_value(t.text);
    } catch (const std::invalid_argument&) {
      throw ParseError("malformed value '" + t.text + "'", line, t.column);
    }
  };
  auto node_name = [](const std::string& s) { return lower(s) == "gnd" ? std::string("0") : s; };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    const std::string head = lower(tokens[0].text);
    auto expect = [&](std::size_t lo, std::size_t hi, const char* usage) {
      if (tokens.size() < lo || tokens.size() > hi) {
        const std::size_t col = tokens.size() > hi ? tokens[hi].column : tokens.back().column;
        throw ParseError(std::string("expected: ") + usage, line_no, col);
      }
    };

    if (head == "r" || head == "c") {
      expect(5, 5, head == "r" ? "R <name> <n+> <n-> <value>" : "C <name> <n+> <n-> <value>");
      elements.push_back({head[0], tokens[1].text, {node_name(tokens[2].text), node_name(tokens[3].text)},
                          value_at(tokens[4], line_no), line_no});
      if (!(elements.back().value > 0.0)) {
        throw ParseError("element value must be positive", line_no, tokens[4].column);
      }
    } else if (head == "g") {
      expect(7, 7, "G <name> <out+> <out-> <ctrl+> <ctrl-> <gm>");
      elements.push_back({'g', tokens[1].text,
                          {node_name(tokens[2].text), node_name(tokens[3].text), node_name(tokens[4].text),
                           node_name(tokens[5].text)},
                          value_at(tokens[6], line_no), line_no});
      if (!(elements.back().value > 0.0)) {
        throw ParseError("transconductance must be positive", line_no, tokens[6].column);
      }
    } else if (head == "noise") {
      expect(3, 4, "NOISE <element> <thermal|shot|current|voltage> [<value>]");
      const std::string kind = lower(tokens[2].text);
      if (kind != "thermal" && kind != "shot" && kind != "current" && kind != "voltage") {
        throw ParseError("unknown noise kind '" + tokens[2].text + "'", line_no, tokens[2].column);
      }
      std::optional<double> param;
      if (tokens.size() == 4) {
        std::string text = tokens[3].text;
        // Temperatures are plain kelvin; "300K" must not read as 300e3.
        if (kind == "thermal" && !text.empty() && (text.back() == 'K' || text.back() == 'k')) text.pop_back();
        param = value_at(Token{text, tokens[3].column}, line_no);
      }
      if (!param && kind != "thermal") {
        throw ParseError("noise kind '" + kind + "' needs a value", line_no, tokens[2].column);
      }
      noises.push_back({tokens[1], kind, param, line_no});
    } else if (head == "out") {
      expect(2, 3, "OUT <n+> [<n->]");
      output = {std::vector<Token>(tokens.begin() + 1, tokens.end()), line_no};
    } else {
      throw ParseError("unknown statement '" + tokens[0].text + "'", line_no, tokens[0].column);
    }
  }

  auto intern = [&](const std::string& name) {
    auto [it, inserted] = node_ids.emplace(name, static_cast<int>(node_ids.size()));
    return it->second;
  };
  for (auto& e : elements) {
    for (const auto& n : e.nodes) intern(n);
  }
  if (output) {
    for (const auto& t : output->first) intern(node_name(t.text));
  }
  if (node_ids.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw ParseError("netlist uses more than " + std::to_string(kMaxNodes) + " nodes", line_no);
  }

  Network net(static_cast<int>(node_ids.size()));
  for (const auto& e : elements) {
    try {
      switch (e.kind) {
        case 'r':
          net.add_resistor(e.name, node_ids.at(e.nodes[0]), node_ids.at(e.nodes[1]), e.value);
          break;
        case 'c':
          net.add_capacitor(e.name, node_ids.at(e.nodes[0]), node_ids.at(e.nodes[1]), e.value);
          break;
        default:
          net.add_vccs(e.name, node_ids.at(e.nodes[0]), node_ids.at(e.nodes[1]), node_ids.at(e.nodes[2]),
                       node_ids.at(e.nodes[3]), e.value);
      }
    } catch (const DomainError& err) {
      throw ParseError(err.what(), e.line, 1);
    }
  }
  for (const auto& n : noises) {
    try {
      if (n.kind == "thermal") {
        net.add_noise(n.element.text, NoiseSource{ThermalVoltage{
                                          std::get<Resistor>(net.element(n.element.text)).resistance,
                                          n.param.value_or(kDefaultTemperature)}});
      } else if (n.kind == "shot") {
        net.add_noise(n.element.text, NoiseSource{ShotCurrent{*n.param}});
      } else if (n.kind == "current") {
        net.add_noise(n.element.text, NoiseSource{FlatCurrent{*n.param}});
      } else {
        net.add_noise(n.element.text, NoiseSource{FlatVoltage{*n.param}});
      }
    } catch (const std::bad_variant_access&) {
      throw ParseError("thermal noise needs a resistor", n.line, n.element.column);
    } catch (const DomainError& err) {
      throw ParseError(err.what(), n.line, n.element.column);
    }
  }
  if (!output) throw ParseError("missing OUT statement", line_no == 0 ? 1 : line_no);
  const auto& out_tokens = output->first;
  net.set_output(node_ids.at(node_name(out_tokens[0].text)),
                 out_tokens.size() > 1 ? node_ids.at(node_name(out_tokens[1].text)) : 0);
  return net;
}

Network parse_netlist_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open netlist '" + path + "'");
  return parse_netlist(in);
}

}  // namespace ecmnoise::mna
