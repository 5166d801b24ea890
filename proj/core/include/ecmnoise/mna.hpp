#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ecmnoise/constants.hpp"
#include "ecmnoise/noise.hpp"

namespace ecmnoise::mna {

using Complex = std::complex<double>;

/// Node indices run 0..node_count-1; node 0 is ground.
using Node = int;

inline constexpr int kMaxNodes = 64;

struct Resistor {
  std::string name;
  Node pos, neg;
  double resistance;
};

struct Capacitor {
  std::string name;
  Node pos, neg;
  double capacitance;
};

/// Current gm * (V(ctrl_pos) - V(ctrl_neg)) flowing from out_pos through the
/// source to out_neg.
struct Vccs {
  std::string name;
  Node out_pos, out_neg, ctrl_pos, ctrl_neg;
  double transconductance;
};

using Element = std::variant<Resistor, Capacitor, Vccs>;

/// Noise attached to a named element. Current densities act in parallel
/// with the element; voltage densities act in series and are converted to
/// their Norton equivalent through the element admittance.
struct NoiseStamp {
  std::string element;
  NoiseSource source;
};

class Network {
 public:
  explicit Network(int node_count);

  int node_count() const noexcept { return node_count_; }

  void add(Element element);
  void add_resistor(std::string name, Node pos, Node neg, double resistance);
  void add_capacitor(std::string name, Node pos, Node neg, double capacitance);
  void add_vccs(std::string name, Node out_pos, Node out_neg, Node ctrl_pos, Node ctrl_neg, double gm);
  void add_noise(std::string element, NoiseSource source);
  void set_output(Node pos, Node neg = 0);

  const std::vector<Element>& elements() const noexcept { return elements_; }
  const std::vector<NoiseStamp>& noise_stamps() const noexcept { return noise_; }
  Node output_pos() const noexcept { return out_pos_; }
  Node output_neg() const noexcept { return out_neg_; }

  const Element& element(const std::string& name) const;

 private:
  void check_node(Node n) const;
  void check_name(const std::string& name) const;

  int node_count_;
  std::vector<Element> elements_;
  std::vector<NoiseStamp> noise_;
  Node out_pos_ = 0;
  Node out_neg_ = 0;
};

/// Unit-less stimulus: `amplitude` amperes pushed into `pos` and drawn from
/// `neg`.
struct CurrentInjection {
  Node pos, neg;
  Complex amplitude = 1.0;
};

/// Ideal voltage source forcing V(pos) - V(neg) = amplitude; adds one branch
/// row to the nodal system.
struct VoltageInjection {
  Node pos, neg;
  Complex amplitude = 1.0;
};

using Injection = std::variant<CurrentInjection, VoltageInjection>;

struct ACSolution {
  double frequency;
  std::vector<Complex> node_voltages;  // index 0 is ground (always 0)
  double relative_residual;
};

/// Full nodal solution at one frequency.
ACSolution ac_solve_nodes(const Network& net, double f, const Injection& injected);

/// Output node-pair voltage for the given stimulus.
Complex ac_solve(const Network& net, double f, const Injection& injected);

/// Output voltage noise density: uncorrelated power sum over all stamps.
double noise_solve(const Network& net, double f, const PhysicalConstants& k = kCodata);

/// Same, processing stamps in the given order (a permutation of indices).
double noise_solve(const Network& net, double f, const std::vector<std::size_t>& order,
                   const PhysicalConstants& k = kCodata);

}  // namespace ecmnoise::mna
