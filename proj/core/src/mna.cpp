#include "ecmnoise/mna.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ecmnoise/errors.hpp"

namespace ecmnoise::mna {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

const std::string& name_of(const Element& e) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, e);
}

void require_positive(double x, const std::string& what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(what + " must be positive and finite");
}

/// Nodes reachable from ground through R, C and the injected voltage branch.
/// VCCS outputs are not a conductive path.
void check_grounded(const Network& net, const Injection& injected) {
  const int n = net.node_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (const auto& e : net.elements()) {
    std::visit(Overloaded{
                   [&](const Resistor& r) { unite(r.pos, r.neg); },
                   [&](const Capacitor& c) { unite(c.pos, c.neg); },
                   [](const Vccs&) {},
               },
               e);
  }
  if (const auto* v = std::get_if<VoltageInjection>(&injected)) unite(v->pos, v->neg);
  for (int node = 1; node < n; ++node) {
    if (find(node) != find(0)) {
      throw TopologyError("mna: node " + std::to_string(node) + " has no conductive path to ground");
    }
  }
}

struct System {
  Matrix a;
  int nodes;  // unknown node voltages (ground excluded)
};

System assemble(const Network& net, double f, const Injection& injected) {
  const int nodes = net.node_count() - 1;
  const bool vsrc = std::holds_alternative<VoltageInjection>(injected);
  const int size = nodes + (vsrc ? 1 : 0);
  Matrix a = Matrix::Zero(size, size);
  const double omega = 2.0 * kPi * f;

  auto stamp_admittance = [&](Node p, Node n, Complex y) {
    if (p > 0) a(p - 1, p - 1) += y;
    if (n > 0) a(n - 1, n - 1) += y;
    if (p > 0 && n > 0) {
      a(p - 1, n - 1) -= y;
      a(n - 1, p - 1) -= y;
    }
  };
  for (const auto& e : net.elements()) {
    std::visit(Overloaded{
                   [&](const Resistor& r) { stamp_admittance(r.pos, r.neg, 1.0 / r.resistance); },
                   [&](const Capacitor& c) {
                     stamp_admittance(c.pos, c.neg, Complex(0.0, omega * c.capacitance));
                   },
                   [&](const Vccs& g) {
                     auto put = [&](Node row, Node col, double v) {
                       if (row > 0 && col > 0) a(row - 1, col - 1) += v;
                     };
                     put(g.out_pos, g.ctrl_pos, g.transconductance);
                     put(g.out_pos, g.ctrl_neg, -g.transconductance);
                     put(g.out_neg, g.ctrl_pos, -g.transconductance);
                     put(g.out_neg, g.ctrl_neg, g.transconductance);
                   },
               },
               e);
  }
  if (const auto* v = std::get_if<VoltageInjection>(&injected)) {
    const int row = nodes;
    if (v->pos > 0) {
      a(row, v->pos - 1) += 1.0;
      a(v->pos - 1, row) += 1.0;
    }
    if (v->neg > 0) {
      a(row, v->neg - 1) -= 1.0;
      a(v->neg - 1, row) -= 1.0;
    }
  }
  return {std::move(a), nodes};
}

Vector rhs_for(const System& sys, const Injection& injected) {
  Vector b = Vector::Zero(sys.a.rows());
  std::visit(Overloaded{
                 [&](const CurrentInjection& c) {
                   if (c.pos > 0) b(c.pos - 1) += c.amplitude;
                   if (c.neg > 0) b(c.neg - 1) -= c.amplitude;
                 },
                 [&](const VoltageInjection& v) { b(sys.nodes) = v.amplitude; },
             },
             injected);
  return b;
}

/// LU solve with one step of iterative refinement; returns the relative
/// residual through `residual`.
Vector solve(const Eigen::PartialPivLU<Matrix>& lu, const Matrix& a, const Vector& b, double& residual) {
  Vector x = lu.solve(b);
  Vector r = b - a * x;
  x += lu.solve(r);
  r = b - a * x;
  const double bn = b.norm();
  residual = bn > 0.0 ? r.norm() / bn : r.norm();
  if (!x.allFinite()) throw TopologyError("mna: singular nodal matrix");
  return x;
}

Complex node_voltage(const Vector& x, Node n) { return n > 0 ? x(n - 1) : Complex(0.0); }

constexpr double kResidualLimit = 1e-12;

}  // namespace

Network::Network(int node_count) : node_count_(node_count) {
  if (node_count < 1 || node_count > kMaxNodes) {
    throw DomainError("network: node count must lie in [1, " + std::to_string(kMaxNodes) + "]");
  }
}

void Network::check_node(Node n) const {
  if (n < 0 || n >= node_count_) throw DomainError("network: node " + std::to_string(n) + " out of range");
}

void Network::check_name(const std::string& name) const {
  if (name.empty()) throw DomainError("network: element name must not be empty");
  for (const auto& e : elements_) {
    if (name_of(e) == name) throw DomainError("network: duplicate element name '" + name + "'");
  }
}

void Network::add(Element element) {
  std::visit(Overloaded{
                 [&](const Resistor& r) {
                   check_node(r.pos);
                   check_node(r.neg);
                   require_positive(r.resistance, "resistance of " + r.name);
                 },
                 [&](const Capacitor& c) {
                   check_node(c.pos);
                   check_node(c.neg);
                   require_positive(c.capacitance, "capacitance of " + c.name);
                 },
                 [&](const Vccs& g) {
                   for (Node n : {g.out_pos, g.out_neg, g.ctrl_pos, g.ctrl_neg}) check_node(n);
                   require_positive(g.transconductance, "transconductance of " + g.name);
                 },
             },
             element);
  check_name(name_of(element));
  elements_.push_back(std::move(element));
}

void Network::add_resistor(std::string name, Node pos, Node neg, double resistance) {
  add(Resistor{std::move(name), pos, neg, resistance});
}

void Network::add_capacitor(std::string name, Node pos, Node neg, double capacitance) {
  add(Capacitor{std::move(name), pos, neg, capacitance});
}

void Network::add_vccs(std::string name, Node out_pos, Node out_neg, Node ctrl_pos, Node ctrl_neg,
                       double gm) {
  add(Vccs{std::move(name), out_pos, out_neg, ctrl_pos, ctrl_neg, gm});
}

void Network::add_noise(std::string element_name, NoiseSource source) {
  const Element& e = element(element_name);
  if (std::holds_alternative<Vccs>(e) && source.unit() == DensityUnit::VoltPerRootHz) {
    throw DomainError("network: voltage noise cannot be stamped on a VCCS");
  }
  if (std::holds_alternative<ThermalVoltage>(source.kind()) && !std::holds_alternative<Resistor>(e)) {
    throw DomainError("network: thermal noise needs a resistor, '" + element_name + "' is not one");
  }
  noise_.push_back(NoiseStamp{std::move(element_name), std::move(source)});
}

void Network::set_output(Node pos, Node neg) {
  check_node(pos);
  check_node(neg);
  out_pos_ = pos;
  out_neg_ = neg;
}

const Element& Network::element(const std::string& name) const {
  for (const auto& e : elements_) {
    if (name_of(e) == name) return e;
  }
  throw DomainError("network: no element named '" + name + "'");
}

ACSolution ac_solve_nodes(const Network& net, double f, const Injection& injected) {
  require_positive(f, "frequency");
  std::visit([&](const auto& inj) {
    if (inj.pos < 0 || inj.pos >= net.node_count() || inj.neg < 0 || inj.neg >= net.node_count()) {
      throw DomainError("mna: injection node out of range");
    }
  }, injected);
  check_grounded(net, injected);

  const System sys = assemble(net, f, injected);
  ACSolution out{f, std::vector<Complex>(static_cast<std::size_t>(net.node_count()), 0.0), 0.0};
  if (sys.a.rows() == 0) return out;
  const Eigen::PartialPivLU<Matrix> lu(sys.a);
  const Vector x = solve(lu, sys.a, rhs_for(sys, injected), out.relative_residual);
  if (out.relative_residual > kResidualLimit) {
    throw TopologyError("mna: residual " + std::to_string(out.relative_residual) +
                        " exceeds limit; matrix is numerically singular");
  }
  for (int n = 1; n < net.node_count(); ++n) out.node_voltages[static_cast<std::size_t>(n)] = x(n - 1);
  return out;
}

Complex ac_solve(const Network& net, double f, const Injection& injected) {
  const auto sol = ac_solve_nodes(net, f, injected);
  return sol.node_voltages[static_cast<std::size_t>(net.output_pos())] -
         sol.node_voltages[static_cast<std::size_t>(net.output_neg())];
}

double noise_solve(const Network& net, double f, const PhysicalConstants& k) {
  std::vector<std::size_t> order(net.noise_stamps().size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return noise_solve(net, f, order, k);
}

double noise_solve(const Network& net, double f, const std::vector<std::size_t>& order,
                   const PhysicalConstants& k) {
  require_positive(f, "frequency");
  const auto& stamps = net.noise_stamps();
  if (stamps.empty()) throw DomainError("noise_solve: network has no noise-stamped element");
  {
    std::vector<std::size_t> sorted(order);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted.size() != stamps.size() || sorted[i] != i) {
        throw DomainError("noise_solve: order is not a permutation of the noise stamps");
      }
    }
  }

  const CurrentInjection probe{0, 0};
  check_grounded(net, probe);
  const System sys = assemble(net, f, probe);
  const Eigen::PartialPivLU<Matrix> lu(sys.a);
  const double omega = 2.0 * kPi * f;

  double power = 0.0;
  for (std::size_t idx : order) {
    const NoiseStamp& stamp = stamps[idx];
    const Element& e = net.element(stamp.element);
    Node pos = 0, neg = 0;
    Complex admittance = 0.0;
    std::visit(Overloaded{
                   [&](const Resistor& r) {
                     pos = r.pos;
                     neg = r.neg;
                     admittance = 1.0 / r.resistance;
                   },
                   [&](const Capacitor& c) {
                     pos = c.pos;
                     neg = c.neg;
                     admittance = Complex(0.0, omega * c.capacitance);
                   },
                   [&](const Vccs& g) {
                     pos = g.out_pos;
                     neg = g.out_neg;
                   },
               },
               e);
    double current_density = 0.0;
    if (const auto* t = std::get_if<ThermalVoltage>(&stamp.source.kind())) {
      const auto& r = std::get<Resistor>(e);
      current_density = thermal_current_density(r.resistance, t->temperature, k);
    } else if (stamp.source.unit() == DensityUnit::AmperePerRootHz) {
      current_density = stamp.source.density(f, k);
    } else {
      current_density = stamp.source.density(f, k) * std::abs(admittance);
    }

    double residual = 0.0;
    const Vector x = solve(lu, sys.a, rhs_for(sys, CurrentInjection{pos, neg, 1.0}), residual);
    if (residual > kResidualLimit) throw TopologyError("noise_solve: numerically singular matrix");
    const Complex transfer = node_voltage(x, net.output_pos()) - node_voltage(x, net.output_neg());
    const double v = std::abs(transfer) * current_density;
    power += v * v;
  }
  return std::sqrt(power);
}

}  // namespace ecmnoise::mna
