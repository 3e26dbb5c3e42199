#include "qsera/grover.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsera/errors.hpp"
#include "qsera/text_format.hpp"

namespace qsera {

OracleSpec OracleSpec::from_polynomial(const MultilinearPoly& u) {
  OracleSpec spec;
  spec.num_vars = u.num_vars();
  for (const auto& [mask, c] : u.terms()) {
    spec.phases[mask] = std::numbers::pi * c;
  }
  return spec;
}

int OracleSpec::max_order() const {
  int order = 0;
  for (const auto& [mask, phi] : phases) order = std::max(order, std::popcount(mask));
  return order;
}

QubitLayout QubitLayout::make(int num_register, int and_ancilla_count) {
  if (num_register < 1) {
    throw InputError("layout needs at least one register qubit, got " +
                     std::to_string(num_register));
  }
  if (and_ancilla_count < 0) {
    throw InputError("AND ancilla count cannot be negative");
  }
  QubitLayout layout;
  layout.num_register = num_register;
  for (int i = 0; i < and_ancilla_count; ++i) {
    layout.and_ancillas.push_back(num_register + i);
  }
  layout.phase_ancilla = num_register + and_ancilla_count;
  return layout;
}

std::vector<int> QubitLayout::register_qubits() const {
  std::vector<int> qubits(num_register);
  for (int i = 0; i < num_register; ++i) qubits[i] = i;
  return qubits;
}

std::vector<int> QubitLayout::all_ancillas() const {
  std::vector<int> qubits = and_ancillas;
  qubits.push_back(phase_ancilla);
  return qubits;
}

int oracle_and_ancillas(const OracleSpec& spec) {
  return std::max(0, spec.max_order() - 2);
}

int diffusion_and_ancillas(int num_register) {
  return std::max(0, num_register - 2);
}

GroverPlan optimal_iterations(long long n_states, bool round_up) {
  if (n_states < 2) {
    throw InputError("iteration planning needs at least 2 states, got " +
                     std::to_string(n_states));
  }
  GroverPlan plan;
  plan.n_states = n_states;
  plan.m_real =
      (std::numbers::pi * std::sqrt(static_cast<double>(n_states)) - 2.0) / 4.0;
  plan.m = static_cast<int>(round_up ? std::ceil(plan.m_real) : std::floor(plan.m_real));
  return plan;
}

Circuit build_uniform_prep(int num_register, int num_qubits) {
  if (num_register < 1) {
    throw InputError("uniform preparation needs at least one register qubit");
  }
  if (num_qubits == 0) num_qubits = num_register;
  if (num_qubits < num_register) {
    throw InputError("circuit width " + std::to_string(num_qubits) +
                     " smaller than register " + std::to_string(num_register));
  }
  Circuit circuit;
  circuit.num_qubits = num_qubits;
  for (int q = 0; q < num_register; ++q) circuit.gates.push_back(GateOp::h(q));
  return circuit;
}

namespace {

// Emits the gates phasing one monomial: compute the AND of the monomial's
// variables onto the phase ancilla, apply P(phi) there, then uncompute.
void emit_phase_block(Circuit& circuit, const QubitLayout& layout, std::uint32_t mask,
                      double phi) {
  const int anc = layout.phase_ancilla;
  std::vector<int> vars;
  for (int i = 0; i < layout.num_register; ++i) {
    if (mask >> i & 1) vars.push_back(i);
  }
  const int order = static_cast<int>(vars.size());

  std::vector<GateOp> compute;
  switch (order) {
    case 0:
      // Constant term: unconditionally visit |1> on the ancilla (global phase).
      compute.push_back(GateOp::x(anc));
      break;
    case 1:
      compute.push_back(GateOp::cx(vars[0], anc));
      break;
    case 2:
      compute.push_back(GateOp::ccx(vars[0], vars[1], anc));
      break;
    default: {
      // AND ladder: fold controls pairwise into successive AND ancillas; the
      // final CCX lands on the phase ancilla, so order j needs j-2 ancillas.
      const auto& ands = layout.and_ancillas;
      compute.push_back(GateOp::ccx(vars[0], vars[1], ands[0]));
      for (int i = 2; i < order - 1; ++i) {
        compute.push_back(GateOp::ccx(vars[i], ands[i - 2], ands[i - 1]));
      }
      compute.push_back(GateOp::ccx(vars[order - 1], ands[order - 3], anc));
      break;
    }
  }

  for (const GateOp& g : compute) circuit.gates.push_back(g);
  circuit.gates.push_back(GateOp::p(anc, phi));
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) {
    circuit.gates.push_back(*it);
  }
}

}  // namespace

Circuit build_oracle_circuit(const OracleSpec& spec, const QubitLayout& layout) {
  if (spec.num_vars != layout.num_register) {
    throw InputError("oracle over " + std::to_string(spec.num_vars) +
                     " variables does not fit a layout with " +
                     std::to_string(layout.num_register) + " register qubits");
  }
  for (const auto& [mask, phi] : spec.phases) {
    if (spec.num_vars < 32 && mask >= (std::uint32_t{1} << spec.num_vars)) {
      throw InputError("oracle monomial mask " + std::to_string(mask) +
                       " uses variables beyond the " + std::to_string(spec.num_vars) +
                       "-qubit register");
    }
  }
  const int needed = oracle_and_ancillas(spec);
  if (static_cast<int>(layout.and_ancillas.size()) < needed) {
    throw ValidationError("layout provides " +
                          std::to_string(layout.and_ancillas.size()) +
                          " AND ancillas but order-" +
                          std::to_string(spec.max_order()) + " monomials need " +
                          std::to_string(needed));
  }

  Circuit circuit;
  circuit.num_qubits = layout.total_qubits();

  // Deterministic emission: ascending monomial order, then ascending mask.
  // All blocks are diagonal and commute, so this fixes only the gate listing.
  std::vector<std::pair<std::uint32_t, double>> monomials(spec.phases.begin(),
                                                          spec.phases.end());
  std::sort(monomials.begin(), monomials.end(), [](const auto& a, const auto& b) {
    const int pa = std::popcount(a.first), pb = std::popcount(b.first);
    return pa != pb ? pa < pb : a.first < b.first;
  });
  for (const auto& [mask, phi] : monomials) {
    if (phi == 0.0) continue;  // P(0) is the identity
    emit_phase_block(circuit, layout, mask, phi);
  }
  return circuit;
}

Circuit build_diffusion(int num_register, const QubitLayout& layout) {
  if (num_register < 2) {
    throw InputError("gate-level diffusion needs at least 2 register qubits, got " +
                     std::to_string(num_register));
  }
  if (num_register != layout.num_register) {
    throw InputError("diffusion register size does not match the layout");
  }
  const int needed = diffusion_and_ancillas(num_register);
  if (static_cast<int>(layout.and_ancillas.size()) < needed) {
    throw ValidationError("layout provides " +
                          std::to_string(layout.and_ancillas.size()) +
                          " AND ancillas but the " + std::to_string(num_register) +
                          "-controlled diffusion phase needs " + std::to_string(needed));
  }

  Circuit circuit;
  circuit.num_qubits = layout.total_qubits();
  auto all_h = [&] {
    for (int q = 0; q < num_register; ++q) circuit.gates.push_back(GateOp::h(q));
  };
  auto all_x = [&] {
    for (int q = 0; q < num_register; ++q) circuit.gates.push_back(GateOp::x(q));
  };

  // H/X conjugation maps "phase flip on z != 0" onto 2|s><s| - I exactly.
  all_h();
  all_x();

  std::vector<GateOp> compute;
  const int anc = layout.phase_ancilla;
  if (num_register == 2) {
    compute.push_back(GateOp::ccx(0, 1, anc));
  } else {
    const auto& ands = layout.and_ancillas;
    compute.push_back(GateOp::ccx(0, 1, ands[0]));
    for (int q = 2; q < num_register - 1; ++q) {
      compute.push_back(GateOp::ccx(q, ands[q - 2], ands[q - 1]));
    }
    compute.push_back(GateOp::ccx(num_register - 1, ands[num_register - 3], anc));
  }
  for (const GateOp& g : compute) circuit.gates.push_back(g);
  // X-Z-X flips the sign of the ancilla's |0> branch: states failing the
  // all-ones test (i.e. z != 0 before the X layer) acquire the -1 phase.
  circuit.gates.push_back(GateOp::x(anc));
  circuit.gates.push_back(GateOp::z(anc));
  circuit.gates.push_back(GateOp::x(anc));
  for (auto it = compute.rbegin(); it != compute.rend(); ++it) {
    circuit.gates.push_back(*it);
  }

  all_x();
  all_h();
  return circuit;
}

DiagonalOracle build_exact_oracle(const Eigen::VectorXd& u_values) {
  if (u_values.size() < 2 ||
      (u_values.size() & (u_values.size() - 1)) != 0) {
    throw InputError("oracle value table length must be a power of two >= 2");
  }
  if (!u_values.allFinite()) {
    throw InputError("oracle values must be finite");
  }
  return DiagonalOracle{u_values};
}

QuantumState apply(QuantumState state, const DiagonalOracle& oracle,
                   int num_register) {
  const std::size_t n_register = std::size_t{1} << num_register;
  if (num_register < 1 || num_register > state.num_qubits ||
      static_cast<std::size_t>(oracle.u_values.size()) != n_register) {
    throw InputError("oracle value table does not match the register size");
  }
  const auto n = static_cast<std::size_t>(state.amplitudes.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t z = i & (n_register - 1);
    state.amplitudes[static_cast<Eigen::Index>(i)] *=
        std::polar(1.0, std::numbers::pi * oracle.u_values[static_cast<Eigen::Index>(z)]);
  }
  return state;
}

QuantumState apply_exact_diffusion(QuantumState state, int num_register) {
  if (num_register < 1 || num_register > state.num_qubits) {
    throw InputError("diffusion register size out of range");
  }
  const std::size_t block = std::size_t{1} << num_register;
  const auto n = static_cast<std::size_t>(state.amplitudes.size());
  for (std::size_t base = 0; base < n; base += block) {
    Complex mean = 0.0;
    for (std::size_t z = 0; z < block; ++z) {
      mean += state.amplitudes[static_cast<Eigen::Index>(base + z)];
    }
    mean /= static_cast<double>(block);
    for (std::size_t z = 0; z < block; ++z) {
      auto& a = state.amplitudes[static_cast<Eigen::Index>(base + z)];
      a = 2.0 * mean - a;
    }
  }
  return state;
}

std::vector<std::pair<double, double>> classical_amplitudes(long long n_states, int m) {
  if (n_states < 2) {
    throw InputError("amplitude recursion needs at least 2 states");
  }
  if (m < 0) {
    throw InputError("iteration count cannot be negative");
  }
  const double n = static_cast<double>(n_states);
  const double root = std::sqrt(n - 1.0);
  std::vector<std::pair<double, double>> series;
  series.reserve(static_cast<std::size_t>(m) + 1);
  double a = root / std::sqrt(n);
  double a_star = 1.0 / std::sqrt(n);
  series.emplace_back(a, a_star);
  for (int k = 0; k < m; ++k) {
    const double a_next = (a * (n - 2.0) - 2.0 * a_star * root) / n;
    const double a_star_next = (2.0 * a * (n - 1.0) + a_star * (n - 2.0) * root) / (n * root);
    a = a_next;
    a_star = a_star_next;
    series.emplace_back(a, a_star);
  }
  return series;
}

std::string circuit_to_text(const Circuit& circuit) {
  std::string out = "qubits " + std::to_string(circuit.num_qubits) + "\n";
  for (const GateOp& g : circuit.gates) {
    switch (g.kind) {
      case GateKind::H: out += "H " + std::to_string(g.q0) + "\n"; break;
      case GateKind::X: out += "X " + std::to_string(g.q0) + "\n"; break;
      case GateKind::Z: out += "Z " + std::to_string(g.q0) + "\n"; break;
      case GateKind::P:
        out += "P " + std::to_string(g.q0) + " " + format_double(g.phi) + "\n";
        break;
      case GateKind::CX:
        out += "CX " + std::to_string(g.q0) + " " + std::to_string(g.q1) + "\n";
        break;
      case GateKind::CCX:
        out += "CCX " + std::to_string(g.q0) + " " + std::to_string(g.q1) + " " +
               std::to_string(g.q2) + "\n";
        break;
    }
  }
  return out;
}

Circuit circuit_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Circuit circuit;
  bool have_header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    std::string token;
    while (fields >> token) tokens.push_back(token);
    if (tokens.empty()) continue;
    const auto at = [&](std::size_t i) -> const std::string& {
      if (i >= tokens.size()) {
        throw InputError("circuit line " + std::to_string(line_no) +
                         " is missing fields: '" + line + "'");
      }
      return tokens[i];
    };
    const auto arity = [&](std::size_t n) {
      if (tokens.size() != n) {
        throw InputError("circuit line " + std::to_string(line_no) +
                         " has wrong field count: '" + line + "'");
      }
    };
    const auto qubit = [&](std::size_t i) {
      const int q = static_cast<int>(parse_integer(at(i)));
      if (have_header && (q < 0 || q >= circuit.num_qubits)) {
        throw InputError("qubit index " + std::to_string(q) + " on circuit line " +
                         std::to_string(line_no) + " is outside the declared " +
                         std::to_string(circuit.num_qubits) + "-qubit width");
      }
      return q;
    };
    const auto distinct = [&](std::initializer_list<int> qs) {
      std::vector<int> sorted(qs);
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("circuit line " + std::to_string(line_no) +
                         " repeats a qubit index: '" + line + "'");
      }
    };

    if (!have_header) {
      arity(2);
      if (at(0) != "qubits") {
        throw InputError("circuit text must start with a 'qubits <Q>' header");
      }
      circuit.num_qubits = qubit(1);
      if (circuit.num_qubits < 1) {
        throw InputError("circuit header declares a non-positive qubit count");
      }
      have_header = true;
      continue;
    }
    const std::string& op = at(0);
    if (op == "H") { arity(2); circuit.gates.push_back(GateOp::h(qubit(1))); }
    else if (op == "X") { arity(2); circuit.gates.push_back(GateOp::x(qubit(1))); }
    else if (op == "Z") { arity(2); circuit.gates.push_back(GateOp::z(qubit(1))); }
    else if (op == "P") { arity(3); circuit.gates.push_back(GateOp::p(qubit(1), parse_double(at(2)))); }
    else if (op == "CX") {
      arity(3);
      const int c = qubit(1), t = qubit(2);
      distinct({c, t});
      circuit.gates.push_back(GateOp::cx(c, t));
    }
    else if (op == "CCX") {
      arity(4);
      const int c1 = qubit(1), c2 = qubit(2), t = qubit(3);
      distinct({c1, c2, t});
      circuit.gates.push_back(GateOp::ccx(c1, c2, t));
    }
    else {
      throw InputError("unknown gate '" + op + "' on circuit line " +
                       std::to_string(line_no));
    }
  }
  if (!have_header) {
    throw InputError("circuit text is empty");
  }
  return circuit;
}

}  // namespace qsera
