#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsera/multilinear_poly.hpp"
#include "qsera/statevector.hpp"

namespace qsera {

// Phase oracle specification: one phase per monomial of u_n, phi_S = pi * c_S.
// The constant term (S = 0) contributes a pure global phase but is still
// synthesized, so circuit comparisons go through equal_up_to_global_phase.
struct OracleSpec {
  int num_vars = 0;
  std::map<std::uint32_t, double> phases;

  static OracleSpec from_polynomial(const MultilinearPoly& u);
  // Highest monomial order carrying a phase.
  int max_order() const;
};

// Qubit assignment for the synthesized circuits: register qubits 0..K-1, then
// AND ancillas, then the phase ancilla, contiguous.
struct QubitLayout {
  int num_register = 0;
  std::vector<int> and_ancillas;
  int phase_ancilla = -1;

  static QubitLayout make(int num_register, int and_ancilla_count);
  int total_qubits() const { return num_register + int(and_ancillas.size()) + 1; }
  std::vector<int> register_qubits() const;
  // AND ancillas plus the phase ancilla (everything that must return to |0>).
  std::vector<int> all_ancillas() const;
};

// AND ancillas needed to phase an order-j monomial: the first CCX merges two
// controls, each later CCX folds in one more, and the last one targets the
// phase ancilla — so max(0, j - 2).
int oracle_and_ancillas(const OracleSpec& spec);
// The diffusion's K-controlled phase uses the same ladder over all K register
// qubits: max(0, K - 2).
int diffusion_and_ancillas(int num_register);

// Iteration plan: m_real = (pi*sqrt(N) - 2)/4, chosen m = floor by default
// (ceil on request); both roundings are legitimate and exposed.
struct GroverPlan {
  long long n_states = 0;
  double m_real = 0.0;
  int m = 0;
};
GroverPlan optimal_iterations(long long n_states, bool round_up = false);

// K Hadamards on the register qubits. num_qubits widens the circuit so it can
// run on a state that also carries ancillas; 0 means register-only.
Circuit build_uniform_prep(int num_register, int num_qubits = 0);

// Gate-level phase oracle: per monomial (ascending order, then mask), phase
// the ancilla via X-P-X (constant), CX-P-CX (order 1), CCX-P-CCX (order 2), or
// a CCX AND-ladder with exact uncomputation (order >= 3).
Circuit build_oracle_circuit(const OracleSpec& spec, const QubitLayout& layout);

// Gate-level diffusion 2|+..+><+..+| - I on the register: H / X conjugation
// around a CCX-ladder-controlled X-Z-X on the phase ancilla.
Circuit build_diffusion(int num_register, const QubitLayout& layout);

// Reference oracle bypassing gate synthesis: multiplies the amplitude of each
// register state z by e^{i pi u_values[z]}, identity on ancillas.
struct DiagonalOracle {
  Eigen::VectorXd u_values;
};
DiagonalOracle build_exact_oracle(const Eigen::VectorXd& u_values);
QuantumState apply(QuantumState state, const DiagonalOracle& oracle,
                   int num_register);

// Reference diffusion: inversion about the mean on the register (per ancilla
// configuration), exactly 2|s><s| - I.
QuantumState apply_exact_diffusion(QuantumState state, int num_register);

// Ideal-oracle amplitude recursion: returns (a_k, a_{*k}) for k = 0..m with
//   a_0 = sqrt(N-1)/sqrt(N), a_{*0} = 1/sqrt(N),
//   a_{k+1}   = (a_k (N-2) - 2 a_{*k} sqrt(N-1)) / N,
//   a_{*k+1}  = (2 a_k (N-1) + a_{*k} (N-2) sqrt(N-1)) / (N sqrt(N-1)).
std::vector<std::pair<double, double>> classical_amplitudes(long long n_states, int m);

// Line-oriented circuit text: header "qubits <Q>", then one gate per line
// ("H 0", "P 6 1.5707963267948966", "CCX 0 1 4"); phases use the shortest
// round-trip decimal form.
std::string circuit_to_text(const Circuit& circuit);
Circuit circuit_from_text(const std::string& text);

}  // namespace qsera
