#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qsera {

using Complex = std::complex<double>;

// Exact statevector over register + ancilla qubits. Basis indexing is
// little-endian: bit q of an amplitude index is the value of qubit q, so a
// register bitstring b_{K-1}...b_1b_0 reads right-to-left from the index.
struct QuantumState {
  int num_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

enum class GateKind { H, X, Z, P, CX, CCX };

// One primitive gate application. Index roles depend on the kind:
//   H/X/Z/P: q0 = target (P also carries phi);
//   CX:  q0 = control, q1 = target;
//   CCX: q0, q1 = controls, q2 = target.
struct GateOp {
  GateKind kind{};
  int q0 = -1;
  int q1 = -1;
  int q2 = -1;
  double phi = 0.0;

  static GateOp h(int q) { return {GateKind::H, q}; }
  static GateOp x(int q) { return {GateKind::X, q}; }
  static GateOp z(int q) { return {GateKind::Z, q}; }
  static GateOp p(int q, double phi) { return {GateKind::P, q, -1, -1, phi}; }
  static GateOp cx(int control, int target) { return {GateKind::CX, control, target}; }
  static GateOp ccx(int control1, int control2, int target) {
    return {GateKind::CCX, control1, control2, target};
  }
};

// Ordered gate sequence over a fixed qubit count.
struct Circuit {
  int num_qubits = 0;
  std::vector<GateOp> gates;
};

// |0...0> over num_qubits qubits; capped at a desk-scale 26 qubits.
QuantumState zero_state(int num_qubits);

// Applies one gate (unitary on the named qubits, identity elsewhere).
// In-place stride updates over the amplitude array, O(2^Q) per gate.
QuantumState apply(QuantumState state, const GateOp& gate);

// Applies every gate of the circuit in order.
QuantumState apply_circuit(QuantumState state, const Circuit& circuit);

// Marginal probability of each bitstring over the listed qubits (bit j of the
// output index = qubit register_qubits[j]), summed over all other qubits.
Eigen::VectorXd register_probabilities(const QuantumState& state,
                                       const std::vector<int>& register_qubits);

// Probability that every listed qubit measures 0.
double ancilla_ground_probability(const QuantumState& state,
                                  const std::vector<int>& ancilla_qubits);

// True iff max_z |a_z - e^{i theta} b_z| <= tol, with theta chosen to align
// b with a at a's largest-magnitude amplitude.
bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b, double tol);

}  // namespace qsera
