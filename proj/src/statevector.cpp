#include "qsera/statevector.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "qsera/errors.hpp"

namespace qsera {

namespace {

constexpr int kMaxQubits = 26;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void check_qubit(const QuantumState& state, int q, const char* role) {
  if (q < 0 || q >= state.num_qubits) {
    throw InputError(std::string(role) + " qubit " + std::to_string(q) +
                     " out of range for " + std::to_string(state.num_qubits) +
                     " qubits");
  }
}

void check_distinct(int a, int b) {
  if (a == b) {
    throw InputError("gate qubits must be distinct, got qubit " + std::to_string(a) +
                     " twice");
  }
}

// Single-qubit pair sweep: visits every (i0, i1 = i0 | 1<<q) amplitude pair.
template <typename PairFn>
void for_each_pair(Eigen::VectorXcd& a, int q, PairFn&& fn) {
  const std::size_t half = std::size_t{1} << q;
  const std::size_t stride = half << 1;
  const auto n = static_cast<std::size_t>(a.size());
  for (std::size_t base = 0; base < n; base += stride) {
    for (std::size_t k = 0; k < half; ++k) {
      fn(a[static_cast<Eigen::Index>(base + k)],
         a[static_cast<Eigen::Index>(base + k + half)]);
    }
  }
}

}  // namespace

QuantumState zero_state(int num_qubits) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw CapacityError("qubit count must be between 1 and " +
                        std::to_string(kMaxQubits) + ", got " +
                        std::to_string(num_qubits));
  }
  QuantumState state;
  state.num_qubits = num_qubits;
  state.amplitudes = Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits);
  state.amplitudes[0] = 1.0;
  return state;
}

QuantumState apply(QuantumState state, const GateOp& gate) {
  Eigen::VectorXcd& a = state.amplitudes;
  switch (gate.kind) {
    case GateKind::H: {
      check_qubit(state, gate.q0, "target");
      for_each_pair(a, gate.q0, [](Complex& a0, Complex& a1) {
        const Complex s = (a0 + a1) * kInvSqrt2;
        const Complex d = (a0 - a1) * kInvSqrt2;
        a0 = s;
        a1 = d;
      });
      break;
    }
    case GateKind::X: {
      check_qubit(state, gate.q0, "target");
      for_each_pair(a, gate.q0, [](Complex& a0, Complex& a1) { std::swap(a0, a1); });
      break;
    }
    case GateKind::Z: {
      check_qubit(state, gate.q0, "target");
      for_each_pair(a, gate.q0, [](Complex&, Complex& a1) { a1 = -a1; });
      break;
    }
    case GateKind::P: {
      check_qubit(state, gate.q0, "target");
      const Complex w = std::polar(1.0, gate.phi);
      for_each_pair(a, gate.q0, [w](Complex&, Complex& a1) { a1 *= w; });
      break;
    }
    case GateKind::CX: {
      check_qubit(state, gate.q0, "control");
      check_qubit(state, gate.q1, "target");
      check_distinct(gate.q0, gate.q1);
      const std::size_t cbit = std::size_t{1} << gate.q0;
      const std::size_t tbit = std::size_t{1} << gate.q1;
      const auto n = static_cast<std::size_t>(a.size());
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) && !(i & tbit)) {
          std::swap(a[static_cast<Eigen::Index>(i)],
                    a[static_cast<Eigen::Index>(i | tbit)]);
        }
      }
      break;
    }
    case GateKind::CCX: {
      check_qubit(state, gate.q0, "control");
      check_qubit(state, gate.q1, "control");
      check_qubit(state, gate.q2, "target");
      check_distinct(gate.q0, gate.q1);
      check_distinct(gate.q0, gate.q2);
      check_distinct(gate.q1, gate.q2);
      const std::size_t c1 = std::size_t{1} << gate.q0;
      const std::size_t c2 = std::size_t{1} << gate.q1;
      const std::size_t tbit = std::size_t{1} << gate.q2;
      const auto n = static_cast<std::size_t>(a.size());
      for (std::size_t i = 0; i < n; ++i) {
        if ((i & c1) && (i & c2) && !(i & tbit)) {
          std::swap(a[static_cast<Eigen::Index>(i)],
                    a[static_cast<Eigen::Index>(i | tbit)]);
        }
      }
      break;
    }
  }
  return state;
}

QuantumState apply_circuit(QuantumState state, const Circuit& circuit) {
  if (circuit.num_qubits != state.num_qubits) {
    throw InputError("circuit over " + std::to_string(circuit.num_qubits) +
                     " qubits cannot run on a " + std::to_string(state.num_qubits) +
                     "-qubit state");
  }
  for (const GateOp& gate : circuit.gates) state = apply(std::move(state), gate);
  return state;
}

Eigen::VectorXd register_probabilities(const QuantumState& state,
                                       const std::vector<int>& register_qubits) {
  std::uint64_t seen = 0;
  for (int q : register_qubits) {
    check_qubit(state, q, "register");
    if (seen & (std::uint64_t{1} << q)) {
      throw InputError("register qubit " + std::to_string(q) + " listed twice");
    }
    seen |= std::uint64_t{1} << q;
  }
  Eigen::VectorXd probs =
      Eigen::VectorXd::Zero(Eigen::Index{1} << register_qubits.size());
  const auto n = static_cast<std::size_t>(state.amplitudes.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < register_qubits.size(); ++j) {
      r |= ((i >> register_qubits[j]) & 1) << j;
    }
    probs[static_cast<Eigen::Index>(r)] +=
        std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
  }
  return probs;
}

double ancilla_ground_probability(const QuantumState& state,
                                  const std::vector<int>& ancilla_qubits) {
  std::size_t mask = 0;
  for (int q : ancilla_qubits) {
    check_qubit(state, q, "ancilla");
    mask |= std::size_t{1} << q;
  }
  double prob = 0.0;
  const auto n = static_cast<std::size_t>(state.amplitudes.size());
  for (std::size_t i = 0; i < n; ++i) {
    if ((i & mask) == 0) {
      prob += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
    }
  }
  return prob;
}

bool equal_up_to_global_phase(const QuantumState& a, const QuantumState& b,
                              double tol) {
  if (a.num_qubits != b.num_qubits) {
    throw InputError("cannot compare states over " + std::to_string(a.num_qubits) +
                     " and " + std::to_string(b.num_qubits) + " qubits");
  }
  Eigen::Index pivot = 0;
  a.amplitudes.cwiseAbs().maxCoeff(&pivot);
  // Phase that rotates b's pivot amplitude onto a's; identity if b vanishes there.
  const Complex overlap = a.amplitudes[pivot] * std::conj(b.amplitudes[pivot]);
  const Complex phase = std::abs(overlap) == 0.0 ? Complex{1.0, 0.0}
                                                 : overlap / std::abs(overlap);
  return (a.amplitudes - phase * b.amplitudes).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace qsera
