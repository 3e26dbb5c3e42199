#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qsera/errors.hpp"
#include "qsera/statevector.hpp"

using namespace qsera;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

QuantumState random_state(int num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  QuantumState state = zero_state(num_qubits);
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    state.amplitudes[i] = Complex(gauss(rng), gauss(rng));
  }
  state.amplitudes.normalize();
  return state;
}

double max_amplitude_distance(const QuantumState& a, const QuantumState& b) {
  return (a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("zero_state basics and capacity") {
  const QuantumState one = zero_state(1);
  REQUIRE(one.amplitudes.size() == 2);
  CHECK(one.amplitudes[0] == Complex(1.0, 0.0));
  CHECK(one.amplitudes[1] == Complex(0.0, 0.0));

  const QuantumState three = zero_state(3);
  REQUIRE(three.amplitudes.size() == 8);
  CHECK(three.amplitudes[0] == Complex(1.0, 0.0));
  CHECK(three.amplitudes.tail(7).cwiseAbs().maxCoeff() == 0.0);

  for (int q = 1; q <= 10; ++q) {
    CHECK(zero_state(q).amplitudes.norm() == doctest::Approx(1.0).epsilon(1e-15));
  }

  CHECK_THROWS_AS(zero_state(0), CapacityError);
  CHECK_THROWS_AS(zero_state(27), CapacityError);
}

TEST_CASE("single-qubit gates: H, P(pi) = Z") {
  QuantumState plus = apply(zero_state(1), GateOp::h(0));
  CHECK(plus.amplitudes[0].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));
  CHECK(plus.amplitudes[1].real() == doctest::Approx(kInvSqrt2).epsilon(1e-15));

  QuantumState one = apply(zero_state(1), GateOp::x(0));
  const QuantumState via_p = apply(one, GateOp::p(0, std::numbers::pi));
  const QuantumState via_z = apply(one, GateOp::z(0));
  CHECK(max_amplitude_distance(via_p, via_z) < 1e-15);
  CHECK(via_p.amplitudes[1].real() == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("toffoli truth table") {
  // |110>: qubits 1 and 2 set (little-endian index 0b110), target qubit 0.
  QuantumState state = zero_state(3);
  state = apply(state, GateOp::x(1));
  state = apply(state, GateOp::x(2));
  state = apply(state, GateOp::ccx(1, 2, 0));
  CHECK(state.amplitudes[0b111] == Complex(1.0, 0.0));

  // Controls not both set: no flip.
  QuantumState idle = apply(zero_state(3), GateOp::x(1));
  idle = apply(idle, GateOp::ccx(1, 2, 0));
  CHECK(idle.amplitudes[0b010] == Complex(1.0, 0.0));
}

TEST_CASE("gate index validation") {
  QuantumState state = zero_state(2);
  CHECK_THROWS_AS(apply(state, GateOp::h(2)), InputError);
  CHECK_THROWS_AS(apply(state, GateOp::h(-1)), InputError);
  CHECK_THROWS_AS(apply(state, GateOp::cx(0, 0)), InputError);
  CHECK_THROWS_AS(apply(state, GateOp::ccx(0, 1, 1)), InputError);
  CHECK_THROWS_AS(apply(state, GateOp::ccx(0, 0, 1)), InputError);
}

TEST_CASE("apply_circuit: empty, H twice, X then CX") {
  std::mt19937_64 rng(17);
  const QuantumState start = random_state(3, rng);
  CHECK(max_amplitude_distance(apply_circuit(start, Circuit{3, {}}), start) == 0.0);

  const Circuit double_h{3, {GateOp::h(1), GateOp::h(1)}};
  CHECK(max_amplitude_distance(apply_circuit(start, double_h), start) < 1e-12);

  const Circuit entangle{2, {GateOp::x(0), GateOp::cx(0, 1)}};
  const QuantumState bell_input = apply_circuit(zero_state(2), entangle);
  CHECK(bell_input.amplitudes[0b11] == Complex(1.0, 0.0));

  CHECK_THROWS_AS(apply_circuit(zero_state(2), Circuit{3, {GateOp::h(0)}}), InputError);
}

TEST_CASE("involutions on random states") {
  std::mt19937_64 rng(29);
  const QuantumState start = random_state(4, rng);
  const std::vector<Circuit> involutions = {
      {4, {GateOp::h(2), GateOp::h(2)}},
      {4, {GateOp::x(1), GateOp::x(1)}},
      {4, {GateOp::z(3), GateOp::z(3)}},
      {4, {GateOp::cx(0, 2), GateOp::cx(0, 2)}},
      {4, {GateOp::ccx(1, 3, 0), GateOp::ccx(1, 3, 0)}},
  };
  for (const Circuit& circuit : involutions) {
    CHECK(max_amplitude_distance(apply_circuit(start, circuit), start) < 1e-12);
  }
}

TEST_CASE("phase additivity") {
  std::mt19937_64 rng(37);
  const QuantumState start = random_state(3, rng);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double a = angle(rng);
    const double b = angle(rng);
    const QuantumState split =
        apply(apply(start, GateOp::p(1, a)), GateOp::p(1, b));
    const QuantumState joint = apply(start, GateOp::p(1, a + b));
    CHECK(max_amplitude_distance(split, joint) < 1e-12);
  }
}

TEST_CASE("norm preserved across ten thousand random gates") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> qubit(0, 5);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_real_distribution<double> angle(-6.0, 6.0);

  QuantumState state = apply_circuit(
      zero_state(6), Circuit{6, {GateOp::h(0), GateOp::h(1), GateOp::h(2)}});
  for (int step = 0; step < 10000; ++step) {
    const int q0 = qubit(rng);
    int q1 = qubit(rng);
    while (q1 == q0) q1 = qubit(rng);
    int q2 = qubit(rng);
    while (q2 == q0 || q2 == q1) q2 = qubit(rng);
    switch (kind(rng)) {
      case 0: state = apply(state, GateOp::h(q0)); break;
      case 1: state = apply(state, GateOp::x(q0)); break;
      case 2: state = apply(state, GateOp::z(q0)); break;
      case 3: state = apply(state, GateOp::p(q0, angle(rng))); break;
      case 4: state = apply(state, GateOp::cx(q0, q1)); break;
      default: state = apply(state, GateOp::ccx(q0, q1, q2)); break;
    }
  }
  CHECK(std::abs(state.amplitudes.norm() - 1.0) < 1e-9);
}

TEST_CASE("register_probabilities: marginals and validation") {
  // Full register of |00>.
  const Eigen::VectorXd ground = register_probabilities(zero_state(2), {0});
  REQUIRE(ground.size() == 2);
  CHECK(ground[0] == doctest::Approx(1.0));
  CHECK(ground[1] == doctest::Approx(0.0));

  // Uniform two-qubit state.
  const QuantumState uniform =
      apply_circuit(zero_state(2), Circuit{2, {GateOp::h(0), GateOp::h(1)}});
  const Eigen::VectorXd flat = register_probabilities(uniform, {0, 1});
  for (int z = 0; z < 4; ++z) CHECK(flat[z] == doctest::Approx(0.25).epsilon(1e-12));

  // Bell pair: marginal of either half is uniform.
  const QuantumState bell =
      apply_circuit(zero_state(2), Circuit{2, {GateOp::h(0), GateOp::cx(0, 1)}});
  const Eigen::VectorXd half = register_probabilities(bell, {0});
  CHECK(half[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(half[1] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(register_probabilities(bell, {0, 0}), InputError);
  CHECK_THROWS_AS(register_probabilities(bell, {0, 2}), InputError);
}

TEST_CASE("register_probabilities: bit j of the output index is qubit list[j]") {
  // Put qubit 2 into |1>, then read registers [2, 0]: output bit 0 <- qubit 2.
  QuantumState state = apply(zero_state(3), GateOp::x(2));
  const Eigen::VectorXd probs = register_probabilities(state, {2, 0});
  CHECK(probs[0b01] == doctest::Approx(1.0));
}

TEST_CASE("register marginal sums to one for random states and registers") {
  std::mt19937_64 rng(43);
  const QuantumState state = random_state(5, rng);
  const std::vector<std::vector<int>> registers = {{0}, {4, 2}, {1, 3, 0}, {0, 1, 2, 3, 4}};
  for (const auto& reg : registers) {
    CHECK(register_probabilities(state, reg).sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ancilla_ground_probability") {
  CHECK(ancilla_ground_probability(zero_state(3), {1, 2}) == doctest::Approx(1.0));
  const QuantumState flipped = apply(zero_state(3), GateOp::x(2));
  CHECK(ancilla_ground_probability(flipped, {2}) == doctest::Approx(0.0));
  CHECK(ancilla_ground_probability(flipped, {0, 1}) == doctest::Approx(1.0));

  const QuantumState half = apply(zero_state(2), GateOp::h(1));
  CHECK(ancilla_ground_probability(half, {1}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("equal_up_to_global_phase") {
  std::mt19937_64 rng(53);
  const QuantumState a = random_state(3, rng);
  CHECK(equal_up_to_global_phase(a, a, 0.0));

  QuantumState rotated = a;
  rotated.amplitudes *= std::polar(1.0, std::numbers::pi / 3.0);
  CHECK(equal_up_to_global_phase(a, rotated, 1e-12));

  // A single relative phase of pi is not a global phase.
  QuantumState twisted = a;
  twisted.amplitudes[5] *= -1.0;
  CHECK_FALSE(equal_up_to_global_phase(a, twisted, 1e-6));

  CHECK_THROWS_AS(equal_up_to_global_phase(a, zero_state(2), 1e-9), InputError);
}
