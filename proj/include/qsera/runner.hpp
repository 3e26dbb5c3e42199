#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsera/grover.hpp"
#include "qsera/multilinear_poly.hpp"
#include "qsera/portfolio.hpp"
#include "qsera/statevector.hpp"

namespace qsera {

// How many amplification rounds to run: the planner's floor (default), its
// ceiling, or a caller-chosen count.
enum class IterationRule { AutoFloor, AutoCeil, Explicit };

struct IterationChoice {
  IterationRule rule = IterationRule::AutoFloor;
  int count = 0;  // only read when rule == Explicit

  static IterationChoice auto_floor() { return {IterationRule::AutoFloor, 0}; }
  static IterationChoice auto_ceil() { return {IterationRule::AutoCeil, 0}; }
  static IterationChoice exactly(int m) { return {IterationRule::Explicit, m}; }
};

// Oracle backend: full gate synthesis (register + AND ancillas + phase
// ancilla) or the exact diagonal reference (register only).
enum class OracleKind { GateCircuit, ExactDiagonal };

// One end-to-end amplification job: objective f, the rescaling that turns it
// into g in [0, 1], the sharpening power n, the round count and the backend.
struct QseraConfig {
  MultilinearPoly objective{1};
  RescaleMode mode = RescaleMode::Minimise;
  double f_min_est = 0.0;
  double f_max_est = 1.0;
  int n_power = 1;
  IterationChoice iterations;
  OracleKind oracle = OracleKind::GateCircuit;
};

struct RunResult {
  int num_vars = 0;
  int n_power = 1;
  int m = 0;            // rounds actually run
  double m_real = 0.0;  // (pi sqrt(N) - 2) / 4
  int total_qubits = 0;
  OracleKind oracle = OracleKind::GateCircuit;
  Eigen::VectorXd u_values;       // u_n(z) = g(z)^n over all register states
  Eigen::VectorXd probabilities;  // register marginals, index = assignment
  std::uint32_t top_state = 0;    // highest probability, ties to lowest mask
  std::uint32_t runner_up = 0;    // second highest, ties to lowest mask
  double ancilla_ground_prob = 1.0;
  QuantumState final_state;  // full simulator state (ancillas included)
};

// Runs the pipeline: rescale, raise to the n-th power, synthesize the chosen
// oracle, amplify m rounds, measure. Throws InputError for out-of-domain
// parameters, ValidationError/CapacityError for degenerate rescales and
// oversize registers.
RunResult run(const QseraConfig& config);

// The assignment classical search would report: argmin f (Minimise),
// argmax f (Maximise) or argmin f^2 (RootFind), ties to the lowest mask.
std::uint32_t classical_target(const MultilinearPoly& objective, RescaleMode mode);

// Probability of the classical target after a run at each n in
// [n_min, n_max]; every other config field is taken from base.
struct SweepPoint {
  int n = 0;
  double probability = 0.0;
};
std::vector<SweepPoint> sweep_power(const QseraConfig& base, int n_min, int n_max);
std::string sweep_to_csv(const std::vector<SweepPoint>& points);

// Samples shot outcomes from the register distribution with a fixed-seed
// generator, so equal seeds give identical counts on every platform.
std::map<std::string, std::uint64_t> sample_counts(const RunResult& result,
                                                   std::uint64_t shots,
                                                   std::uint64_t seed);

// Result JSON: {"probabilities": {bitstring: p}, "top_state", "runner_up",
// "m", "n", "ancilla_ground_prob"} plus optional "counts" and "state"
// ([re, im] pairs in amplitude index order).
std::string run_result_to_json(const RunResult& result,
                               const std::map<std::string, std::uint64_t>* counts = nullptr,
                               bool include_state = false);

// Distribution CSV: bitstring,probability for every register state in index
// order.
std::string distribution_to_csv(const RunResult& result);

// Uniform endpoint-inclusive sampling of a one-variable objective h on
// [lo, hi]: grid y_z = lo + z (hi - lo) / (count - 1), point values h(y_z),
// and their exact multilinear interpolant over the index bits.
struct DiscretizedObjective {
  Eigen::VectorXd grid;
  Eigen::VectorXd values;
  MultilinearPoly objective{1};
};
DiscretizedObjective discretize_continuous(const std::function<double(double)>& h,
                                           double lo, double hi, int num_samples);

// The built-in case study, ready to run: four-asset objective, Minimise
// rescale over [0, 0.015], n = 24, planner floor, gate-circuit oracle.
QseraConfig case_study_config();

// Expansion report: the f, g and u_n polynomials of the config. With
// include_reference (the case-study preset), adds a row-by-row comparison
// against the tabulated reference coefficients (f at 1e-4 resolution, g at
// 1e-2, u_24 at 1e-1; u rows are only comparable when n == 24).
std::string expansion_report_json(const QseraConfig& config, bool include_reference);

// Ideal-oracle demonstration: a single marked state out of 2^k, tracked for
// k = 0..m rounds by the amplitude recursion and by full gate simulation.
struct DemoRow {
  int k = 0;
  double a_other = 0.0;  // recursion: shared amplitude of unmarked states
  double a_target = 0.0;
  double p_target = 0.0;
  double sim_a_other = 0.0;  // gate simulation of the same quantities
  double sim_a_target = 0.0;
  double sim_p_target = 0.0;
};
std::vector<DemoRow> grover_demo_rows(int num_register, std::uint32_t target, int m);
std::string demo_rows_to_csv(const std::vector<DemoRow>& rows);
// Largest |recursion - simulation| across all columns and rows.
double demo_max_deviation(const std::vector<DemoRow>& rows);

// Diagnostics to stderr, enabled by QSERA_LOG=info (info only) or
// QSERA_LOG=debug (debug and info). Never writes to stdout.
enum class LogLevel { Debug = 0, Info = 1 };
bool log_enabled(LogLevel level);
void log_line(LogLevel level, const std::string& message);

}  // namespace qsera
