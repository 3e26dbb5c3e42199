#include "qsera/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsera/errors.hpp"
#include "qsera/text_format.hpp"

namespace qsera {

namespace {

constexpr int kMaxCircuitVars = 12;  // gate synthesis: register + ancillas
constexpr int kMaxExactVars = 20;    // exact diagonal: register only

int log_threshold() {
  const char* env = std::getenv("QSERA_LOG");
  if (env == nullptr) return 2;
  const std::string value(env);
  if (value == "debug") return 0;
  if (value == "info") return 1;
  return 2;
}

// Top and runner-up register states, ties broken toward the lowest mask by
// strict comparison in index order.
std::pair<std::uint32_t, std::uint32_t> rank_states(const Eigen::VectorXd& p) {
  std::uint32_t top = 0;
  for (Eigen::Index z = 1; z < p.size(); ++z) {
    if (p[z] > p[top]) top = static_cast<std::uint32_t>(z);
  }
  std::uint32_t runner = (top == 0) ? 1 : 0;
  for (Eigen::Index z = 0; z < p.size(); ++z) {
    const auto zu = static_cast<std::uint32_t>(z);
    if (zu != top && p[z] > p[runner]) runner = zu;
  }
  return {top, runner};
}

}  // namespace

bool log_enabled(LogLevel level) {
  return static_cast<int>(level) >= log_threshold();
}

void log_line(LogLevel level, const std::string& message) {
  if (log_enabled(level)) std::cerr << "[qsera] " << message << '\n';
}

RunResult run(const QseraConfig& config) {
  if (config.n_power < 1) {
    throw InputError("sharpening power n must be a positive integer");
  }
  if (config.iterations.rule == IterationRule::Explicit && config.iterations.count < 0) {
    throw InputError("iteration count must be nonnegative");
  }
  const int k = config.objective.num_vars();
  if (config.oracle == OracleKind::GateCircuit && k > kMaxCircuitVars) {
    throw CapacityError("gate synthesis supports at most " +
                        std::to_string(kMaxCircuitVars) + " register qubits, got " +
                        std::to_string(k));
  }
  if (config.oracle == OracleKind::ExactDiagonal && k > kMaxExactVars) {
    throw CapacityError("exact backend supports at most " +
                        std::to_string(kMaxExactVars) + " register qubits, got " +
                        std::to_string(k));
  }

  const MultilinearPoly g =
      rescale(config.objective, config.mode, config.f_min_est, config.f_max_est);
  const long long n_states = 1LL << k;
  const GroverPlan plan =
      optimal_iterations(n_states, config.iterations.rule == IterationRule::AutoCeil);
  const int m = (config.iterations.rule == IterationRule::Explicit)
                    ? config.iterations.count
                    : plan.m;

  RunResult result;
  result.num_vars = k;
  result.n_power = config.n_power;
  result.m = m;
  result.m_real = plan.m_real;
  result.oracle = config.oracle;

  if (config.oracle == OracleKind::GateCircuit) {
    const MultilinearPoly u = power(g, config.n_power);
    result.u_values = evaluate_all(u);
    const OracleSpec spec = OracleSpec::from_polynomial(u);
    const int and_count = std::max(oracle_and_ancillas(spec), diffusion_and_ancillas(k));
    const QubitLayout layout = QubitLayout::make(k, and_count);
    result.total_qubits = layout.total_qubits();
    log_line(LogLevel::Info, "run: K=" + std::to_string(k) + " n=" +
                                 std::to_string(config.n_power) + " m=" + std::to_string(m) +
                                 " oracle=circuit qubits=" +
                                 std::to_string(layout.total_qubits()));

    QuantumState state = zero_state(layout.total_qubits());
    state = apply_circuit(std::move(state), build_uniform_prep(k, layout.total_qubits()));
    if (m > 0) {
      const Circuit oracle_circuit = build_oracle_circuit(spec, layout);
      const Circuit diffusion = build_diffusion(k, layout);
      for (int round = 0; round < m; ++round) {
        state = apply_circuit(std::move(state), oracle_circuit);
        state = apply_circuit(std::move(state), diffusion);
        if (log_enabled(LogLevel::Debug)) {
          const Eigen::VectorXd probs =
              register_probabilities(state, layout.register_qubits());
          log_line(LogLevel::Debug,
                   "round " + std::to_string(round + 1) +
                       ": max register probability " + format_double(probs.maxCoeff()));
        }
      }
    }
    result.probabilities = register_probabilities(state, layout.register_qubits());
    result.ancilla_ground_prob = ancilla_ground_probability(state, layout.all_ancillas());
    result.final_state = std::move(state);
  } else {
    const Eigen::VectorXd g_values = evaluate_all(g);
    Eigen::VectorXd u_values(n_states);
    for (long long z = 0; z < n_states; ++z) {
      u_values[z] = std::pow(g_values[z], config.n_power);
    }
    result.u_values = u_values;
    result.total_qubits = k;
    log_line(LogLevel::Info, "run: K=" + std::to_string(k) + " n=" +
                                 std::to_string(config.n_power) + " m=" + std::to_string(m) +
                                 " oracle=exact qubits=" + std::to_string(k));

    QuantumState state = zero_state(k);
    state = apply_circuit(std::move(state), build_uniform_prep(k));
    const DiagonalOracle oracle = build_exact_oracle(u_values);
    for (int round = 0; round < m; ++round) {
      state = apply(std::move(state), oracle, k);
      state = apply_exact_diffusion(std::move(state), k);
      if (log_enabled(LogLevel::Debug)) {
        log_line(LogLevel::Debug,
                 "round " + std::to_string(round + 1) + ": max register probability " +
                     format_double(state.amplitudes.cwiseAbs2().maxCoeff()));
      }
    }
    result.probabilities = state.amplitudes.cwiseAbs2();
    result.ancilla_ground_prob = 1.0;
    result.final_state = std::move(state);
  }

  const auto [top, runner] = rank_states(result.probabilities);
  result.top_state = top;
  result.runner_up = runner;
  log_line(LogLevel::Info,
           "run: top " + bitstring(top, k) + " p=" +
               format_double(result.probabilities[top]) + ", runner-up " +
               bitstring(runner, k) + " p=" + format_double(result.probabilities[runner]));
  return result;
}

std::uint32_t classical_target(const MultilinearPoly& objective, RescaleMode mode) {
  const Eigen::VectorXd f = evaluate_all(objective);
  const auto score = [&](Eigen::Index z) {
    switch (mode) {
      case RescaleMode::Maximise:
        return -f[z];
      case RescaleMode::Minimise:
        return f[z];
      case RescaleMode::RootFind:
        return f[z] * f[z];
    }
    throw InputError("unknown rescale mode");
  };
  std::uint32_t best = 0;
  for (Eigen::Index z = 1; z < f.size(); ++z) {
    if (score(z) < score(best)) best = static_cast<std::uint32_t>(z);
  }
  return best;
}

std::vector<SweepPoint> sweep_power(const QseraConfig& base, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) {
    throw InputError("sweep range needs 1 <= n-min <= n-max");
  }
  const std::uint32_t target = classical_target(base.objective, base.mode);
  log_line(LogLevel::Info, "sweep: target state " + bitstring(target, base.objective.num_vars()) +
                               ", n in [" + std::to_string(n_min) + ", " +
                               std::to_string(n_max) + "]");
  std::vector<SweepPoint> points;
  points.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (int n = n_min; n <= n_max; ++n) {
    QseraConfig config = base;
    config.n_power = n;
    const RunResult result = run(config);
    points.push_back({n, result.probabilities[target]});
  }
  return points;
}

std::string sweep_to_csv(const std::vector<SweepPoint>& points) {
  std::string out = "n,probability\n";
  for (const auto& point : points) {
    out += std::to_string(point.n) + ',' + format_double(point.probability) + '\n';
  }
  return out;
}

std::map<std::string, std::uint64_t> sample_counts(const RunResult& result,
                                                   std::uint64_t shots,
                                                   std::uint64_t seed) {
  std::vector<double> cdf(static_cast<std::size_t>(result.probabilities.size()));
  double acc = 0.0;
  for (std::size_t z = 0; z < cdf.size(); ++z) {
    acc += result.probabilities[static_cast<Eigen::Index>(z)];
    cdf[z] = acc;
  }
  // Uniform draws in [0, acc): 53-bit mantissa construction keeps the stream
  // identical across platforms, unlike distribution adapters.
  std::mt19937_64 rng(seed);
  std::map<std::string, std::uint64_t> counts;
  for (std::uint64_t shot = 0; shot < shots; ++shot) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    const auto z = static_cast<std::uint32_t>(it - cdf.begin());
    ++counts[bitstring(z, result.num_vars)];
  }
  return counts;
}

std::string run_result_to_json(const RunResult& result,
                               const std::map<std::string, std::uint64_t>* counts,
                               bool include_state) {
  nlohmann::ordered_json j;
  auto& probs = j["probabilities"];
  probs = nlohmann::ordered_json::object();
  for (Eigen::Index z = 0; z < result.probabilities.size(); ++z) {
    probs[bitstring(static_cast<std::uint32_t>(z), result.num_vars)] =
        result.probabilities[z];
  }
  j["top_state"] = bitstring(result.top_state, result.num_vars);
  j["runner_up"] = bitstring(result.runner_up, result.num_vars);
  j["m"] = result.m;
  j["n"] = result.n_power;
  j["ancilla_ground_prob"] = result.ancilla_ground_prob;
  if (counts != nullptr) {
    auto& c = j["counts"];
    c = nlohmann::ordered_json::object();
    for (const auto& [bits, count] : *counts) c[bits] = count;
  }
  if (include_state) {
    auto& state = j["state"];
    state = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < result.final_state.amplitudes.size(); ++i) {
      const Complex amp = result.final_state.amplitudes[i];
      state.push_back({amp.real(), amp.imag()});
    }
  }
  return j.dump(2);
}

std::string distribution_to_csv(const RunResult& result) {
  std::string out = "bitstring,probability\n";
  for (Eigen::Index z = 0; z < result.probabilities.size(); ++z) {
    out += bitstring(static_cast<std::uint32_t>(z), result.num_vars) + ',' +
           format_double(result.probabilities[z]) + '\n';
  }
  return out;
}

DiscretizedObjective discretize_continuous(const std::function<double(double)>& h,
                                           double lo, double hi, int num_samples) {
  if (num_samples < 2 || (num_samples & (num_samples - 1)) != 0) {
    throw InputError("sample count must be a power of two, at least 2");
  }
  if (!(lo < hi)) {
    throw InputError("sampling interval needs lo < hi");
  }
  DiscretizedObjective out;
  out.grid.resize(num_samples);
  out.values.resize(num_samples);
  for (int z = 0; z < num_samples; ++z) {
    const double y = lo + (hi - lo) * z / (num_samples - 1);
    const double value = h(y);
    if (!std::isfinite(value)) {
      throw InputError("objective sample at y=" + format_double(y) + " is not finite");
    }
    out.grid[z] = y;
    out.values[z] = value;
  }
  out.objective = from_point_values(out.values);
  return out;
}

QseraConfig case_study_config() {
  QseraConfig config;
  config.objective = objective_to_polynomial(case_study_problem());
  config.mode = RescaleMode::Minimise;
  config.f_min_est = 0.0;
  config.f_max_est = 0.015;
  config.n_power = 24;
  config.iterations = IterationChoice::auto_floor();
  config.oracle = OracleKind::GateCircuit;
  return config;
}

namespace {

// Tabulated values carry fixed resolutions; a row matches when the computed
// coefficient rounds to the same grid point (half away from zero).
bool matches_at_resolution(double computed, double reference, double resolution) {
  return std::llround(computed / resolution) == std::llround(reference / resolution);
}

}  // namespace

std::string expansion_report_json(const QseraConfig& config, bool include_reference) {
  if (config.n_power < 1) {
    throw InputError("sharpening power n must be a positive integer");
  }
  const MultilinearPoly& f = config.objective;
  const MultilinearPoly g = rescale(f, config.mode, config.f_min_est, config.f_max_est);
  const MultilinearPoly u = power(g, config.n_power);

  nlohmann::ordered_json j;
  j["n"] = config.n_power;
  j["f"] = nlohmann::ordered_json::parse(polynomial_to_json(f));
  j["g"] = nlohmann::ordered_json::parse(polynomial_to_json(g));
  j["u_n"] = nlohmann::ordered_json::parse(polynomial_to_json(u));
  if (!include_reference) {
    return j.dump(2);
  }

  int f_matches = 0, g_matches = 0, u_matches = 0;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& ref : case_study_reference_coefficients()) {
    nlohmann::ordered_json row;
    row["subset"] = bitstring(ref.subset, f.num_vars());
    row["computed_f"] = f.coeff(ref.subset);
    row["reference_f"] = ref.f;
    const bool f_match = matches_at_resolution(f.coeff(ref.subset), ref.f, 1e-4);
    row["f_match"] = f_match;
    f_matches += f_match;
    row["computed_g"] = g.coeff(ref.subset);
    row["reference_g"] = ref.g;
    const bool g_match = matches_at_resolution(g.coeff(ref.subset), ref.g, 1e-2);
    row["g_match"] = g_match;
    g_matches += g_match;
    row["computed_u"] = u.coeff(ref.subset);
    row["reference_u24"] = ref.u24;
    if (config.n_power == 24) {
      const bool u_match = matches_at_resolution(u.coeff(ref.subset), ref.u24, 1e-1);
      row["u_match"] = u_match;
      u_matches += u_match;
    } else {
      row["u_match"] = nullptr;  // reference column is the n = 24 expansion
    }
    rows.push_back(std::move(row));
  }
  j["reference_comparison"] = std::move(rows);

  const int row_count = static_cast<int>(case_study_reference_coefficients().size());
  std::vector<std::string> notes;
  notes.push_back("f column: " + std::to_string(f_matches) + "/" +
                  std::to_string(row_count) +
                  " tabulated coefficients match the objective expansion at 1e-4 resolution");
  notes.push_back("g column: " + std::to_string(g_matches) + "/" +
                  std::to_string(row_count) +
                  " tabulated coefficients match the rescaled expansion at 1e-2 resolution");
  notes.push_back(
      "constant term: computed g has " + format_double(g.coeff(0)) +
      " where the table lists 0.81; 0.81 reproduces (0.015 - 0.0028) / 0.015 from the "
      "table's own f column rather than the objective formula");
  if (config.n_power == 24) {
    notes.push_back("u_24 column: " + std::to_string(u_matches) + "/" +
                    std::to_string(row_count) +
                    " tabulated coefficients match the computed expansion at 1e-1 resolution");
  } else {
    notes.push_back("u comparison skipped: the reference column tabulates n = 24, not n = " +
                    std::to_string(config.n_power));
  }
  j["notes"] = notes;
  return j.dump(2);
}

std::vector<DemoRow> grover_demo_rows(int num_register, std::uint32_t target, int m) {
  if (num_register < 1) {
    throw InputError("demo register needs at least one qubit");
  }
  if (num_register > kMaxCircuitVars) {
    throw CapacityError("demo register capped at " + std::to_string(kMaxCircuitVars) +
                        " qubits");
  }
  const long long n_states = 1LL << num_register;
  if (target >= static_cast<std::uint64_t>(n_states)) {
    throw InputError("marked state " + std::to_string(target) + " out of range for " +
                     std::to_string(num_register) + " qubits");
  }
  if (m < 0) {
    throw InputError("iteration count must be nonnegative");
  }

  const auto recursion = classical_amplitudes(n_states, m);

  Eigen::VectorXd point_values = Eigen::VectorXd::Zero(n_states);
  point_values[target] = 1.0;
  const MultilinearPoly indicator = from_point_values(point_values);
  const OracleSpec spec = OracleSpec::from_polynomial(indicator);
  const int and_count =
      std::max(oracle_and_ancillas(spec), diffusion_and_ancillas(num_register));
  const QubitLayout layout = QubitLayout::make(num_register, and_count);

  QuantumState state = zero_state(layout.total_qubits());
  state = apply_circuit(std::move(state), build_uniform_prep(num_register, layout.total_qubits()));

  // All unmarked amplitudes stay equal by symmetry; one representative carries
  // the collective amplitude after the sqrt(N-1) rescale.
  const std::uint32_t other_state = (target == 0) ? 1 : 0;
  const double collective = std::sqrt(static_cast<double>(n_states - 1));
  const auto snapshot = [&](int k) {
    DemoRow row;
    row.k = k;
    row.a_other = recursion[static_cast<std::size_t>(k)].first;
    row.a_target = recursion[static_cast<std::size_t>(k)].second;
    row.p_target = row.a_target * row.a_target;
    row.sim_a_target = state.amplitudes[target].real();
    row.sim_a_other = state.amplitudes[other_state].real() * collective;
    row.sim_p_target = register_probabilities(state, layout.register_qubits())[target];
    return row;
  };

  std::vector<DemoRow> rows;
  rows.reserve(static_cast<std::size_t>(m) + 1);
  rows.push_back(snapshot(0));
  if (m > 0) {
    const Circuit oracle_circuit = build_oracle_circuit(spec, layout);
    const Circuit diffusion = build_diffusion(num_register, layout);
    for (int k = 1; k <= m; ++k) {
      state = apply_circuit(std::move(state), oracle_circuit);
      state = apply_circuit(std::move(state), diffusion);
      rows.push_back(snapshot(k));
    }
  }
  return rows;
}

std::string demo_rows_to_csv(const std::vector<DemoRow>& rows) {
  std::string out = "k,a_other,a_target,p_target,sim_a_other,sim_a_target,sim_p_target\n";
  for (const auto& row : rows) {
    out += std::to_string(row.k) + ',' + format_double(row.a_other) + ',' +
           format_double(row.a_target) + ',' + format_double(row.p_target) + ',' +
           format_double(row.sim_a_other) + ',' + format_double(row.sim_a_target) + ',' +
           format_double(row.sim_p_target) + '\n';
  }
  return out;
}

double demo_max_deviation(const std::vector<DemoRow>& rows) {
  double worst = 0.0;
  for (const auto& row : rows) {
    worst = std::max(worst, std::abs(row.a_other - row.sim_a_other));
    worst = std::max(worst, std::abs(row.a_target - row.sim_a_target));
    worst = std::max(worst, std::abs(row.p_target - row.sim_p_target));
  }
  return worst;
}

}  // namespace qsera
