#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsera/errors.hpp"
#include "qsera/multilinear_poly.hpp"
#include "qsera/portfolio.hpp"
#include "qsera/runner.hpp"
#include "qsera/text_format.hpp"

namespace {

using qsera::InputError;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Primary output goes to stdout unless --out redirects it to a file; either
// way it ends with exactly one newline.
void emit(const std::string& text, const std::string& out_path) {
  std::string payload = text;
  if (payload.empty() || payload.back() != '\n') payload += '\n';
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw InputError("cannot open output file " + out_path);
  }
  out << payload;
}

qsera::RescaleMode parse_mode(const std::string& text) {
  if (text == "min") return qsera::RescaleMode::Minimise;
  if (text == "max") return qsera::RescaleMode::Maximise;
  if (text == "root") return qsera::RescaleMode::RootFind;
  throw InputError("mode must be min, max or root, got '" + text + "'");
}

qsera::IterationChoice parse_iterations(const std::string& text) {
  if (text == "auto-floor") return qsera::IterationChoice::auto_floor();
  if (text == "auto-ceil") return qsera::IterationChoice::auto_ceil();
  return qsera::IterationChoice::exactly(
      static_cast<int>(qsera::parse_integer(text)));
}

qsera::OracleKind parse_oracle(const std::string& text) {
  if (text == "circuit") return qsera::OracleKind::GateCircuit;
  if (text == "exact") return qsera::OracleKind::ExactDiagonal;
  throw InputError("oracle must be circuit or exact, got '" + text + "'");
}

struct ResolvedInput {
  qsera::QseraConfig config;
  std::optional<qsera::PortfolioProblem> problem;
  bool is_preset = false;
};

// The problem or polynomial behind a job plus its run parameters: either the
// compiled-in preset or a JSON file, with command-line flags taking
// precedence over file values.
struct SourceOptions {
  std::string preset;
  std::string config_path;
  std::string mode;
  int n = 0;
  std::string iterations;
  std::string oracle;
  CLI::Option* mode_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* iterations_opt = nullptr;
  CLI::Option* oracle_opt = nullptr;

  void attach_source(CLI::App* sub) {
    sub->add_option("--preset", preset, "Built-in problem preset (paper-portfolio)");
    sub->add_option("--config", config_path,
                    "JSON config {objective|problem, mode, f_min, f_max, n, "
                    "iterations, oracle} or a bare problem JSON file");
  }

  void attach(CLI::App* sub) {
    attach_source(sub);
    mode_opt = sub->add_option("--mode", mode, "Search mode: min, max or root");
    n_opt = sub->add_option("--n", n, "Sharpening power of the rescaled objective");
    iterations_opt = sub->add_option("--iterations", iterations,
                                     "auto-floor, auto-ceil or an explicit round count");
    oracle_opt = sub->add_option("--oracle", oracle, "Oracle backend: circuit or exact");
  }

  ResolvedInput resolve() const {
    ResolvedInput resolved;
    const bool has_preset = !preset.empty();
    const bool has_config = !config_path.empty();
    if (has_preset && has_config) {
      throw InputError("--preset and --config are mutually exclusive");
    }
    if (!has_preset && !has_config) {
      throw InputError("one of --preset or --config is required");
    }
    if (has_preset) {
      if (preset != "paper-portfolio") {
        throw InputError("unknown preset '" + preset + "'");
      }
      resolved.config = qsera::case_study_config();
      resolved.problem = qsera::case_study_problem();
      resolved.is_preset = true;
    } else {
      resolved = parse_config_file(config_path);
    }
    if (mode_opt != nullptr && mode_opt->count() > 0) {
      resolved.config.mode = parse_mode(mode);
    }
    if (n_opt != nullptr && n_opt->count() > 0) {
      resolved.config.n_power = n;
    }
    if (iterations_opt != nullptr && iterations_opt->count() > 0) {
      resolved.config.iterations = parse_iterations(iterations);
    }
    if (oracle_opt != nullptr && oracle_opt->count() > 0) {
      resolved.config.oracle = parse_oracle(oracle);
    }
    return resolved;
  }

  // Scan wants the portfolio statistics themselves, so skip the objective
  // expansion the other commands need.
  qsera::PortfolioProblem resolve_problem() const {
    const bool has_preset = !preset.empty();
    const bool has_config = !config_path.empty();
    if (has_preset && has_config) {
      throw InputError("--preset and --config are mutually exclusive");
    }
    if (!has_preset && !has_config) {
      throw InputError("one of --preset or --config is required");
    }
    if (has_preset) {
      if (preset != "paper-portfolio") {
        throw InputError("unknown preset '" + preset + "'");
      }
      return qsera::case_study_problem();
    }
    const std::string text = read_file(config_path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("config does not parse: ") + e.what());
    }
    if (j.is_object() && j.contains("mu")) {
      return qsera::problem_from_json(text);
    }
    if (j.is_object() && j.contains("problem")) {
      return qsera::problem_from_json(j["problem"].dump());
    }
    throw InputError("this command needs a portfolio problem: a problem JSON "
                     "file or a config with a 'problem' key");
  }

 private:
  static ResolvedInput parse_config_file(const std::string& path) {
    const std::string text = read_file(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(std::string("config does not parse: ") + e.what());
    }
    if (!j.is_object()) {
      throw InputError("config must be a JSON object");
    }

    ResolvedInput resolved;
    qsera::QseraConfig& config = resolved.config;
    bool has_min = false;
    bool has_max = false;

    if (j.contains("mu")) {
      // A bare problem file; run parameters take their defaults.
      resolved.problem = qsera::problem_from_json(text);
      config.objective = qsera::objective_to_polynomial(*resolved.problem);
    } else {
      static const std::set<std::string> known = {
          "objective", "problem", "mode", "f_min", "f_max", "n", "iterations", "oracle"};
      for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
          throw InputError("config has unknown key '" + key + "'");
        }
      }
      const bool has_objective = j.contains("objective");
      const bool has_problem = j.contains("problem");
      if (has_objective == has_problem) {
        throw InputError("config must give exactly one of 'objective' and 'problem'");
      }
      if (has_problem) {
        resolved.problem = qsera::problem_from_json(j["problem"].dump());
        config.objective = qsera::objective_to_polynomial(*resolved.problem);
      } else {
        config.objective = qsera::polynomial_from_json(j["objective"].dump());
      }
      if (j.contains("mode")) {
        if (!j["mode"].is_string()) throw InputError("config 'mode' must be a string");
        config.mode = parse_mode(j["mode"].get<std::string>());
      }
      if (j.contains("f_min")) {
        if (!j["f_min"].is_number()) throw InputError("config 'f_min' must be a number");
        config.f_min_est = j["f_min"].get<double>();
        has_min = true;
      }
      if (j.contains("f_max")) {
        if (!j["f_max"].is_number()) throw InputError("config 'f_max' must be a number");
        config.f_max_est = j["f_max"].get<double>();
        has_max = true;
      }
      if (j.contains("n")) {
        if (!j["n"].is_number_integer()) throw InputError("config 'n' must be an integer");
        config.n_power = j["n"].get<int>();
      }
      if (j.contains("iterations")) {
        const auto& iterations = j["iterations"];
        if (iterations.is_string()) {
          config.iterations = parse_iterations(iterations.get<std::string>());
        } else if (iterations.is_number_integer()) {
          config.iterations = qsera::IterationChoice::exactly(iterations.get<int>());
        } else {
          throw InputError("config 'iterations' must be auto-floor, auto-ceil or an integer");
        }
      }
      if (j.contains("oracle")) {
        if (!j["oracle"].is_string()) throw InputError("config 'oracle' must be a string");
        config.oracle = parse_oracle(j["oracle"].get<std::string>());
      }
    }

    // Absent estimates fall back to the exhaustive range, which makes the
    // rescale exact.
    if (!has_min || !has_max) {
      const Eigen::VectorXd values = qsera::evaluate_all(config.objective);
      if (!has_min) config.f_min_est = values.minCoeff();
      if (!has_max) config.f_max_est = values.maxCoeff();
    }
    return resolved;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsera: Grover search with polynomial soft phase oracles"};
  app.require_subcommand(1);

  auto* sub_run = app.add_subcommand("run", "Amplify one configuration and report the distribution");
  SourceOptions run_source;
  run_source.attach(sub_run);
  std::uint64_t shots = 0;
  std::uint64_t seed = 1;
  bool dump_state = false;
  std::string run_out;
  std::string distribution_path;
  sub_run->add_option("--shots", shots, "Also sample this many measurement shots");
  sub_run->add_option("--seed", seed, "Sampling seed (default 1)");
  sub_run->add_flag("--dump-state", dump_state, "Include the final statevector in the JSON");
  sub_run->add_option("--out", run_out, "Write the result JSON here instead of stdout");
  sub_run->add_option("--distribution", distribution_path,
                      "Also write the register distribution CSV here");

  auto* sub_sweep =
      app.add_subcommand("sweep-n", "Probability of the classical optimum across powers");
  SourceOptions sweep_source;
  sweep_source.attach(sub_sweep);
  int n_min = 1;
  int n_max = 100;
  std::string sweep_out;
  sub_sweep->add_option("--n-min", n_min, "First sharpening power (default 1)");
  sub_sweep->add_option("--n-max", n_max, "Last sharpening power (default 100)");
  sub_sweep->add_option("--out", sweep_out, "Write the CSV here instead of stdout");

  auto* sub_expand = app.add_subcommand("expand", "Emit the f, g and u_n coefficient tables");
  SourceOptions expand_source;
  expand_source.attach(sub_expand);
  std::string expand_out;
  sub_expand->add_option("--out", expand_out, "Write the JSON here instead of stdout");

  auto* sub_demo = app.add_subcommand(
      "grover-demo", "Single marked state: amplitude recursion against gate simulation");
  int demo_k = 6;
  std::uint32_t demo_target = 14;
  int demo_m = 6;
  std::string demo_out;
  sub_demo->add_option("--k", demo_k, "Register qubits (default 6)");
  sub_demo->add_option("--target", demo_target, "Marked state index (default 14)");
  sub_demo->add_option("--m", demo_m, "Amplification rounds (default 6)");
  sub_demo->add_option("--out", demo_out, "Write the CSV here instead of stdout");

  auto* sub_scan = app.add_subcommand(
      "portfolio-scan", "Return, volatility and objective of every selection");
  SourceOptions scan_source;
  scan_source.attach_source(sub_scan);
  std::string scan_out;
  sub_scan->add_option("--out", scan_out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sub_run)) {
      const ResolvedInput input = run_source.resolve();
      const qsera::RunResult result = qsera::run(input.config);
      std::map<std::string, std::uint64_t> counts;
      const bool sampled = shots > 0;
      if (sampled) counts = qsera::sample_counts(result, shots, seed);
      emit(qsera::run_result_to_json(result, sampled ? &counts : nullptr, dump_state),
           run_out);
      if (!distribution_path.empty()) {
        emit(qsera::distribution_to_csv(result), distribution_path);
      }
    } else if (app.got_subcommand(sub_sweep)) {
      const ResolvedInput input = sweep_source.resolve();
      emit(qsera::sweep_to_csv(qsera::sweep_power(input.config, n_min, n_max)), sweep_out);
    } else if (app.got_subcommand(sub_expand)) {
      const ResolvedInput input = expand_source.resolve();
      emit(qsera::expansion_report_json(input.config, input.is_preset), expand_out);
    } else if (app.got_subcommand(sub_demo)) {
      const auto rows = qsera::grover_demo_rows(demo_k, demo_target, demo_m);
      emit(qsera::demo_rows_to_csv(rows), demo_out);
      std::cerr << "max_abs_deviation="
                << qsera::format_double(qsera::demo_max_deviation(rows)) << '\n';
    } else if (app.got_subcommand(sub_scan)) {
      emit(qsera::scan_csv(scan_source.resolve_problem()), scan_out);
    }
    return 0;
  } catch (const qsera::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const qsera::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
}
