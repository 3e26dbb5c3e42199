#include "qsera/portfolio.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <json.hpp>

#include "qsera/errors.hpp"
#include "qsera/text_format.hpp"

namespace qsera {

namespace {

constexpr int kMaxExpansionAssets = 20;  // exhaustive 2^{N_a} enumeration bound
constexpr double kRhoTolerance = 1e-12;

void check_selection(const AssetPool& pool, std::uint32_t selection) {
  if (pool.size() < 32 && selection >= (std::uint32_t{1} << pool.size())) {
    throw InputError("selection mask " + std::to_string(selection) +
                     " out of range for " + std::to_string(pool.size()) + " assets");
  }
}

}  // namespace

void AssetPool::validate() const {
  const int n = size();
  if (n < 1) {
    throw ValidationError("asset pool must hold at least one asset");
  }
  if (sigma.size() != n || rho.rows() != n || rho.cols() != n) {
    throw ValidationError("asset pool dimensions disagree: mu has " +
                          std::to_string(n) + " entries, sigma " +
                          std::to_string(sigma.size()) + ", rho " +
                          std::to_string(rho.rows()) + "x" +
                          std::to_string(rho.cols()));
  }
  for (int i = 0; i < n; ++i) {
    if (!(sigma[i] >= 0.0)) {
      throw ValidationError("volatility of asset " + std::to_string(i) +
                            " must be nonnegative");
    }
    if (std::abs(rho(i, i) - 1.0) > kRhoTolerance) {
      throw ValidationError("correlation diagonal entry " + std::to_string(i) +
                            " must be 1");
    }
    for (int j = 0; j < n; ++j) {
      if (std::abs(rho(i, j) - rho(j, i)) > kRhoTolerance) {
        throw ValidationError("correlation matrix is not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (rho(i, j) < -1.0 - kRhoTolerance || rho(i, j) > 1.0 + kRhoTolerance) {
        throw ValidationError("correlation entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") outside [-1, 1]");
      }
    }
  }
}

void PortfolioProblem::validate() const {
  pool.validate();
  if (!(benchmark.sigma_b >= 0.0)) {
    throw ValidationError("benchmark volatility must be nonnegative");
  }
  if (benchmark.n_b < 1 || benchmark.n_b > pool.size()) {
    throw ValidationError("benchmark asset count " + std::to_string(benchmark.n_b) +
                          " must be between 1 and the pool size " +
                          std::to_string(pool.size()));
  }
  const double lm = weights.lambda_mu, ls = weights.lambda_sigma2;
  if (lm < 0.0 || lm > 1.0 || ls < 0.0 || ls > 1.0 || lm + ls > 1.0 + 1e-12) {
    throw ValidationError("objective weights must lie in [0, 1] and sum to at most 1");
  }
}

double portfolio_return(const AssetPool& pool, std::uint32_t selection) {
  check_selection(pool, selection);
  const int n_selected = std::popcount(selection);
  if (n_selected == 0) {
    throw InputError("undefined portfolio: the empty selection has no return");
  }
  double sum = 0.0;
  for (int i = 0; i < pool.size(); ++i) {
    if (selection >> i & 1) sum += pool.mu[i];
  }
  return sum / n_selected;
}

double portfolio_variance(const AssetPool& pool, std::uint32_t selection) {
  check_selection(pool, selection);
  const int n_selected = std::popcount(selection);
  if (n_selected == 0) {
    throw InputError("undefined portfolio: the empty selection has no variance");
  }
  double sum = 0.0;
  for (int i = 0; i < pool.size(); ++i) {
    if (!(selection >> i & 1)) continue;
    for (int j = 0; j < pool.size(); ++j) {
      if (!(selection >> j & 1)) continue;
      sum += pool.sigma[i] * pool.sigma[j] * pool.rho(i, j);
    }
  }
  return sum / (static_cast<double>(n_selected) * n_selected);
}

double objective_value(const AssetPool& pool, const Benchmark& benchmark,
                       const TrackingObjective& weights, std::uint32_t selection) {
  check_selection(pool, selection);
  const double n_selected = std::popcount(selection);
  double return_sum = 0.0;   // N_p mu_p
  double variance_sum = 0.0; // N_p^2 sigma_p^2
  for (int i = 0; i < pool.size(); ++i) {
    if (!(selection >> i & 1)) continue;
    return_sum += pool.mu[i];
    for (int j = 0; j < pool.size(); ++j) {
      if (selection >> j & 1) {
        variance_sum += pool.sigma[i] * pool.sigma[j] * pool.rho(i, j);
      }
    }
  }
  const double return_gap = return_sum - n_selected * benchmark.mu_b;
  const double variance_gap =
      variance_sum - n_selected * n_selected * benchmark.sigma_b * benchmark.sigma_b;
  const double count_gap = n_selected - benchmark.n_b;
  return weights.lambda_mu * return_gap * return_gap +
         weights.lambda_sigma2 * variance_gap * variance_gap +
         weights.lambda_count() * count_gap * count_gap;
}

double objective_value(const PortfolioProblem& problem, std::uint32_t selection) {
  return objective_value(problem.pool, problem.benchmark, problem.weights, selection);
}

MultilinearPoly objective_to_polynomial(const AssetPool& pool,
                                        const Benchmark& benchmark,
                                        const TrackingObjective& weights) {
  pool.validate();
  if (pool.size() > kMaxExpansionAssets) {
    throw CapacityError("objective expansion enumerates 2^N_a selections; " +
                        std::to_string(pool.size()) + " assets exceed the cap of " +
                        std::to_string(kMaxExpansionAssets));
  }
  const std::uint32_t n_points = std::uint32_t{1} << pool.size();
  Eigen::VectorXd values(n_points);
  for (std::uint32_t z = 0; z < n_points; ++z) {
    values[z] = objective_value(pool, benchmark, weights, z);
  }
  return from_point_values(values);
}

MultilinearPoly objective_to_polynomial(const PortfolioProblem& problem) {
  return objective_to_polynomial(problem.pool, problem.benchmark, problem.weights);
}

MultilinearPoly objective_to_polynomial_symbolic(const AssetPool& pool,
                                                 const Benchmark& benchmark,
                                                 const TrackingObjective& weights) {
  pool.validate();
  const int n = pool.size();
  if (n > kMaxExpansionAssets) {
    throw CapacityError("objective expansion capped at " +
                        std::to_string(kMaxExpansionAssets) + " assets");
  }

  // Return gap: sum_i (mu_i - mu_b) x_i.
  MultilinearPoly return_gap(n);
  for (int i = 0; i < n; ++i) {
    return_gap.set_coeff(std::uint32_t{1} << i, pool.mu[i] - benchmark.mu_b);
  }
  // Variance gap: sum_{ij} (sigma_i sigma_j rho_ij - sigma_b^2) x_i x_j, with
  // x_i^2 = x_i collapsing the diagonal.
  const double sb2 = benchmark.sigma_b * benchmark.sigma_b;
  MultilinearPoly variance_gap(n);
  for (int i = 0; i < n; ++i) {
    variance_gap.set_coeff(std::uint32_t{1} << i,
                           pool.sigma[i] * pool.sigma[i] - sb2);
    for (int j = i + 1; j < n; ++j) {
      const std::uint32_t pair = (std::uint32_t{1} << i) | (std::uint32_t{1} << j);
      variance_gap.set_coeff(pair,
                             2.0 * (pool.sigma[i] * pool.sigma[j] * pool.rho(i, j) - sb2));
    }
  }
  // Count gap: sum_i x_i - N_b.
  MultilinearPoly count_gap(n);
  count_gap.set_coeff(0, -static_cast<double>(benchmark.n_b));
  for (int i = 0; i < n; ++i) count_gap.set_coeff(std::uint32_t{1} << i, 1.0);

  const MultilinearPoly sq_return = multiply(return_gap, return_gap);
  const MultilinearPoly sq_variance = multiply(variance_gap, variance_gap);
  const MultilinearPoly sq_count = multiply(count_gap, count_gap);

  MultilinearPoly out(n);
  auto add_scaled = [&out](const MultilinearPoly& p, double w) {
    for (const auto& [mask, c] : p.terms()) {
      out.set_coeff(mask, out.coeff(mask) + w * c);
    }
  };
  add_scaled(sq_return, weights.lambda_mu);
  add_scaled(sq_variance, weights.lambda_sigma2);
  add_scaled(sq_count, weights.lambda_count());
  out.prune();
  return out;
}

PortfolioProblem case_study_problem() {
  PortfolioProblem problem;
  problem.pool.mu = Eigen::Vector4d{0.05, 0.01, 0.02, 0.04};
  problem.pool.sigma = Eigen::Vector4d{0.40, 0.10, 0.20, 0.30};
  problem.pool.rho = Eigen::Matrix4d{{1.0, 0.5, -0.4, -0.2},
                                     {0.5, 1.0, -0.1, -0.3},
                                     {-0.4, -0.1, 1.0, 0.3},
                                     {-0.2, -0.3, 0.3, 1.0}};
  problem.benchmark = Benchmark{0.043, 0.195, 2};
  problem.weights = TrackingObjective{0.95, 0.049};
  return problem;
}

const std::vector<ReferenceCoefficients>& case_study_reference_coefficients() {
  // Subset masks use bit 0 = asset A ... bit 3 = asset D; rows ordered by
  // (order, mask) to mirror the tabulated listing.
  static const std::vector<ReferenceCoefficients> rows = {
      {0b0000, 2.8e-3, 0.81, 0.0},   // constant
      {0b0001, -1.1e-3, 0.07, 0.0},  // A
      {0b0010, -0.8e-3, 0.05, 0.0},  // B
      {0b0100, -1.3e-3, 0.09, 0.1},  // C
      {0b1000, -1.7e-3, 0.11, 0.1},  // D
      {0b0011, -0.2e-3, 0.01, 0.2},  // AB
      {0b0101, -0.2e-3, 0.01, 0.5},  // AC
      {0b1001, 0.0e-3, 0.00, 0.6},   // AD
      {0b0110, 2.8e-3, -0.19, -0.1}, // BC
      {0b1010, 1.1e-3, -0.07, -0.1}, // BD
      {0b1100, 0.8e-3, -0.06, 0.1},  // CD
      {0b0111, 2.5e-3, -0.16, -0.8}, // ABC
      {0b1011, 2.1e-3, -0.14, -0.9}, // ABD
      {0b1101, 2.7e-3, -0.18, -1.5}, // ACD
      {0b1110, 2.3e-3, -0.15, -0.2}, // BCD
      {0b1111, 3.9e-3, -0.08, 1.8},  // ABCD
  };
  return rows;
}

std::string problem_to_json(const PortfolioProblem& problem) {
  nlohmann::ordered_json j;
  j["mu"] = std::vector<double>(problem.pool.mu.data(),
                                problem.pool.mu.data() + problem.pool.mu.size());
  j["sigma"] = std::vector<double>(problem.pool.sigma.data(),
                                   problem.pool.sigma.data() + problem.pool.sigma.size());
  j["rho"] = nlohmann::ordered_json::array();
  for (int i = 0; i < problem.pool.rho.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < problem.pool.rho.cols(); ++k) row.push_back(problem.pool.rho(i, k));
    j["rho"].push_back(std::move(row));
  }
  j["benchmark"] = {{"mu_b", problem.benchmark.mu_b},
                    {"sigma_b", problem.benchmark.sigma_b},
                    {"n_b", problem.benchmark.n_b}};
  j["lambda_mu"] = problem.weights.lambda_mu;
  j["lambda_sigma2"] = problem.weights.lambda_sigma2;
  return j.dump(2);
}

PortfolioProblem problem_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("problem JSON does not parse: ") + e.what());
  }
  for (const char* key : {"mu", "sigma", "rho", "benchmark", "lambda_mu", "lambda_sigma2"}) {
    if (!j.is_object() || !j.contains(key)) {
      throw InputError(std::string("problem JSON is missing '") + key + "'");
    }
  }
  const auto read_vector = [&](const char* key) {
    if (!j[key].is_array() || j[key].empty()) {
      throw InputError(std::string("problem JSON '") + key +
                       "' must be a nonempty array");
    }
    Eigen::VectorXd v(j[key].size());
    for (std::size_t i = 0; i < j[key].size(); ++i) {
      if (!j[key][i].is_number()) {
        throw InputError(std::string("problem JSON '") + key + "' must hold numbers");
      }
      v[static_cast<Eigen::Index>(i)] = j[key][i].get<double>();
    }
    return v;
  };

  PortfolioProblem problem;
  problem.pool.mu = read_vector("mu");
  problem.pool.sigma = read_vector("sigma");
  const auto& rho = j["rho"];
  if (!rho.is_array() || rho.size() != j["mu"].size()) {
    throw InputError("problem JSON 'rho' must be a square matrix matching mu");
  }
  problem.pool.rho.resize(static_cast<Eigen::Index>(rho.size()),
                          static_cast<Eigen::Index>(rho.size()));
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!rho[i].is_array() || rho[i].size() != rho.size()) {
      throw InputError("problem JSON 'rho' rows must all match the pool size");
    }
    for (std::size_t k = 0; k < rho.size(); ++k) {
      if (!rho[i][k].is_number()) {
        throw InputError("problem JSON 'rho' must hold numbers");
      }
      problem.pool.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          rho[i][k].get<double>();
    }
  }
  const auto& bench = j["benchmark"];
  if (!bench.is_object() || !bench.contains("mu_b") || !bench.contains("sigma_b") ||
      !bench.contains("n_b") || !bench["mu_b"].is_number() ||
      !bench["sigma_b"].is_number() || !bench["n_b"].is_number_integer()) {
    throw InputError("problem JSON 'benchmark' needs numeric mu_b, sigma_b and integer n_b");
  }
  problem.benchmark.mu_b = bench["mu_b"].get<double>();
  problem.benchmark.sigma_b = bench["sigma_b"].get<double>();
  problem.benchmark.n_b = bench["n_b"].get<int>();
  if (!j["lambda_mu"].is_number() || !j["lambda_sigma2"].is_number()) {
    throw InputError("problem JSON lambda weights must be numbers");
  }
  problem.weights.lambda_mu = j["lambda_mu"].get<double>();
  problem.weights.lambda_sigma2 = j["lambda_sigma2"].get<double>();
  problem.validate();
  return problem;
}

namespace {

std::string selection_rows(const AssetPool& pool, const PortfolioProblem* problem) {
  pool.validate();
  if (pool.size() > kMaxExpansionAssets) {
    throw CapacityError("selection scan enumerates 2^N_a rows; pool exceeds the cap of " +
                        std::to_string(kMaxExpansionAssets) + " assets");
  }
  std::string out;
  const std::uint32_t n_points = std::uint32_t{1} << pool.size();
  for (std::uint32_t z = 0; z < n_points; ++z) {
    out += bitstring(z, pool.size());
    out += ',' + std::to_string(std::popcount(z)) + ',';
    if (z != 0) {
      out += format_double(portfolio_return(pool, z));
      out += ',';
      out += format_double(std::sqrt(portfolio_variance(pool, z)));
    } else {
      out += ',';  // empty selection: return and volatility are undefined
    }
    if (problem != nullptr) {
      out += ',' + format_double(objective_value(*problem, z));
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string scatter_csv(const AssetPool& pool) {
  return "selection_bits,n_assets,mu_p,sigma_p\n" + selection_rows(pool, nullptr);
}

std::string scan_csv(const PortfolioProblem& problem) {
  problem.validate();
  return "selection_bits,n_assets,mu_p,sigma_p,f\n" +
         selection_rows(problem.pool, &problem);
}

}  // namespace qsera
