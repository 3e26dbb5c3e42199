#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsera/multilinear_poly.hpp"

namespace qsera {

// Asset universe statistics: per-asset expected returns and volatilities plus
// the correlation matrix. Selections are bitmasks with bit i = asset i, so a
// bitstring b_{Na-1}...b_1b_0 lists the first asset rightmost.
struct AssetPool {
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd rho;

  int size() const { return static_cast<int>(mu.size()); }
  // Rejects inconsistent dimensions, negative volatilities, and correlation
  // matrices that are asymmetric, off-unit on the diagonal, or out of [-1, 1].
  void validate() const;
};

// Benchmark the equal-weight portfolio has to track.
struct Benchmark {
  double mu_b = 0.0;
  double sigma_b = 0.0;
  int n_b = 1;  // target asset count
};

// Weights of the tracking objective's three squared terms; the constraint
// term implicitly carries 1 - lambda_mu - lambda_sigma2.
struct TrackingObjective {
  double lambda_mu = 0.0;
  double lambda_sigma2 = 0.0;
  double lambda_count() const { return 1.0 - lambda_mu - lambda_sigma2; }
};

struct PortfolioProblem {
  AssetPool pool;
  Benchmark benchmark;
  TrackingObjective weights;
  void validate() const;
};

// Equal-weight portfolio return (1/N_p) sum_i x_i mu_i; rejects the empty
// selection (undefined portfolio).
double portfolio_return(const AssetPool& pool, std::uint32_t selection);

// Equal-weight portfolio variance (1/N_p^2) sum_{ij} x_i x_j sigma_i sigma_j
// rho_ij; rejects the empty selection.
double portfolio_variance(const AssetPool& pool, std::uint32_t selection);

// Benchmark-tracking objective
//   lambda_mu (sum_i x_i mu_i - N_p mu_b)^2
//   + lambda_sigma2 (sum_{ij} x_i x_j sigma_i sigma_j rho_ij - N_p^2 sigma_b^2)^2
//   + (1 - lambda_mu - lambda_sigma2) (N_p - N_b)^2,
// written via the sum forms so the empty selection stays well-defined.
double objective_value(const AssetPool& pool, const Benchmark& benchmark,
                       const TrackingObjective& weights, std::uint32_t selection);
double objective_value(const PortfolioProblem& problem, std::uint32_t selection);

// Multilinear expansion of the objective by Moebius interpolation over all
// 2^{N_a} point values; reproduces objective_value exactly at every selection.
MultilinearPoly objective_to_polynomial(const AssetPool& pool,
                                        const Benchmark& benchmark,
                                        const TrackingObjective& weights);
MultilinearPoly objective_to_polynomial(const PortfolioProblem& problem);

// Independent expansion route: squares the three groups symbolically with the
// polynomial algebra (L = sum (mu_i - mu_b) x_i, the variance-gap quadratic,
// and the count gap), then combines them with the lambda weights. Agrees with
// the Moebius route to floating precision; kept as a cross-check.
MultilinearPoly objective_to_polynomial_symbolic(const AssetPool& pool,
                                                 const Benchmark& benchmark,
                                                 const TrackingObjective& weights);

// The built-in four-asset case study: pool, benchmark and weights behind the
// `paper-portfolio` preset (run parameters live in qsera_runner).
PortfolioProblem case_study_problem();

// Rounded coefficient table that ships with the case study for side-by-side
// expansion reports: f as tabulated (x1e-3 scale already applied), the
// rescaled g, and u_24 = g^24. The f and g columns are reproduced verbatim
// from the tabulated source even where the objective formula disagrees;
// comparison reports flag the differences rather than forcing agreement.
struct ReferenceCoefficients {
  std::uint32_t subset;
  double f;
  double g;
  double u24;
};
const std::vector<ReferenceCoefficients>& case_study_reference_coefficients();

// Problem JSON: {"mu": [...], "sigma": [...], "rho": [[...]],
//   "benchmark": {"mu_b":, "sigma_b":, "n_b":}, "lambda_mu":, "lambda_sigma2":}
std::string problem_to_json(const PortfolioProblem& problem);
PortfolioProblem problem_from_json(const std::string& text);

// Scatter data, one row per selection: selection_bits,n_assets,mu_p,sigma_p
// (mu_p/sigma_p blank for the empty selection).
std::string scatter_csv(const AssetPool& pool);
// Scan data: the scatter columns plus the objective value f.
std::string scan_csv(const PortfolioProblem& problem);

}  // namespace qsera
