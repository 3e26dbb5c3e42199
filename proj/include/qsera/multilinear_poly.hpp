#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

namespace qsera {

// How an objective f is rescaled to g in [0, 1] before powering.
enum class RescaleMode { Maximise, Minimise, RootFind };

// Multilinear pseudo-Boolean polynomial over K binary variables.
//
// Monomials are keyed by a K-bit subset mask: bit i set <=> x_i present, so
// the empty mask is the constant term. Variable x_i^2 = x_i for binary x_i,
// hence every polynomial over {0,1}^K has a unique multilinear form. Absent
// keys mean coefficient zero; storage is sparse and canonical (operations
// prune magnitudes below kPruneThreshold).
class MultilinearPoly {
 public:
  static constexpr int kMaxVars = 26;  // subset masks must fit comfortably in 32 bits
  static constexpr double kPruneThreshold = 1e-15;

  explicit MultilinearPoly(int num_vars);
  static MultilinearPoly constant(int num_vars, double value);

  int num_vars() const { return num_vars_; }
  const std::map<std::uint32_t, double>& terms() const { return coeffs_; }

  // Coefficient of the monomial for `subset` (0.0 if absent).
  double coeff(std::uint32_t subset) const;
  // Sets a coefficient; an exact zero erases the entry to keep the form canonical.
  void set_coeff(std::uint32_t subset, double value);

  // Highest monomial order present (popcount of the widest stored mask); 0 for
  // a constant or empty polynomial.
  int max_order() const;

  // Drops entries with |coefficient| < threshold.
  void prune(double threshold = kPruneThreshold);

  bool operator==(const MultilinearPoly& other) const = default;

 private:
  void check_subset(std::uint32_t subset) const;

  int num_vars_;
  std::map<std::uint32_t, double> coeffs_;
};

// Evaluates p at a point of {0,1}^K given as a bitmask: sum over stored
// monomials S of coeff(S) * prod_{i in S} x_i.
double evaluate(const MultilinearPoly& p, std::uint32_t assignment);

// Evaluates p at every point of {0,1}^K at once via the zeta transform on the
// subset lattice; entry z equals evaluate(p, z).
Eigen::VectorXd evaluate_all(const MultilinearPoly& p);

// Product with idempotent reduction: monomial(S) * monomial(T) -> monomial(S|T).
MultilinearPoly multiply(const MultilinearPoly& p, const MultilinearPoly& q);

// p^n by iterated multiplication (p^n = p^(n-1) * p). n = 0 degenerately
// returns the constant-1 polynomial; negative n is rejected.
MultilinearPoly power(const MultilinearPoly& p, int n);

// The unique multilinear interpolant of 2^K point values: coefficients are the
// Moebius transform c_S = sum_{T subset of S} (-1)^|S\T| values[T]. The exact
// inverse of evaluate_all.
MultilinearPoly from_point_values(const Eigen::VectorXd& values);

// Maps f onto g with range [0, 1] (given true extrema):
//   Maximise:  g = (f - f_min) / (f_max - f_min)
//   Minimise:  g = (f_max - f) / (f_max - f_min)
//   RootFind:  g = 1 - f^2 / max(f_min^2, f_max^2)
MultilinearPoly rescale(const MultilinearPoly& f, RescaleMode mode, double f_min,
                        double f_max);

// JSON form: {"num_vars": K, "terms": [{"vars": [i, ...], "coeff": r}, ...]}
// with vars strictly ascending per term; empty vars list = constant term.
std::string polynomial_to_json(const MultilinearPoly& p);
MultilinearPoly polynomial_from_json(const std::string& text);

}  // namespace qsera
