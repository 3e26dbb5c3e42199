#include "qsera/multilinear_poly.hpp"

#include <bit>
#include <cmath>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsera/errors.hpp"
#include "qsera/text_format.hpp"

namespace qsera {

MultilinearPoly::MultilinearPoly(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 1 || num_vars > kMaxVars) {
    throw InputError("polynomial needs between 1 and " + std::to_string(kMaxVars) +
                     " variables, got " + std::to_string(num_vars));
  }
}

MultilinearPoly MultilinearPoly::constant(int num_vars, double value) {
  MultilinearPoly p(num_vars);
  p.set_coeff(0, value);
  return p;
}

void MultilinearPoly::check_subset(std::uint32_t subset) const {
  if (subset >= (std::uint32_t{1} << num_vars_)) {
    throw InputError("subset mask " + std::to_string(subset) + " out of range for " +
                     std::to_string(num_vars_) + " variables");
  }
}

double MultilinearPoly::coeff(std::uint32_t subset) const {
  check_subset(subset);
  auto it = coeffs_.find(subset);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void MultilinearPoly::set_coeff(std::uint32_t subset, double value) {
  check_subset(subset);
  if (value == 0.0) {
    coeffs_.erase(subset);
  } else {
    coeffs_[subset] = value;
  }
}

int MultilinearPoly::max_order() const {
  int order = 0;
  for (const auto& [mask, c] : coeffs_) {
    order = std::max(order, std::popcount(mask));
  }
  return order;
}

void MultilinearPoly::prune(double threshold) {
  std::erase_if(coeffs_, [threshold](const auto& kv) {
    return std::abs(kv.second) < threshold;
  });
}

double evaluate(const MultilinearPoly& p, std::uint32_t assignment) {
  if (assignment >= (std::uint32_t{1} << p.num_vars())) {
    throw InputError("assignment " + std::to_string(assignment) + " out of range for " +
                     std::to_string(p.num_vars()) + " variables");
  }
  double sum = 0.0;
  for (const auto& [mask, c] : p.terms()) {
    // The monomial survives iff every variable it names is set in the assignment.
    if ((mask & ~assignment) == 0) sum += c;
  }
  return sum;
}

Eigen::VectorXd evaluate_all(const MultilinearPoly& p) {
  const std::size_t n = std::size_t{1} << p.num_vars();
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& [mask, c] : p.terms()) values[mask] = c;
  // In-place zeta transform: accumulate each coefficient into all supersets.
  for (int b = 0; b < p.num_vars(); ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t z = 0; z < n; ++z) {
      if (z & bit) values[z] += values[z ^ bit];
    }
  }
  return values;
}

MultilinearPoly multiply(const MultilinearPoly& p, const MultilinearPoly& q) {
  if (p.num_vars() != q.num_vars()) {
    throw InputError("cannot multiply polynomials over " + std::to_string(p.num_vars()) +
                     " and " + std::to_string(q.num_vars()) + " variables");
  }
  MultilinearPoly out(p.num_vars());
  std::map<std::uint32_t, double> acc;
  for (const auto& [s, cs] : p.terms()) {
    for (const auto& [t, ct] : q.terms()) {
      acc[s | t] += cs * ct;  // x_i^2 = x_i collapses repeated variables
    }
  }
  for (const auto& [mask, c] : acc) out.set_coeff(mask, c);
  out.prune();
  return out;
}

MultilinearPoly power(const MultilinearPoly& p, int n) {
  if (n < 0) {
    throw InputError("polynomial power must be nonnegative, got " + std::to_string(n));
  }
  if (n == 0) return MultilinearPoly::constant(p.num_vars(), 1.0);
  MultilinearPoly out = p;
  for (int k = 1; k < n; ++k) out = multiply(out, p);
  return out;
}

MultilinearPoly from_point_values(const Eigen::VectorXd& values) {
  const auto n = static_cast<std::size_t>(values.size());
  if (n < 2 || (n & (n - 1)) != 0) {
    throw InputError("point-value table length must be a power of two >= 2, got " +
                     std::to_string(n));
  }
  const int num_vars = std::countr_zero(n);
  std::vector<double> c(values.data(), values.data() + n);
  // In-place Moebius transform, the exact inverse of the zeta transform above.
  for (int b = 0; b < num_vars; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t z = 0; z < n; ++z) {
      if (z & bit) c[z] -= c[z ^ bit];
    }
  }
  MultilinearPoly out(num_vars);
  for (std::size_t mask = 0; mask < n; ++mask) {
    out.set_coeff(static_cast<std::uint32_t>(mask), c[mask]);
  }
  out.prune();
  return out;
}

MultilinearPoly rescale(const MultilinearPoly& f, RescaleMode mode, double f_min,
                        double f_max) {
  if (mode == RescaleMode::RootFind) {
    const double scale = std::max(f_min * f_min, f_max * f_max);
    if (scale == 0.0) {
      throw ValidationError("degenerate rescale range: f_min = f_max = 0 leaves the "
                            "root-find transform unscaled");
    }
    // g = 1 - f^2 / scale; f^2 goes through multiply for the multilinear form.
    MultilinearPoly g = multiply(f, f);
    MultilinearPoly out(f.num_vars());
    for (const auto& [mask, c] : g.terms()) out.set_coeff(mask, -c / scale);
    out.set_coeff(0, out.coeff(0) + 1.0);
    out.prune();
    return out;
  }

  if (f_max == f_min) {
    throw ValidationError("degenerate rescale range: f_max == f_min == " +
                          format_double(f_max));
  }
  if (f_max < f_min) {
    throw ValidationError("invalid rescale range: f_max " + format_double(f_max) +
                          " < f_min " + format_double(f_min));
  }
  const double span = f_max - f_min;
  MultilinearPoly out(f.num_vars());
  if (mode == RescaleMode::Maximise) {
    // g = (f - f_min) / span
    for (const auto& [mask, c] : f.terms()) out.set_coeff(mask, c / span);
    out.set_coeff(0, out.coeff(0) - f_min / span);
  } else {
    // g = (f_max - f) / span
    for (const auto& [mask, c] : f.terms()) out.set_coeff(mask, -c / span);
    out.set_coeff(0, out.coeff(0) + f_max / span);
  }
  out.prune();
  return out;
}

std::string polynomial_to_json(const MultilinearPoly& p) {
  nlohmann::ordered_json j;
  j["num_vars"] = p.num_vars();
  j["terms"] = nlohmann::ordered_json::array();
  // Emit terms ordered by (monomial order, mask) for stable, readable output.
  std::vector<std::uint32_t> masks;
  for (const auto& [mask, c] : p.terms()) masks.push_back(mask);
  std::sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    const int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  for (std::uint32_t mask : masks) {
    nlohmann::ordered_json term;
    term["vars"] = nlohmann::ordered_json::array();
    for (int i = 0; i < p.num_vars(); ++i) {
      if (mask >> i & 1) term["vars"].push_back(i);
    }
    term["coeff"] = p.coeff(mask);
    j["terms"].push_back(std::move(term));
  }
  return j.dump(2);
}

MultilinearPoly polynomial_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("polynomial JSON does not parse: ") + e.what());
  }
  if (!j.is_object() || !j.contains("num_vars") || !j.contains("terms")) {
    throw InputError("polynomial JSON needs an object with num_vars and terms");
  }
  if (!j["num_vars"].is_number_integer()) {
    throw InputError("polynomial JSON num_vars must be an integer");
  }
  MultilinearPoly p(j["num_vars"].get<int>());
  if (!j["terms"].is_array()) throw InputError("polynomial JSON terms must be an array");
  for (const auto& term : j["terms"]) {
    if (!term.is_object() || !term.contains("vars") || !term.contains("coeff") ||
        !term["vars"].is_array() || !term["coeff"].is_number()) {
      throw InputError("each polynomial term needs a vars array and a numeric coeff");
    }
    std::uint32_t mask = 0;
    int prev = -1;
    for (const auto& v : term["vars"]) {
      if (!v.is_number_integer()) throw InputError("term vars must be integers");
      const int i = v.get<int>();
      if (i < 0 || i >= p.num_vars()) {
        throw InputError("term variable index " + std::to_string(i) + " out of range");
      }
      if (i <= prev) throw InputError("term vars must be strictly ascending");
      prev = i;
      mask |= std::uint32_t{1} << i;
    }
    if (p.terms().contains(mask)) {
      throw InputError("duplicate term for the same variable subset");
    }
    p.set_coeff(mask, term["coeff"].get<double>());
  }
  return p;
}

}  // namespace qsera
