#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netad {

using RealVector = std::vector<double>;

/// exp(-gamma * |u - v|^2). Throws DimensionError on length mismatch.
double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma);

/// Per-coordinate zero-mean, unit-variance scaling learned on training data.
/// Constant coordinates keep scale 1.
struct Standardizer {
  RealVector mean;
  RealVector scale;

  static Standardizer fit(std::span<const RealVector> data);
  RealVector apply(std::span<const double> x) const;
  std::vector<RealVector> apply_all(std::span<const RealVector> data) const;
};

/// gamma = 1 / (dimension * mean per-coordinate variance).
double default_gamma(std::span<const RealVector> data);

struct OcsvmParams {
  double nu = 0.1;
  double gamma = 1.0;
  double tol = 1e-6;
  std::size_t max_iterations = 1'000'000;
};

/// Solution of min 1/2 a'Ka  s.t.  0 <= a_i <= 1/(nu l), sum a_i = 1.
struct OcsvmDual {
  std::vector<double> alpha;
  std::vector<double> gradient;  // K a
  double rho = 0.0;
  double upper = 0.0;            // 1/(nu l)
  double objective = 0.0;
  std::size_t iterations = 0;

  /// Largest KKT violation of any coordinate given rho.
  double kkt_residual() const;
};

/// Pairwise (SMO) solver with the max-violating-pair rule.
/// Throws ConfigError when l < 2 or nu*l < 1, ConvergenceError at the cap.
OcsvmDual solve_one_class_dual(std::span<const RealVector> data, const OcsvmParams& params);

struct OcsvmModel {
  std::vector<RealVector> support_vectors;
  std::vector<double> alphas;
  double rho = 0.0;
  double nu = 0.0;
  double gamma = 0.0;

  /// CSV: a `key,value` block (rho, nu, gamma, then `extra`), a blank line,
  /// then `alpha,x0..x{d-1}` per support vector.
  void write(std::ostream& out, std::span<const std::pair<std::string, double>> extra = {}) const;
};

OcsvmModel train_ocsvm(std::span<const RealVector> data, const OcsvmParams& params);

/// sum_i alpha_i K(sv_i, x) - rho; negative means outlier.
double decision_value(const OcsvmModel& model, std::span<const double> x);

}  // namespace netad
