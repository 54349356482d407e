#pragma once

#include <span>
#include <vector>

#include "netad/svm.hpp"

namespace netad {

struct PcaModel {
  RealVector mean;
  std::vector<RealVector> components;   // orthonormal, by decreasing variance
  std::vector<double> explained_variance;        // eigenvalues of the sample covariance
  std::vector<double> explained_variance_ratio;  // eigenvalue / total variance

  RealVector project(std::span<const double> x) const;
  RealVector reconstruct(std::span<const double> coords) const;
};

/// Keeps the fewest leading components whose cumulative variance ratio
/// reaches `variance_target`. Throws ConfigError with fewer than 2 samples or
/// a target outside (0, 1].
PcaModel fit_pca(std::span<const RealVector> data, double variance_target);

/// Every component of the covariance eigendecomposition.
PcaModel fit_pca_all(std::span<const RealVector> data);

}  // namespace netad
