#include "netad/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>

#include "netad/error.hpp"

namespace netad {

namespace {

PcaModel decompose(std::span<const RealVector> data, double variance_target, bool keep_all) {
  if (data.size() < 2) throw ConfigError("PCA needs at least 2 samples");
  if (!keep_all && !(variance_target > 0.0 && variance_target <= 1.0)) {
    throw ConfigError("PCA variance target must lie in (0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto d = static_cast<Eigen::Index>(data.front().size());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = data[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != d) throw DimensionError("ragged PCA input");
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
  }
  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::reverse(order.begin(), order.end());

  std::vector<double> values;
  for (auto k : order) values.push_back(std::max(0.0, solver.eigenvalues()(k)));
  const double total = std::accumulate(values.begin(), values.end(), 0.0);

  std::size_t keep = values.size();
  if (!keep_all) {
    keep = 1;
    if (total > 0.0) {
      double cumulative = 0.0;
      for (std::size_t k = 0; k < values.size(); ++k) {
        cumulative += values[k];
        keep = k + 1;
        if (cumulative / total >= variance_target - 1e-12) break;
      }
    }
  }

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  for (std::size_t k = 0; k < keep; ++k) {
    const Eigen::VectorXd v = solver.eigenvectors().col(order[k]);
    model.components.emplace_back(v.data(), v.data() + d);
    model.explained_variance.push_back(values[k]);
    model.explained_variance_ratio.push_back(total > 0.0 ? values[k] / total : 0.0);
  }
  return model;
}

}  // namespace

PcaModel fit_pca(std::span<const RealVector> data, double variance_target) {
  return decompose(data, variance_target, false);
}

PcaModel fit_pca_all(std::span<const RealVector> data) { return decompose(data, 1.0, true); }

RealVector PcaModel::project(std::span<const double> x) const {
  if (x.size() != mean.size()) throw DimensionError("PCA projection dimension mismatch");
  RealVector out(components.size(), 0.0);
  for (std::size_t k = 0; k < components.size(); ++k) {
    for (std::size_t j = 0; j < x.size(); ++j) out[k] += components[k][j] * (x[j] - mean[j]);
  }
  return out;
}

RealVector PcaModel::reconstruct(std::span<const double> coords) const {
  if (coords.size() != components.size()) throw DimensionError("PCA reconstruction dimension mismatch");
  RealVector out = mean;
  for (std::size_t k = 0; k < components.size(); ++k) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coords[k] * components[k][j];
  }
  return out;
}

}  // namespace netad
