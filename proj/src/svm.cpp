#include "netad/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <ostream>
#include <unordered_map>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

double rbf_kernel(std::span<const double> u, std::span<const double> v, double gamma) {
  if (u.size() != v.size()) {
    throw DimensionError("kernel arguments of length " + std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
  }
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) d += (u[i] - v[i]) * (u[i] - v[i]);
  return std::exp(-gamma * d);
}

Standardizer Standardizer::fit(std::span<const RealVector> data) {
  if (data.empty()) throw ConfigError("standardizer needs data");
  const std::size_t dim = data.front().size();
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.scale.assign(dim, 1.0);
  for (const auto& x : data) {
    if (x.size() != dim) throw DimensionError("ragged training data");
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] += x[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(data.size());
  std::vector<double> var(dim, 0.0);
  for (const auto& x : data) {
    for (std::size_t j = 0; j < dim; ++j) var[j] += (x[j] - s.mean[j]) * (x[j] - s.mean[j]);
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(var[j] / static_cast<double>(data.size()));
    if (sd > 0.0) s.scale[j] = sd;
  }
  return s;
}

RealVector Standardizer::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) throw DimensionError("standardizer dimension mismatch");
  RealVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

std::vector<RealVector> Standardizer::apply_all(std::span<const RealVector> data) const {
  std::vector<RealVector> out;
  out.reserve(data.size());
  for (const auto& x : data) out.push_back(apply(x));
  return out;
}

double default_gamma(std::span<const RealVector> data) {
  if (data.empty() || data.front().empty()) throw ConfigError("gamma needs non-empty data");
  const std::size_t dim = data.front().size();
  const double n = static_cast<double>(data.size());
  double total_var = 0.0;
  for (std::size_t j = 0; j < dim; ++j) {
    double mean = 0.0;
    for (const auto& x : data) mean += x[j];
    mean /= n;
    double var = 0.0;
    for (const auto& x : data) var += (x[j] - mean) * (x[j] - mean);
    total_var += var / n;
  }
  const double mean_var = total_var / static_cast<double>(dim);
  return mean_var > 0.0 ? 1.0 / (static_cast<double>(dim) * mean_var) : 1.0 / static_cast<double>(dim);
}

namespace {

/// Kernel columns computed on demand, least recently used evicted first.
class KernelCache {
 public:
  KernelCache(std::span<const RealVector> data, double gamma, std::size_t budget_bytes)
      : data_(data), gamma_(gamma) {
    const std::size_t per_column = std::max<std::size_t>(1, data.size() * sizeof(double));
    capacity_ = std::max<std::size_t>(2, budget_bytes / per_column);
  }

  const std::vector<double>& column(std::size_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      lru_.splice(lru_.begin(), lru_, it->second);
      return it->second->second;
    }
    if (lru_.size() >= capacity_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    std::vector<double> col(data_.size());
    for (std::size_t t = 0; t < data_.size(); ++t) col[t] = rbf_kernel(data_[i], data_[t], gamma_);
    lru_.emplace_front(i, std::move(col));
    index_[i] = lru_.begin();
    return lru_.front().second;
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  std::span<const RealVector> data_;
  double gamma_;
  std::size_t capacity_;
  std::list<Entry> lru_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

constexpr std::size_t kCacheBudget = std::size_t{128} << 20;

// Bound-aware offset: the mean gradient over free variables, or the midpoint
// of the feasible interval when every variable sits at a bound.
double compute_rho(const std::vector<double>& alpha, const std::vector<double>& grad, double upper) {
  const double eps = 1e-12 * upper;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower_bound = -std::numeric_limits<double>::infinity();  // max G over alpha = U
  double upper_bound = std::numeric_limits<double>::infinity();   // min G over alpha = 0
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    if (alpha[t] > eps && alpha[t] < upper - eps) {
      free_sum += grad[t];
      ++free_count;
    } else if (alpha[t] >= upper - eps) {
      lower_bound = std::max(lower_bound, grad[t]);
    } else {
      upper_bound = std::min(upper_bound, grad[t]);
    }
  }
  if (free_count > 0) return free_sum / static_cast<double>(free_count);
  if (std::isinf(lower_bound)) return upper_bound;
  if (std::isinf(upper_bound)) return lower_bound;
  return 0.5 * (lower_bound + upper_bound);
}

}  // namespace

double OcsvmDual::kkt_residual() const {
  const double eps = 1e-12 * upper;
  double worst = 0.0;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    const double g = gradient[t] - rho;
    double r;
    if (alpha[t] <= eps) {
      r = std::max(0.0, -g);
    } else if (alpha[t] >= upper - eps) {
      r = std::max(0.0, g);
    } else {
      r = std::abs(g);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

OcsvmDual solve_one_class_dual(std::span<const RealVector> data, const OcsvmParams& params) {
  const std::size_t l = data.size();
  if (l < 2) throw ConfigError("one-class SVM needs at least 2 training points");
  if (!(params.nu > 0.0 && params.nu <= 1.0)) throw ConfigError("nu must lie in (0, 1]");
  if (params.nu * static_cast<double>(l) < 1.0) {
    throw ConfigError("nu * l must be at least 1 (nu=" + format_real(params.nu) + ", l=" + std::to_string(l) + ")");
  }
  if (!(params.gamma > 0.0)) throw ConfigError("gamma must be positive");
  const std::size_t dim = data.front().size();
  for (const auto& x : data) {
    if (x.size() != dim) throw DimensionError("ragged training data");
  }

  OcsvmDual dual;
  dual.upper = 1.0 / (params.nu * static_cast<double>(l));
  const double upper = dual.upper;
  dual.alpha.assign(l, 0.0);
  // Feasible start: fill the first floor(nu l) points to the bound, remainder on the next.
  double remaining = 1.0;
  for (std::size_t t = 0; t < l && remaining > 0.0; ++t) {
    dual.alpha[t] = std::min(upper, remaining);
    remaining -= dual.alpha[t];
  }

  KernelCache cache(data, params.gamma, kCacheBudget);
  dual.gradient.assign(l, 0.0);
  for (std::size_t t = 0; t < l; ++t) {
    if (dual.alpha[t] == 0.0) continue;
    const auto& col = cache.column(t);
    for (std::size_t s = 0; s < l; ++s) dual.gradient[s] += dual.alpha[t] * col[s];
  }

  auto& alpha = dual.alpha;
  auto& grad = dual.gradient;
  std::size_t iter = 0;
  for (;; ++iter) {
    // i: may increase (alpha < U), smallest gradient. j: may decrease (alpha > 0), largest gradient.
    std::size_t i = l, j = l;
    double g_min = std::numeric_limits<double>::infinity();
    double g_max = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < l; ++t) {
      if (alpha[t] < upper && grad[t] < g_min) {
        g_min = grad[t];
        i = t;
      }
      if (alpha[t] > 0.0 && grad[t] > g_max) {
        g_max = grad[t];
        j = t;
      }
    }
    if (i == l || j == l || g_max - g_min <= params.tol) break;
    if (iter >= params.max_iterations) {
      dual.rho = compute_rho(alpha, grad, upper);
      throw ConvergenceError("one-class SVM did not converge in " + std::to_string(params.max_iterations) +
                                 " pair updates",
                             alpha, dual.rho);
    }

    const auto& col_i = cache.column(i);
    const std::vector<double> col_i_copy = col_i;  // column(j) may evict i
    const auto& col_j = cache.column(j);
    const double curvature = std::max(col_i_copy[i] + col_j[j] - 2.0 * col_i_copy[j], 1e-12);
    double delta = (g_max - g_min) / curvature;
    delta = std::min({delta, upper - alpha[i], alpha[j]});
    alpha[i] += delta;
    alpha[j] -= delta;
    if (upper - alpha[i] < 1e-15 * upper) alpha[i] = upper;
    if (alpha[j] < 1e-15 * upper) alpha[j] = 0.0;
    for (std::size_t t = 0; t < l; ++t) grad[t] += delta * (col_i_copy[t] - col_j[t]);
  }

  dual.iterations = iter;
  dual.rho = compute_rho(alpha, grad, upper);
  double obj = 0.0;
  for (std::size_t t = 0; t < l; ++t) obj += alpha[t] * grad[t];
  dual.objective = 0.5 * obj;
  return dual;
}

OcsvmModel train_ocsvm(std::span<const RealVector> data, const OcsvmParams& params) {
  auto dual = solve_one_class_dual(data, params);
  OcsvmModel model;
  model.rho = dual.rho;
  model.nu = params.nu;
  model.gamma = params.gamma;
  for (std::size_t t = 0; t < data.size(); ++t) {
    if (dual.alpha[t] > 0.0) {
      model.support_vectors.push_back(data[t]);
      model.alphas.push_back(dual.alpha[t]);
    }
  }
  return model;
}

double decision_value(const OcsvmModel& model, std::span<const double> x) {
  double f = 0.0;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    f += model.alphas[i] * rbf_kernel(model.support_vectors[i], x, model.gamma);
  }
  return f - model.rho;
}

void OcsvmModel::write(std::ostream& out, std::span<const std::pair<std::string, double>> extra) const {
  out << "key,value\n";
  out << "rho," << format_real(rho) << '\n';
  out << "nu," << format_real(nu) << '\n';
  out << "gamma," << format_real(gamma) << '\n';
  for (const auto& [k, v] : extra) out << k << ',' << format_real(v) << '\n';
  out << '\n';
  out << "alpha";
  const std::size_t dim = support_vectors.empty() ? 0 : support_vectors.front().size();
  for (std::size_t j = 0; j < dim; ++j) out << ",x" << j;
  out << '\n';
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    out << format_real(alphas[i]);
    for (double v : support_vectors[i]) out << ',' << format_real(v);
    out << '\n';
  }
}

}  // namespace netad
