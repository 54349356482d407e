#include "netad/art.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

void ArtConfig::validate() const {
  if (vigilance.empty()) throw ConfigError("vigilance vector is empty");
  for (double v : vigilance) {
    if (!(v >= 0.0 && v < 1.0)) throw ConfigError("each vigilance must lie in [0, 1)");
  }
  if (!(radius > 0.0)) throw ConfigError("ART radius must be positive");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (max_passes == 0) throw ConfigError("max_passes must be positive");
}

std::vector<RealVector> normalize_art(std::span<const ArtFlow> flows) {
  std::vector<RealVector> raw;
  raw.reserve(flows.size());
  for (const auto& f : flows) {
    raw.push_back({static_cast<double>(f.flow_count), f.dist_to_server, f.size_bytes, f.duration});
  }
  if (raw.empty()) return raw;
  for (std::size_t j = 0; j < 4; ++j) {
    double lo = raw.front()[j], hi = raw.front()[j];
    for (const auto& g : raw) {
      lo = std::min(lo, g[j]);
      hi = std::max(hi, g[j]);
    }
    const double width = hi - lo;
    for (auto& g : raw) g[j] = width > 0.0 ? (g[j] - lo) / width : 0.0;
  }
  return raw;
}

double art_distance(std::span<const double> p, std::span<const double> q, std::span<const double> vigilance) {
  if (p.size() != q.size() || p.size() != vigilance.size()) throw DimensionError("ART distance dimension mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double z = (p[j] - q[j]) / (1.0 - vigilance[j]);
    d += z * z;
  }
  return d;
}

RealVector update_center(std::span<const double> center, std::size_t count, std::span<const double> g) {
  if (center.size() != g.size()) throw DimensionError("center update dimension mismatch");
  const double p = static_cast<double>(count);
  RealVector out(center.size());
  for (std::size_t j = 0; j < center.size(); ++j) out[j] = (p * center[j] + g[j]) / (p + 1.0);
  return out;
}

namespace {

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d += (a[j] - b[j]) * (a[j] - b[j]);
  return d;
}

}  // namespace

ArtClusterState art_cluster_points(std::span<const RealVector> points, const ArtConfig& cfg) {
  cfg.validate();
  if (points.empty()) throw ConfigError("ART clustering needs at least one flow");
  for (const auto& g : points) {
    if (g.size() != cfg.vigilance.size()) throw DimensionError("vigilance length does not match feature dimension");
  }

  ArtClusterState state;
  std::vector<std::size_t> previous;
  for (std::size_t pass = 1; pass <= cfg.max_passes; ++pass) {
    std::vector<RealVector> centers = state.centers;
    std::vector<std::size_t> counts(centers.size(), 0);
    std::vector<std::size_t> assignment(points.size());

    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& g = points[i];
      std::size_t best = centers.size();
      double best_e = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < centers.size(); ++k) {
        if (art_distance(g, centers[k], cfg.vigilance) >= cfg.radius) continue;
        const double e = squared_euclidean(g, centers[k]);
        if (e < best_e) {
          best_e = e;
          best = k;
        }
      }
      if (best == centers.size()) {
        centers.push_back(g);
        counts.push_back(1);
      } else {
        centers[best] = update_center(centers[best], counts[best], g);
        ++counts[best];
      }
      assignment[i] = best;
    }

    // Drop clusters that attracted nobody this pass; renumber in order.
    std::vector<std::size_t> remap(centers.size(), 0);
    state.centers.clear();
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (counts[k] == 0) continue;
      remap[k] = state.centers.size();
      state.centers.push_back(std::move(centers[k]));
    }
    for (auto& a : assignment) a = remap[a];
    state.members.assign(state.centers.size(), {});
    for (std::size_t i = 0; i < assignment.size(); ++i) state.members[assignment[i]].push_back(i);
    state.assignment = std::move(assignment);
    state.passes = pass;

    if (state.assignment == previous) {
      state.converged = true;
      break;
    }
    previous = state.assignment;
  }
  return state;
}

ArtClusterState art_cluster(std::span<const ArtFlow> flows, const ArtConfig& cfg) {
  const auto points = normalize_art(flows);
  return art_cluster_points(points, cfg);
}

std::vector<double> art_size_ratios(const ArtClusterState& state) {
  const double mean_size =
      static_cast<double>(state.flow_count()) / static_cast<double>(std::max<std::size_t>(1, state.cluster_count()));
  std::vector<double> ratios(state.flow_count());
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    ratios[i] = static_cast<double>(state.size(state.assignment[i])) / mean_size;
  }
  return ratios;
}

std::vector<bool> flag_art_clusters(const ArtClusterState& state, double tau) {
  const double cutoff =
      tau * static_cast<double>(state.flow_count()) / static_cast<double>(std::max<std::size_t>(1, state.cluster_count()));
  std::vector<bool> flags(state.flow_count());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    flags[i] = static_cast<double>(state.size(state.assignment[i])) < cutoff;
  }
  return flags;
}

void write_art_clusters(std::ostream& out, const ArtClusterState& state, double tau) {
  const double cutoff =
      tau * static_cast<double>(state.flow_count()) / static_cast<double>(std::max<std::size_t>(1, state.cluster_count()));
  out << "cluster_id,size";
  const std::size_t dim = state.centers.empty() ? 0 : state.centers.front().size();
  for (std::size_t j = 1; j <= dim; ++j) out << ",center_" << j;
  out << ",flagged\n";
  for (std::size_t k = 0; k < state.cluster_count(); ++k) {
    out << k << ',' << state.size(k);
    for (double c : state.centers[k]) out << ',' << format_real(c);
    out << ',' << (static_cast<double>(state.size(k)) < cutoff ? 1 : 0) << '\n';
  }
}

void write_art_flows(std::ostream& out, const ArtClusterState& state, double tau) {
  const auto flags = flag_art_clusters(state, tau);
  out << "flow_index,cluster_id,flagged\n";
  for (std::size_t i = 0; i < state.flow_count(); ++i) {
    out << i << ',' << state.assignment[i] << ',' << (flags[i] ? 1 : 0) << '\n';
  }
}

}  // namespace netad
