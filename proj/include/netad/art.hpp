#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "netad/flow_model.hpp"
#include "netad/svm.hpp"

namespace netad {

struct ArtConfig {
  RealVector vigilance{0.2, 0.2, 0.2, 0.2};  // v_j in [0, 1)
  double radius = 0.1;                        // r
  double tau = 0.05;                          // small-cluster threshold in [0, 1]
  std::size_t max_passes = 100;

  /// Throws ConfigError when any field is out of range.
  void validate() const;
};

struct ArtClusterState {
  std::vector<RealVector> centers;
  std::vector<std::vector<std::size_t>> members;  // T_k, ascending flow indices
  std::vector<std::size_t> assignment;            // flow index -> cluster
  std::size_t passes = 0;
  bool converged = false;

  std::size_t cluster_count() const noexcept { return centers.size(); }
  std::size_t flow_count() const noexcept { return assignment.size(); }
  std::size_t size(std::size_t k) const { return members[k].size(); }
};

/// (n_f, d_b, b, d_t) per flow, min-max scaled per dimension into [0, 1].
/// Constant dimensions map to 0.
std::vector<RealVector> normalize_art(std::span<const ArtFlow> flows);

/// sum_j ((p_j - q_j) / (1 - v_j))^2.
double art_distance(std::span<const double> p, std::span<const double> q, std::span<const double> vigilance);

/// (p * c + g) / (p + 1), componentwise.
RealVector update_center(std::span<const double> center, std::size_t count, std::span<const double> g);

/// Vigilance clustering of normalized points, repeated in input order until a
/// full pass leaves every membership unchanged. Each pass clears memberships
/// but keeps the previous pass's centers as attractors; clusters left empty
/// by a pass are dropped. Processing order matters.
ArtClusterState art_cluster_points(std::span<const RealVector> points, const ArtConfig& cfg);

/// normalize_art followed by art_cluster_points.
ArtClusterState art_cluster(std::span<const ArtFlow> flows, const ArtConfig& cfg);

/// |T_k| / (|G| / |C|) for the cluster of each flow. A flow is flagged at
/// threshold tau exactly when its ratio is below tau.
std::vector<double> art_size_ratios(const ArtClusterState& state);

std::vector<bool> flag_art_clusters(const ArtClusterState& state, double tau);

/// CSV: cluster_id,size,center_1..center_m,flagged
void write_art_clusters(std::ostream& out, const ArtClusterState& state, double tau);
/// CSV: flow_index,cluster_id,flagged
void write_art_flows(std::ostream& out, const ArtClusterState& state, double tau);

}  // namespace netad
