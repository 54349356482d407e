#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "netad/flow_model.hpp"

namespace netad {

struct FlowGapConfig {
  /// Inter-packet gap (seconds) at or above which a user's flow is closed.
  double delta_f = 10.0;
};

/// Groups time-sorted packets into flows, per user. A packet joins the user's
/// open flow when it arrives less than delta_f after that flow's last packet.
/// Throws OrderingError on unsorted input, ConfigError if delta_f <= 0.
std::vector<FlowRecord> aggregate_packets(std::span<const PacketRecord> packets, const FlowGapConfig& cfg);

/// Address embedded as (o1*256^3, o2*256^2, o3*256, o4).
using ScaledAddress = std::array<double, 4>;
ScaledAddress scale_address(const IpAddress& ip) noexcept;

/// K-means partition of the user address space.
class UserClusterModel {
 public:
  UserClusterModel(std::vector<ScaledAddress> centers, std::map<IpAddress, std::size_t> assignment,
                   std::vector<double> cost_history);

  std::size_t cluster_count() const noexcept { return centers_.size(); }
  const std::vector<ScaledAddress>& centers() const noexcept { return centers_; }
  /// Centers rounded to the nearest octet and clamped into [0, 255].
  const std::vector<IpAddress>& center_addresses() const noexcept { return rounded_; }
  const std::map<IpAddress, std::size_t>& assignment() const noexcept { return assignment_; }
  /// Within-cluster squared distance after each assignment step.
  const std::vector<double>& cost_history() const noexcept { return cost_history_; }

  /// Fitted cluster of a known address; nearest center otherwise.
  std::size_t cluster_of(const IpAddress& ip) const;
  std::size_t nearest_center(const IpAddress& ip) const;

  void write_centers(std::ostream& out) const;
  void write_assignment(std::ostream& out) const;

 private:
  std::vector<ScaledAddress> centers_;
  std::vector<IpAddress> rounded_;
  std::map<IpAddress, std::size_t> assignment_;
  std::vector<double> cost_history_;
};

/// Lloyd iteration in the scaled embedding with farthest-point seeding.
/// Duplicate addresses are collapsed. Throws ConfigError when fewer than K
/// distinct addresses are given or K == 0.
UserClusterModel fit_user_clusters(std::span<const IpAddress> addresses, std::size_t k, std::uint64_t seed);

std::vector<DistilledFlow> distill_flows(std::span<const FlowRecord> flows, const UserClusterModel& model);

/// n_f counts flows per user over `flows` itself.
std::vector<ArtFlow> art_features(std::span<const FlowRecord> flows, const IpAddress& server);

}  // namespace netad
