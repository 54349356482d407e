#include "netad/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "netad/error.hpp"
#include "netad/random.hpp"

namespace netad {

std::vector<FlowRecord> aggregate_packets(std::span<const PacketRecord> packets, const FlowGapConfig& cfg) {
  if (!(cfg.delta_f > 0.0)) throw ConfigError("delta_f must be positive");

  struct OpenFlow {
    std::size_t index;
    double last_time;
  };
  std::vector<FlowRecord> flows;
  std::unordered_map<std::uint32_t, OpenFlow> open;

  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto& p = packets[i];
    if (i > 0 && p.start_time < packets[i - 1].start_time) {
      throw OrderingError("packet " + std::to_string(i) + " starts before its predecessor");
    }
    auto it = open.find(p.user.to_uint());
    if (it != open.end() && p.start_time - it->second.last_time < cfg.delta_f) {
      auto& f = flows[it->second.index];
      f.size_bytes += p.size_bytes;
      f.duration = p.start_time - f.start_time;
      it->second.last_time = p.start_time;
      continue;
    }
    flows.push_back(FlowRecord{p.user, p.size_bytes, 0.0, p.start_time, std::nullopt});
    open[p.user.to_uint()] = OpenFlow{flows.size() - 1, p.start_time};
  }
  return flows;
}

ScaledAddress scale_address(const IpAddress& ip) noexcept {
  ScaledAddress s{};
  double weight = 256.0 * 256.0 * 256.0;
  for (std::size_t k = 0; k < 4; ++k) {
    s[k] = weight * ip.octets[k];
    weight /= 256.0;
  }
  return s;
}

namespace {

double squared_distance(const ScaledAddress& a, const ScaledAddress& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < 4; ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
  return d;
}

IpAddress round_center(const ScaledAddress& c) {
  IpAddress ip;
  double weight = 256.0 * 256.0 * 256.0;
  for (std::size_t k = 0; k < 4; ++k) {
    ip.octets[k] = static_cast<std::uint8_t>(std::clamp(std::round(c[k] / weight), 0.0, 255.0));
    weight /= 256.0;
  }
  return ip;
}

std::size_t nearest(const std::vector<ScaledAddress>& centers, const ScaledAddress& p) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.size(); ++k) {
    double d = squared_distance(centers[k], p);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

}  // namespace

UserClusterModel::UserClusterModel(std::vector<ScaledAddress> centers, std::map<IpAddress, std::size_t> assignment,
                                   std::vector<double> cost_history)
    : centers_(std::move(centers)), assignment_(std::move(assignment)), cost_history_(std::move(cost_history)) {
  rounded_.reserve(centers_.size());
  for (const auto& c : centers_) rounded_.push_back(round_center(c));
}

std::size_t UserClusterModel::cluster_of(const IpAddress& ip) const {
  auto it = assignment_.find(ip);
  return it != assignment_.end() ? it->second : nearest_center(ip);
}

std::size_t UserClusterModel::nearest_center(const IpAddress& ip) const {
  return nearest(centers_, scale_address(ip));
}

void UserClusterModel::write_centers(std::ostream& out) const {
  out << "cluster_id,oct1,oct2,oct3,oct4\n";
  for (std::size_t k = 0; k < rounded_.size(); ++k) {
    out << k;
    for (auto o : rounded_[k].octets) out << ',' << int{o};
    out << '\n';
  }
}

void UserClusterModel::write_assignment(std::ostream& out) const {
  out << "ip,cluster_id\n";
  for (const auto& [ip, k] : assignment_) out << ip.to_string() << ',' << k << '\n';
}

UserClusterModel fit_user_clusters(std::span<const IpAddress> addresses, std::size_t k, std::uint64_t seed) {
  std::vector<IpAddress> unique(addresses.begin(), addresses.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  if (k == 0) throw ConfigError("cluster count K must be positive");
  if (unique.size() < k) {
    throw ConfigError("need at least K=" + std::to_string(k) + " distinct addresses, got " +
                      std::to_string(unique.size()));
  }

  const std::size_t n = unique.size();
  std::vector<ScaledAddress> points(n);
  for (std::size_t i = 0; i < n; ++i) points[i] = scale_address(unique[i]);

  // Farthest-point seeding from a random first center.
  Rng rng(seed, 0);
  std::vector<ScaledAddress> centers;
  centers.push_back(points[rng.index(n)]);
  std::vector<double> nearest_d(n, std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest_d[i] = std::min(nearest_d[i], squared_distance(points[i], centers.back()));
      if (nearest_d[i] > far_d) {
        far_d = nearest_d[i];
        far = i;
      }
    }
    centers.push_back(points[far]);
  }

  std::vector<std::size_t> labels(n, k);
  std::vector<double> costs;
  constexpr std::size_t kMaxIterations = 1000;
  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = false;
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = nearest(centers, points[i]);
      cost += squared_distance(points[i], centers[c]);
      if (c != labels[i]) {
        labels[i] = c;
        changed = true;
      }
    }
    costs.push_back(cost);
    if (!changed) break;

    std::vector<ScaledAddress> sums(k, ScaledAddress{});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < 4; ++d) sums[labels[i]][d] += points[i][d];
      ++counts[labels[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (std::size_t d = 0; d < 4; ++d) centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
    }
    // Re-seed empty clusters with the point farthest from its own center.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        double d = squared_distance(points[i], centers[labels[i]]);
        if (d > far_d && counts[labels[i]] > 1) {
          far_d = d;
          far = i;
        }
      }
      --counts[labels[far]];
      centers[c] = points[far];
      labels[far] = c;
      counts[c] = 1;
    }
  }

  std::map<IpAddress, std::size_t> assignment;
  for (std::size_t i = 0; i < n; ++i) assignment.emplace(unique[i], labels[i]);
  return UserClusterModel(std::move(centers), std::move(assignment), std::move(costs));
}

std::vector<DistilledFlow> distill_flows(std::span<const FlowRecord> flows, const UserClusterModel& model) {
  std::vector<DistilledFlow> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    std::size_t k = model.cluster_of(f.user);
    out.push_back(DistilledFlow{k, ip_distance(f.user, model.center_addresses()[k]), f.size_bytes, f.duration,
                                f.start_time});
  }
  return out;
}

std::vector<ArtFlow> art_features(std::span<const FlowRecord> flows, const IpAddress& server) {
  std::unordered_map<std::uint32_t, std::size_t> counts;
  for (const auto& f : flows) ++counts[f.user.to_uint()];
  std::vector<ArtFlow> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    out.push_back(ArtFlow{counts[f.user.to_uint()], ip_distance(f.user, server), f.size_bytes, f.duration,
                          f.start_time});
  }
  return out;
}

}  // namespace netad
