#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace netad {

/// IPv4 address as four octets, most significant first.
struct IpAddress {
  std::array<std::uint8_t, 4> octets{};

  static IpAddress parse(std::string_view dotted);
  static IpAddress from_uint(std::uint32_t value);
  std::uint32_t to_uint() const noexcept;
  std::string to_string() const;

  auto operator<=>(const IpAddress&) const = default;
};

/// Weighted L1 distance: sum over octets k=1..4 of 256^(4-k) * |a_k - b_k|.
double ip_distance(const IpAddress& a, const IpAddress& b) noexcept;

enum class Label { nominal, anomalous };

struct PacketRecord {
  IpAddress user;
  double size_bytes = 0.0;
  double start_time = 0.0;
};

struct FlowRecord {
  IpAddress user;
  double size_bytes = 0.0;
  double duration = 0.0;
  double start_time = 0.0;
  std::optional<Label> label;

  bool anomalous() const noexcept { return label == Label::anomalous; }
  friend bool operator==(const FlowRecord&, const FlowRecord&) = default;
};

/// Flow after user-space distillation: (cluster, distance to cluster center, b, d_t, t).
struct DistilledFlow {
  std::size_t cluster = 0;
  double dist_to_center = 0.0;
  double size_bytes = 0.0;
  double duration = 0.0;
  double start_time = 0.0;
};

/// Flow representation used by ART clustering: (n_f, distance to server, b, d_t, t).
struct ArtFlow {
  std::size_t flow_count = 1;
  double dist_to_server = 0.0;
  double size_bytes = 0.0;
  double duration = 0.0;
  double start_time = 0.0;
};

}  // namespace netad
