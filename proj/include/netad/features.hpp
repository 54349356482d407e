#pragma once

#include <cstddef>
#include <iosfwd>
#include <compare>
#include <span>
#include <vector>

#include "netad/flow_model.hpp"

namespace netad {

/// Quantization levels per continuous feature.
struct QuantLevels {
  std::size_t dist = 1;      // |Sigma_{d_a}|
  std::size_t size = 1;      // |Sigma_b|
  std::size_t duration = 1;  // |Sigma_{d_t}|

  std::size_t product() const noexcept { return dist * size * duration; }
};

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
};

struct QuantizerConfig {
  QuantLevels levels;
  FeatureRange dist;
  FeatureRange size;
  FeatureRange duration;

  /// |Sigma| = K * levels.product().
  std::size_t alphabet_size(std::size_t clusters) const noexcept { return clusters * levels.product(); }

  void write(std::ostream& out) const;
};

/// Symbol index into Sigma = {0..K-1} x Sigma_da x Sigma_b x Sigma_dt.
struct FlowState {
  std::size_t symbol = 0;
  auto operator<=>(const FlowState&) const = default;
};

struct StateTuple {
  std::size_t cluster = 0;
  std::size_t dist_bin = 0;
  std::size_t size_bin = 0;
  std::size_t duration_bin = 0;
  auto operator<=>(const StateTuple&) const = default;
};

/// Mixed-radix encoding, cluster most significant, then d_a, b, d_t.
FlowState encode_state(const StateTuple& t, const QuantLevels& levels) noexcept;
StateTuple decode_state(FlowState s, const QuantLevels& levels) noexcept;

/// Midpoint of bin m: min + (m + 1/2) * (max - min) / levels.
double symbol_value(const FeatureRange& range, std::size_t levels, std::size_t m) noexcept;

/// Nearest symbol; values outside the range clamp to the end bins, ties go
/// to the lower bin, and a zero-width range always gives bin 0.
std::size_t quantize_value(double v, const FeatureRange& range, std::size_t levels) noexcept;

/// Ranges are the observed [min, max] of each feature over `reference`.
/// Throws ConfigError on empty reference or a zero level count.
QuantizerConfig fit_quantizer(std::span<const DistilledFlow> reference, const QuantLevels& levels);

FlowState quantize(const DistilledFlow& flow, const QuantizerConfig& q, std::size_t clusters);

std::vector<FlowState> quantize_all(std::span<const DistilledFlow> flows, const QuantizerConfig& q,
                                    std::size_t clusters);

}  // namespace netad
