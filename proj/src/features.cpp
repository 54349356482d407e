#include "netad/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

FlowState encode_state(const StateTuple& t, const QuantLevels& levels) noexcept {
  std::size_t s = t.cluster;
  s = s * levels.dist + t.dist_bin;
  s = s * levels.size + t.size_bin;
  s = s * levels.duration + t.duration_bin;
  return FlowState{s};
}

StateTuple decode_state(FlowState s, const QuantLevels& levels) noexcept {
  StateTuple t;
  std::size_t v = s.symbol;
  t.duration_bin = v % levels.duration;
  v /= levels.duration;
  t.size_bin = v % levels.size;
  v /= levels.size;
  t.dist_bin = v % levels.dist;
  t.cluster = v / levels.dist;
  return t;
}

double symbol_value(const FeatureRange& range, std::size_t levels, std::size_t m) noexcept {
  return range.min + (static_cast<double>(m) + 0.5) * (range.max - range.min) / static_cast<double>(levels);
}

std::size_t quantize_value(double v, const FeatureRange& range, std::size_t levels) noexcept {
  const double width = range.max - range.min;
  if (!(width > 0.0) || levels <= 1) return 0;
  // Position in bin units. Bin m covers (m, m+1]; the boundary m itself is
  // equidistant from midpoints m-1/2 and m+1/2 and resolves downward.
  const double t = static_cast<double>(levels) * (v - range.min) / width;
  if (t <= 0.0) return 0;
  const double bin = std::ceil(t) - 1.0;
  return static_cast<std::size_t>(std::min(bin, static_cast<double>(levels - 1)));
}

QuantizerConfig fit_quantizer(std::span<const DistilledFlow> reference, const QuantLevels& levels) {
  if (reference.empty()) throw ConfigError("quantizer needs a non-empty reference");
  if (levels.dist == 0 || levels.size == 0 || levels.duration == 0) {
    throw ConfigError("quantization levels must be positive");
  }
  QuantizerConfig q;
  q.levels = levels;
  auto range_of = [&](auto field) {
    auto [lo, hi] = std::minmax_element(reference.begin(), reference.end(),
                                        [&](const auto& a, const auto& b) { return field(a) < field(b); });
    return FeatureRange{field(*lo), field(*hi)};
  };
  q.dist = range_of([](const DistilledFlow& f) { return f.dist_to_center; });
  q.size = range_of([](const DistilledFlow& f) { return f.size_bytes; });
  q.duration = range_of([](const DistilledFlow& f) { return f.duration; });
  return q;
}

FlowState quantize(const DistilledFlow& flow, const QuantizerConfig& q, std::size_t clusters) {
  if (flow.cluster >= clusters) {
    throw DimensionError("cluster id " + std::to_string(flow.cluster) + " outside K=" + std::to_string(clusters));
  }
  return encode_state(StateTuple{flow.cluster, quantize_value(flow.dist_to_center, q.dist, q.levels.dist),
                                 quantize_value(flow.size_bytes, q.size, q.levels.size),
                                 quantize_value(flow.duration, q.duration, q.levels.duration)},
                      q.levels);
}

std::vector<FlowState> quantize_all(std::span<const DistilledFlow> flows, const QuantizerConfig& q,
                                    std::size_t clusters) {
  std::vector<FlowState> out;
  out.reserve(flows.size());
  for (const auto& f : flows) out.push_back(quantize(f, q, clusters));
  return out;
}

void QuantizerConfig::write(std::ostream& out) const {
  out << "feature,min,max,levels\n";
  out << "dist_to_center," << format_real(dist.min) << ',' << format_real(dist.max) << ',' << levels.dist << '\n';
  out << "size_bytes," << format_real(size.min) << ',' << format_real(size.max) << ',' << levels.size << '\n';
  out << "duration," << format_real(duration.min) << ',' << format_real(duration.max) << ',' << levels.duration
      << '\n';
}

}  // namespace netad
