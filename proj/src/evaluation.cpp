#include "netad/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

std::vector<bool> flow_truth(std::span<const FlowRecord> flows) {
  std::vector<bool> truth(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) truth[i] = flows[i].anomalous();
  return truth;
}

std::vector<bool> label_windows(std::span<const Window> windows, std::span<const FlowRecord> flows) {
  std::vector<bool> out(windows.size(), false);
  for (std::size_t j = 0; j < windows.size(); ++j) {
    for (auto i : windows[j].members) {
      if (flows[i].anomalous()) {
        out[j] = true;
        break;
      }
    }
  }
  return out;
}

std::vector<bool> windows_overlapping(std::span<const Window> windows, double size, double a, double b) {
  std::vector<bool> out(windows.size());
  for (std::size_t j = 0; j < windows.size(); ++j) out[j] = windows[j].start < b && windows[j].start + size > a;
  return out;
}

RocCurve roc_curve(std::span<const double> scores, const std::vector<bool>& truth, ScoreOrientation orientation) {
  if (scores.size() != truth.size()) throw ConfigError("score and truth counts differ");
  const auto positives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  const std::size_t negatives = truth.size() - positives;
  if (positives == 0 || negatives == 0) throw ConfigError("ROC needs both positive and negative examples");

  const bool low = orientation == ScoreOrientation::low_is_anomalous;
  // Sort by decreasing suspicion and sweep, emitting a point after each tie group.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return low ? scores[a] < scores[b] : scores[a] > scores[b];
  });

  RocCurve curve;
  curve.points.push_back(RocPoint{low ? -kInf : kInf, 0.0, 0.0});
  std::size_t tp = 0;
  std::size_t fp = 0;
  const auto point = [&](double thr) {
    return RocPoint{thr, static_cast<double>(fp) / static_cast<double>(negatives),
                    static_cast<double>(tp) / static_cast<double>(positives)};
  };
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    while (i < order.size() && scores[order[i]] == s) {
      if (truth[order[i]]) ++tp; else ++fp;
      ++i;
    }
    if (std::isinf(s)) continue;  // folded into the sentinel
    curve.points.push_back(point(s));
  }
  curve.points.push_back(RocPoint{low ? kInf : -kInf, 1.0, 1.0});
  return curve;
}

RocCurve roc_flow_detector(std::span<const double> scores, const std::vector<bool>& truth) {
  return roc_curve(scores, truth, ScoreOrientation::low_is_anomalous);
}

double detection_at(const RocCurve& curve, double fa) {
  double best = 0.0;
  for (const auto& p : curve.points) {
    if (p.false_alarm_rate <= fa) best = std::max(best, p.detection_rate);
  }
  return best;
}

std::vector<TauPoint> tau_vs_false_alarm(const ArtClusterState& state, const std::vector<bool>& truth,
                                         std::span<const double> taus) {
  if (truth.size() != state.flow_count()) throw ConfigError("truth and clustering sizes differ");
  const auto negatives = static_cast<std::size_t>(std::count(truth.begin(), truth.end(), false));
  std::vector<TauPoint> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    const auto flags = flag_art_clusters(state, tau);
    std::size_t fp = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) fp += flags[i] && !truth[i];
    out.push_back(TauPoint{tau, negatives ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0});
  }
  return out;
}

std::vector<bool> flows_in_flagged_windows(std::span<const WindowVerdict> verdicts, std::span<const Window> windows,
                                           std::size_t flow_count) {
  if (verdicts.size() != windows.size()) throw ConfigError("verdict and window counts differ");
  std::vector<bool> cover(flow_count, false);
  for (std::size_t j = 0; j < windows.size(); ++j) {
    if (!verdicts[j].flagged) continue;
    for (auto i : windows[j].members) {
      if (i >= flow_count) throw DimensionError("window member outside the flow sequence");
      cover[i] = true;
    }
  }
  return cover;
}

std::vector<bool> fuse(const std::vector<bool>& flow_flags, std::span<const WindowVerdict> verdicts,
                       std::span<const Window> windows, std::size_t flow_count) {
  if (flow_flags.size() != flow_count) throw ConfigError("flow flag count differs from flow count");
  auto out = flows_in_flagged_windows(verdicts, windows, flow_count);
  for (std::size_t i = 0; i < flow_count; ++i) out[i] = out[i] && flow_flags[i];
  return out;
}

std::vector<double> fused_scores(std::span<const double> art_ratios, std::span<const WindowVerdict> verdicts,
                                 std::span<const Window> windows) {
  const auto cover = flows_in_flagged_windows(verdicts, windows, art_ratios.size());
  std::vector<double> out(art_ratios.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cover[i] ? art_ratios[i] : kInf;
  return out;
}

Rates rates(const std::vector<bool>& flagged, const std::vector<bool>& truth) {
  if (flagged.size() != truth.size()) throw ConfigError("flag and truth counts differ");
  Rates r;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i]) {
      ++r.positives;
      tp += flagged[i];
    } else {
      ++r.negatives;
      fp += flagged[i];
    }
  }
  if (r.positives) r.detection_rate = static_cast<double>(tp) / static_cast<double>(r.positives);
  if (r.negatives) r.false_alarm_rate = static_cast<double>(fp) / static_cast<double>(r.negatives);
  return r;
}

std::vector<bool> window_flags(std::span<const WindowVerdict> verdicts) {
  std::vector<bool> out(verdicts.size());
  for (std::size_t j = 0; j < verdicts.size(); ++j) out[j] = verdicts[j].flagged;
  return out;
}

std::vector<bool> flow_flags(std::span<const FlowVerdict> verdicts) {
  std::vector<bool> out(verdicts.size());
  for (std::size_t i = 0; i < verdicts.size(); ++i) out[i] = verdicts[i].flagged;
  return out;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("spearman inputs differ in length");
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

void write_roc(std::ostream& out, const RocCurve& curve) {
  out << "threshold,false_alarm_rate,detection_rate\n";
  for (const auto& p : curve.points) {
    out << format_real(p.threshold) << ',' << format_real(p.false_alarm_rate) << ','
        << format_real(p.detection_rate) << '\n';
  }
}

void write_tau_curve(std::ostream& out, std::span<const TauPoint> curve) {
  out << "tau,false_alarm_rate\n";
  for (const auto& p : curve) out << format_real(p.tau) << ',' << format_real(p.false_alarm_rate) << '\n';
}

void write_fusion_report(std::ostream& out, std::span<const FlowRecord> flows, const std::vector<bool>& art_flags,
                         const std::vector<bool>& window_cover, const std::vector<bool>& fused) {
  if (art_flags.size() != flows.size() || window_cover.size() != flows.size() || fused.size() != flows.size()) {
    throw ConfigError("fusion report inputs differ in length");
  }
  out << "flow_index,start_time,label,art_flagged,window_flagged,fused\n";
  for (std::size_t i = 0; i < flows.size(); ++i) {
    out << i << ',' << format_real(flows[i].start_time) << ',' << (flows[i].anomalous() ? 1 : 0)
        << ',' << int(art_flags[i]) << ',' << int(window_cover[i]) << ',' << int(fused[i]) << '\n';
  }
}

}  // namespace netad
