#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "netad/art.hpp"
#include "netad/flow_model.hpp"
#include "netad/stochastic.hpp"
#include "netad/svm_detect.hpp"
#include "netad/windowing.hpp"

namespace netad {

struct RocPoint {
  double threshold = 0.0;
  double false_alarm_rate = 0.0;
  double detection_rate = 0.0;
};

/// Points in sweep order; both rates are non-decreasing along the sweep.
struct RocCurve {
  std::vector<RocPoint> points;
};

enum class ScoreOrientation {
  low_is_anomalous,   // flagged iff score <= threshold (SVM decision values, ART size ratios)
  high_is_anomalous,  // flagged iff score >= threshold (divergences)
};

/// Per-flow truth: true for anomalous flows. Unlabeled flows count as nominal.
std::vector<bool> flow_truth(std::span<const FlowRecord> flows);

/// A window is positive iff it holds at least one anomalous flow.
std::vector<bool> label_windows(std::span<const Window> windows, std::span<const FlowRecord> flows);

/// Windows whose span [start, start + size) meets the interval [a, b).
std::vector<bool> windows_overlapping(std::span<const Window> windows, double size, double a, double b);

/// Thresholds: -inf, every distinct score ascending, +inf (reversed for
/// high_is_anomalous). Throws ConfigError when truth holds a single class
/// or sizes differ.
RocCurve roc_curve(std::span<const double> scores, const std::vector<bool>& truth,
                   ScoreOrientation orientation = ScoreOrientation::low_is_anomalous);

/// Flow-level ROC; lower scores are more anomalous.
RocCurve roc_flow_detector(std::span<const double> scores, const std::vector<bool>& truth);

/// Best detection rate among points whose false-alarm rate is at most fa.
double detection_at(const RocCurve& curve, double fa);

struct TauPoint {
  double tau = 0.0;
  double false_alarm_rate = 0.0;
};

/// False-alarm rate on nominal flows of the small-cluster flag at each tau.
std::vector<TauPoint> tau_vs_false_alarm(const ArtClusterState& state, const std::vector<bool>& truth,
                                         std::span<const double> taus);

/// Flow flagged iff flow_flags[i] and some flagged window contains it.
std::vector<bool> fuse(const std::vector<bool>& flow_flags, std::span<const WindowVerdict> verdicts,
                       std::span<const Window> windows, std::size_t flow_count);

/// Flows covered by at least one flagged window.
std::vector<bool> flows_in_flagged_windows(std::span<const WindowVerdict> verdicts, std::span<const Window> windows,
                                           std::size_t flow_count);

/// ART size ratio for flows inside a flagged window, +inf elsewhere, so that
/// thresholding at tau reproduces fuse(ART flags at tau, ...).
std::vector<double> fused_scores(std::span<const double> art_ratios, std::span<const WindowVerdict> verdicts,
                                 std::span<const Window> windows);

struct Rates {
  double detection_rate = 0.0;    // flagged positives / positives (0 if none)
  double false_alarm_rate = 0.0;  // flagged negatives / negatives (0 if none)
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

Rates rates(const std::vector<bool>& flagged, const std::vector<bool>& truth);
std::vector<bool> window_flags(std::span<const WindowVerdict> verdicts);
std::vector<bool> flow_flags(std::span<const FlowVerdict> verdicts);

/// Rank correlation with average ranks for ties. Returns 0 if either side is constant.
double spearman(std::span<const double> x, std::span<const double> y);

/// CSV: threshold,false_alarm_rate,detection_rate
void write_roc(std::ostream& out, const RocCurve& curve);
/// CSV: tau,false_alarm_rate
void write_tau_curve(std::ostream& out, std::span<const TauPoint> curve);
/// CSV: flow_index,start_time,label,art_flagged,window_flagged,fused
void write_fusion_report(std::ostream& out, std::span<const FlowRecord> flows, const std::vector<bool>& art_flags,
                         const std::vector<bool>& window_cover, const std::vector<bool>& fused);

}  // namespace netad
