#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "netad/aggregation.hpp"
#include "netad/features.hpp"
#include "netad/windowing.hpp"

namespace netad {

/// H(nu | mu) = sum nu * ln(nu / mu) in nats, with 0 ln 0 = 0.
/// Throws DimensionError on size mismatch.
double relative_entropy(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu);

/// H_B(Q | Pi) = sum_ij q(i,j) ln(q(j|i) / pi(j|i)). Zero-mass pairs and
/// zero-marginal rows of q contribute nothing.
double relative_entropy_markov(const TransitionMeasure& q, const TransitionMeasure& pi);

/// eta = -(1/n) ln(epsilon). Throws ConfigError unless 0 < epsilon < 1 and n >= 1.
double sanov_threshold(double epsilon, std::size_t n);

/// Nominal behaviour learned from the reference flow set.
struct ReferenceModel {
  UserClusterModel clusters;
  QuantizerConfig quantizer;
  EmpiricalMeasure mu;    // smoothed marginal over Sigma
  TransitionMeasure pi;   // smoothed pair measure over Sigma x Sigma
  std::vector<FlowState> states;  // quantized reference sequence, unsmoothed

  std::size_t alphabet_size() const noexcept { return mu.probs.size(); }
};

struct ReferenceOptions {
  std::size_t clusters = 3;
  QuantLevels levels{2, 3, 1};
  /// Added to every cell of mu and Pi; unset means 1/|Sigma|, one
  /// pseudo-observation per distribution row.
  std::optional<double> pseudo_count;
  std::uint64_t seed = 1;
};

/// Fits the user clusters and quantizer on `reference` and computes mu and Pi
/// with the pseudo-count added to every cell before normalization.
ReferenceModel build_reference(std::span<const FlowRecord> reference, const ReferenceOptions& opts);

/// Smoothed measures from an already-quantized sequence.
EmpiricalMeasure smoothed_measure(std::span<const FlowState> states, std::size_t sigma_size, double pseudo_count);
TransitionMeasure smoothed_transitions(std::span<const FlowState> states, std::size_t sigma_size,
                                       double pseudo_count);

struct WindowVerdict {
  std::size_t window_index = 0;
  double start_time = 0.0;
  std::size_t flow_count = 0;
  double score = 0.0;
  double threshold = 0.0;
  bool flagged = false;
  bool degenerate = false;  // too few flows to evaluate
};

enum class ThresholdMode {
  per_window,  // n = |G_j|
  fixed_mean,  // n = mean |G_j| over evaluated windows
};

struct StochasticOptions {
  double epsilon = 0.01;
  ThresholdMode mode = ThresholdMode::per_window;
};

/// Model-free test: flag window j when H(E^{G_j} | mu) >= eta(epsilon, n).
std::vector<WindowVerdict> detect_model_free(std::span<const Window> windows, std::span<const FlowState> states,
                                             const ReferenceModel& ref, const StochasticOptions& opts);

/// Model-based test on the transition measure; windows with < 2 flows are degenerate.
std::vector<WindowVerdict> detect_model_based(std::span<const Window> windows, std::span<const FlowState> states,
                                              const ReferenceModel& ref, const StochasticOptions& opts);

/// CSV: window_index,start_time,score,threshold,flagged
void write_verdicts(std::ostream& out, std::span<const WindowVerdict> verdicts);
std::vector<WindowVerdict> read_verdicts(std::istream& in);

}  // namespace netad
