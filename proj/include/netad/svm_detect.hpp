#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "netad/pca.hpp"
#include "netad/stochastic.hpp"
#include "netad/svm.hpp"

namespace netad {

struct FlowVerdict {
  std::size_t flow_index = 0;
  double start_time = 0.0;
  double score = 0.0;  // decision value
  bool flagged = false;
};

struct FlowSvmOptions {
  double nu = 0.002;
  std::optional<double> gamma;  // default_gamma() on the standardized training set
  double tol = 1e-4;
};

/// (d_a, b, d_t) with the cluster label dropped.
RealVector flow_svm_feature(const DistilledFlow& f);

/// Standardizer and model trained on reference flows.
struct FlowSvmDetector {
  Standardizer scaler;
  OcsvmModel model;

  double score(const DistilledFlow& f) const;
  /// Model CSV with the standardization constants in the metadata block.
  void write(std::ostream& out) const;
};

FlowSvmDetector fit_flow_svm(std::span<const DistilledFlow> training, const FlowSvmOptions& opts);
std::vector<FlowVerdict> score_flows(const FlowSvmDetector& det, std::span<const DistilledFlow> flows);

/// Trains on the flows themselves and scores each of them.
std::vector<FlowVerdict> detect_flow_svm(std::span<const DistilledFlow> flows, const FlowSvmOptions& opts);

/// Trains on `training` (standardization included) and scores `flows`.
std::vector<FlowVerdict> detect_flow_svm(std::span<const DistilledFlow> training,
                                         std::span<const DistilledFlow> flows, const FlowSvmOptions& opts);

struct WindowSvmOptions {
  double nu = 0.1;
  std::optional<double> gamma;  // default_gamma() on the PCA projections
  double variance_target = 0.95;
  double tol = 1e-4;
};

/// Y_j = (E^{G_j}, flattened E_B^{G_j}, |G_j|). Requires at least two flows.
RealVector window_feature(const Window& w, std::span<const FlowState> states, std::size_t sigma_size);

/// Count scaling, PCA and model trained on reference windows.
struct WindowSvmDetector {
  std::size_t sigma_size = 0;
  double count_mean = 1.0;  // |G_j| enters as |G_j| / count_mean
  PcaModel pca;
  OcsvmModel model;

  /// Decision value of a window with at least two flows.
  double score(const Window& w, std::span<const FlowState> states) const;
  void write(std::ostream& out) const;
};

/// Windows with fewer than two flows are skipped. Throws ConfigError when
/// fewer than two usable windows remain.
WindowSvmDetector fit_window_svm(std::span<const Window> training_windows, std::span<const FlowState> training_states,
                                 std::size_t sigma_size, const WindowSvmOptions& opts);
/// Windows with fewer than two flows are degenerate and never flagged.
std::vector<WindowVerdict> score_windows(const WindowSvmDetector& det, std::span<const Window> windows,
                                         std::span<const FlowState> states);

/// Trains on the evaluated windows themselves.
std::vector<WindowVerdict> detect_window_svm(std::span<const Window> windows, std::span<const FlowState> states,
                                             std::size_t sigma_size, const WindowSvmOptions& opts);

/// Trains on windows of a separate (reference) sequence and scores `windows`.
/// Windows with fewer than two flows are degenerate and never flagged.
std::vector<WindowVerdict> detect_window_svm(std::span<const Window> training_windows,
                                             std::span<const FlowState> training_states,
                                             std::span<const Window> windows, std::span<const FlowState> states,
                                             std::size_t sigma_size, const WindowSvmOptions& opts);

/// CSV: flow_index,start_time,score,flagged
void write_flow_verdicts(std::ostream& out, std::span<const FlowVerdict> verdicts);
std::vector<FlowVerdict> read_flow_verdicts(std::istream& in);

}  // namespace netad
