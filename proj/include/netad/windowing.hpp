#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "netad/features.hpp"

namespace netad {

struct WindowConfig {
  double step = 30.0;   // h: seconds between consecutive window starts
  double size = 200.0;  // w_s: window length in seconds
};

/// Window j (0-based) spans [t_first + j*h, t_first + j*h + w_s).
struct Window {
  std::size_t index = 0;
  double start = 0.0;
  std::vector<std::size_t> members;  // indices into the flow sequence, ascending
};

/// n_w = ceil((t_last - t_first - w_s) / h), at least 1 for non-empty input.
std::size_t window_count(double t_first, double t_last, const WindowConfig& cfg);

/// Throws ConfigError for non-positive h or w_s, OrderingError for unsorted times.
std::vector<Window> partition_windows(std::span<const double> start_times, const WindowConfig& cfg);

template <typename Flow>
std::vector<double> start_times(std::span<const Flow> flows) {
  std::vector<double> t;
  t.reserve(flows.size());
  for (const auto& f : flows) t.push_back(f.start_time);
  return t;
}

struct EmpiricalMeasure {
  std::vector<double> probs;
  std::size_t n = 0;
};

/// Row-major |Sigma| x |Sigma| probability matrix over consecutive state pairs.
struct TransitionMeasure {
  std::size_t dim = 0;
  std::vector<double> probs;
  std::size_t n = 0;

  double at(std::size_t i, std::size_t j) const { return probs[i * dim + j]; }
  /// q(sigma_i) = sum_j q(sigma_i, sigma_j).
  double marginal(std::size_t i) const;
  /// q(sigma_j | sigma_i); 0 on rows with zero marginal.
  double conditional(std::size_t i, std::size_t j) const;
};

/// Frequency of each state. Throws MeasureError on empty input.
EmpiricalMeasure empirical_measure(std::span<const FlowState> states, std::size_t sigma_size);

/// Frequency of each consecutive pair, normalized by the number of pairs.
/// Throws MeasureError with fewer than two states.
TransitionMeasure transition_measure(std::span<const FlowState> states, std::size_t sigma_size);

/// States of the window's member flows, in flow order.
std::vector<FlowState> window_states(const Window& w, std::span<const FlowState> states);

void write_measure_header(std::ostream& out, std::size_t entries);
void write_measure_row(std::ostream& out, const Window& w, std::span<const double> probs);

}  // namespace netad
