#include "netad/windowing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

std::size_t window_count(double t_first, double t_last, const WindowConfig& cfg) {
  const double n = std::ceil((t_last - t_first - cfg.size) / cfg.step);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

std::vector<Window> partition_windows(std::span<const double> start_times, const WindowConfig& cfg) {
  if (!(cfg.step > 0.0) || !(cfg.size > 0.0)) throw ConfigError("window step h and size w_s must be positive");
  if (start_times.empty()) return {};
  if (!std::is_sorted(start_times.begin(), start_times.end())) {
    throw OrderingError("flows must be sorted by start_time before windowing");
  }
  const double t0 = start_times.front();
  const std::size_t n_w = window_count(t0, start_times.back(), cfg);

  std::vector<Window> windows(n_w);
  std::size_t lo = 0;
  for (std::size_t j = 0; j < n_w; ++j) {
    const double begin = t0 + static_cast<double>(j) * cfg.step;
    const double end = begin + cfg.size;
    while (lo < start_times.size() && start_times[lo] < begin) ++lo;
    windows[j].index = j;
    windows[j].start = begin;
    for (std::size_t i = lo; i < start_times.size() && start_times[i] < end; ++i) windows[j].members.push_back(i);
  }
  return windows;
}

double TransitionMeasure::marginal(std::size_t i) const {
  double s = 0.0;
  for (std::size_t j = 0; j < dim; ++j) s += probs[i * dim + j];
  return s;
}

double TransitionMeasure::conditional(std::size_t i, std::size_t j) const {
  const double m = marginal(i);
  return m > 0.0 ? at(i, j) / m : 0.0;
}

EmpiricalMeasure empirical_measure(std::span<const FlowState> states, std::size_t sigma_size) {
  if (states.empty()) throw MeasureError("empirical measure of an empty flow sequence is undefined");
  EmpiricalMeasure m;
  m.probs.assign(sigma_size, 0.0);
  m.n = states.size();
  for (auto s : states) {
    if (s.symbol >= sigma_size) throw DimensionError("state outside alphabet");
    m.probs[s.symbol] += 1.0;
  }
  for (auto& p : m.probs) p /= static_cast<double>(m.n);
  return m;
}

TransitionMeasure transition_measure(std::span<const FlowState> states, std::size_t sigma_size) {
  if (states.size() < 2) throw MeasureError("transition measure needs at least two flows");
  TransitionMeasure m;
  m.dim = sigma_size;
  m.n = states.size();
  m.probs.assign(sigma_size * sigma_size, 0.0);
  for (std::size_t l = 1; l < states.size(); ++l) {
    if (states[l].symbol >= sigma_size || states[l - 1].symbol >= sigma_size) {
      throw DimensionError("state outside alphabet");
    }
    m.probs[states[l - 1].symbol * sigma_size + states[l].symbol] += 1.0;
  }
  const double pairs = static_cast<double>(states.size() - 1);
  for (auto& p : m.probs) p /= pairs;
  return m;
}

std::vector<FlowState> window_states(const Window& w, std::span<const FlowState> states) {
  std::vector<FlowState> out;
  out.reserve(w.members.size());
  for (auto i : w.members) out.push_back(states[i]);
  return out;
}

void write_measure_header(std::ostream& out, std::size_t entries) {
  out << "window_index,start_time,flow_count";
  for (std::size_t i = 0; i < entries; ++i) out << ",p" << i;
  out << '\n';
}

void write_measure_row(std::ostream& out, const Window& w, std::span<const double> probs) {
  out << w.index << ',' << format_real(w.start) << ',' << w.members.size();
  for (double p : probs) out << ',' << format_real(p);
  out << '\n';
}

}  // namespace netad
