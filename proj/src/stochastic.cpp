#include "netad/stochastic.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

double relative_entropy(const EmpiricalMeasure& nu, const EmpiricalMeasure& mu) {
  if (nu.probs.size() != mu.probs.size()) {
    throw DimensionError("measures over alphabets of size " + std::to_string(nu.probs.size()) + " and " +
                         std::to_string(mu.probs.size()));
  }
  double h = 0.0;
  for (std::size_t s = 0; s < nu.probs.size(); ++s) {
    const double p = nu.probs[s];
    if (p > 0.0) h += p * std::log(p / mu.probs[s]);
  }
  return std::max(h, 0.0);
}

double relative_entropy_markov(const TransitionMeasure& q, const TransitionMeasure& pi) {
  if (q.dim != pi.dim || q.probs.size() != pi.probs.size()) {
    throw DimensionError("transition measures over alphabets of size " + std::to_string(q.dim) + " and " +
                         std::to_string(pi.dim));
  }
  const std::size_t d = q.dim;
  double h = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double q_row = q.marginal(i);
    if (!(q_row > 0.0)) continue;
    const double pi_row = pi.marginal(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double qij = q.at(i, j);
      if (!(qij > 0.0)) continue;
      h += qij * std::log((qij / q_row) / (pi.at(i, j) / pi_row));
    }
  }
  return std::max(h, 0.0);
}

double sanov_threshold(double epsilon, std::size_t n) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
  if (n == 0) throw ConfigError("threshold needs n >= 1");
  return -std::log(epsilon) / static_cast<double>(n);
}

EmpiricalMeasure smoothed_measure(std::span<const FlowState> states, std::size_t sigma_size, double pseudo_count) {
  EmpiricalMeasure m;
  m.n = states.size();
  m.probs.assign(sigma_size, pseudo_count);
  for (auto s : states) m.probs[s.symbol] += 1.0;
  const double total = static_cast<double>(states.size()) + pseudo_count * static_cast<double>(sigma_size);
  for (auto& p : m.probs) p /= total;
  return m;
}

TransitionMeasure smoothed_transitions(std::span<const FlowState> states, std::size_t sigma_size,
                                       double pseudo_count) {
  TransitionMeasure m;
  m.dim = sigma_size;
  m.n = states.size();
  m.probs.assign(sigma_size * sigma_size, pseudo_count);
  for (std::size_t l = 1; l < states.size(); ++l) m.probs[states[l - 1].symbol * sigma_size + states[l].symbol] += 1.0;
  const double pairs = states.size() > 1 ? static_cast<double>(states.size() - 1) : 0.0;
  const double total = pairs + pseudo_count * static_cast<double>(sigma_size * sigma_size);
  for (auto& p : m.probs) p /= total;
  return m;
}

ReferenceModel build_reference(std::span<const FlowRecord> reference, const ReferenceOptions& opts) {
  if (reference.size() < 2) throw ConfigError("reference needs at least two flows");
  std::vector<IpAddress> users;
  users.reserve(reference.size());
  for (const auto& f : reference) users.push_back(f.user);
  auto clusters = fit_user_clusters(users, opts.clusters, opts.seed);
  auto distilled = distill_flows(reference, clusters);
  auto quantizer = fit_quantizer(distilled, opts.levels);
  const std::size_t sigma = quantizer.alphabet_size(clusters.cluster_count());
  auto states = quantize_all(distilled, quantizer, clusters.cluster_count());
  const double pc = opts.pseudo_count.value_or(1.0 / static_cast<double>(sigma));
  if (!(pc > 0.0)) throw ConfigError("pseudo-count must be positive");
  auto mu = smoothed_measure(states, sigma, pc);
  auto pi = smoothed_transitions(states, sigma, pc);
  return ReferenceModel{std::move(clusters), quantizer, std::move(mu), std::move(pi), std::move(states)};
}

namespace {

template <typename Score>
std::vector<WindowVerdict> detect_windows(std::span<const Window> windows, std::size_t min_flows,
                                          const StochasticOptions& opts, Score score) {
  sanov_threshold(opts.epsilon, 1);  // validates epsilon up front
  std::vector<WindowVerdict> verdicts;
  verdicts.reserve(windows.size());
  std::size_t evaluated = 0;
  std::size_t total_flows = 0;
  for (const auto& w : windows) {
    WindowVerdict v;
    v.window_index = w.index;
    v.start_time = w.start;
    v.flow_count = w.members.size();
    if (w.members.size() < min_flows) {
      v.degenerate = true;
      v.threshold = INFINITY;
    } else {
      v.score = score(w);
      ++evaluated;
      total_flows += w.members.size();
    }
    verdicts.push_back(v);
  }
  const std::size_t fixed_n =
      evaluated == 0 ? 1 : std::max<std::size_t>(1, (total_flows + evaluated / 2) / evaluated);
  for (auto& v : verdicts) {
    if (v.degenerate) continue;
    const std::size_t n = opts.mode == ThresholdMode::fixed_mean ? fixed_n : v.flow_count;
    v.threshold = sanov_threshold(opts.epsilon, n);
    v.flagged = v.score >= v.threshold;
  }
  return verdicts;
}

}  // namespace

std::vector<WindowVerdict> detect_model_free(std::span<const Window> windows, std::span<const FlowState> states,
                                             const ReferenceModel& ref, const StochasticOptions& opts) {
  const std::size_t sigma = ref.alphabet_size();
  return detect_windows(windows, 1, opts, [&](const Window& w) {
    auto ws = window_states(w, states);
    return relative_entropy(empirical_measure(ws, sigma), ref.mu);
  });
}

std::vector<WindowVerdict> detect_model_based(std::span<const Window> windows, std::span<const FlowState> states,
                                              const ReferenceModel& ref, const StochasticOptions& opts) {
  const std::size_t sigma = ref.alphabet_size();
  return detect_windows(windows, 2, opts, [&](const Window& w) {
    auto ws = window_states(w, states);
    return relative_entropy_markov(transition_measure(ws, sigma), ref.pi);
  });
}

void write_verdicts(std::ostream& out, std::span<const WindowVerdict> verdicts) {
  out << "window_index,start_time,score,threshold,flagged\n";
  for (const auto& v : verdicts) {
    out << v.window_index << ',' << format_real(v.start_time) << ',' << format_real(v.score) << ','
        << format_real(v.threshold) << ',' << (v.flagged ? 1 : 0) << '\n';
  }
}

std::vector<WindowVerdict> read_verdicts(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("window_index,start_time,score,threshold,flagged", 0) != 0) {
    throw ParseError("expected window verdict header", 1);
  }
  std::vector<WindowVerdict> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 5) throw ParseError("expected 5 fields", lineno);
    WindowVerdict v;
    v.window_index = static_cast<std::size_t>(parse_real(f[0], lineno));
    v.start_time = parse_real(f[1], lineno);
    v.score = parse_real(f[2], lineno);
    v.threshold = f[3] == "inf" ? INFINITY : parse_real(f[3], lineno);
    v.flagged = f[4] == "1";
    v.degenerate = std::isinf(v.threshold);
    out.push_back(v);
  }
  return out;
}

}  // namespace netad
