#include "netad/svm_detect.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "netad/csv.hpp"
#include "netad/error.hpp"

namespace netad {

RealVector flow_svm_feature(const DistilledFlow& f) { return {f.dist_to_center, f.size_bytes, f.duration}; }

std::vector<FlowVerdict> detect_flow_svm(std::span<const DistilledFlow> flows, const FlowSvmOptions& opts) {
  return detect_flow_svm(flows, flows, opts);
}

FlowSvmDetector fit_flow_svm(std::span<const DistilledFlow> training, const FlowSvmOptions& opts) {
  std::vector<RealVector> raw;
  raw.reserve(training.size());
  for (const auto& f : training) raw.push_back(flow_svm_feature(f));
  FlowSvmDetector det;
  det.scaler = Standardizer::fit(raw);
  const auto train = det.scaler.apply_all(raw);

  OcsvmParams params;
  params.nu = opts.nu;
  params.gamma = opts.gamma.value_or(default_gamma(train));
  params.tol = opts.tol;
  det.model = train_ocsvm(train, params);
  return det;
}

double FlowSvmDetector::score(const DistilledFlow& f) const {
  return decision_value(model, scaler.apply(flow_svm_feature(f)));
}

void FlowSvmDetector::write(std::ostream& out) const {
  static const char* names[] = {"dist", "size", "duration"};
  std::vector<std::pair<std::string, double>> extra;
  for (std::size_t j = 0; j < scaler.mean.size(); ++j) {
    extra.emplace_back(std::string("mean_") + names[j], scaler.mean[j]);
    extra.emplace_back(std::string("scale_") + names[j], scaler.scale[j]);
  }
  model.write(out, extra);
}

std::vector<FlowVerdict> score_flows(const FlowSvmDetector& det, std::span<const DistilledFlow> flows) {
  std::vector<FlowVerdict> out;
  out.reserve(flows.size());
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const double score = det.score(flows[i]);
    out.push_back(FlowVerdict{i, flows[i].start_time, score, score < 0.0});
  }
  return out;
}

std::vector<FlowVerdict> detect_flow_svm(std::span<const DistilledFlow> training,
                                         std::span<const DistilledFlow> flows, const FlowSvmOptions& opts) {
  return score_flows(fit_flow_svm(training, opts), flows);
}

RealVector window_feature(const Window& w, std::span<const FlowState> states, std::size_t sigma_size) {
  const auto ws = window_states(w, states);
  const auto marginal = empirical_measure(ws, sigma_size);
  const auto pairs = transition_measure(ws, sigma_size);
  RealVector y;
  y.reserve(sigma_size + sigma_size * sigma_size + 1);
  y.insert(y.end(), marginal.probs.begin(), marginal.probs.end());
  y.insert(y.end(), pairs.probs.begin(), pairs.probs.end());
  y.push_back(static_cast<double>(ws.size()));
  return y;
}

std::vector<WindowVerdict> detect_window_svm(std::span<const Window> windows, std::span<const FlowState> states,
                                             std::size_t sigma_size, const WindowSvmOptions& opts) {
  return detect_window_svm(windows, states, windows, states, sigma_size, opts);
}

WindowSvmDetector fit_window_svm(std::span<const Window> training_windows, std::span<const FlowState> training_states,
                                 std::size_t sigma_size, const WindowSvmOptions& opts) {
  std::vector<RealVector> train;
  for (const auto& w : training_windows) {
    if (w.members.size() >= 2) train.push_back(window_feature(w, training_states, sigma_size));
  }
  if (train.size() < 2) throw ConfigError("window SVM needs at least 2 training windows with 2+ flows");

  // The count enters relative to its training mean. A z-scored count would
  // have unit spread against ~0.04 for the probability entries and PCA would
  // keep little besides it.
  WindowSvmDetector det;
  det.sigma_size = sigma_size;
  const std::size_t count_at = sigma_size + sigma_size * sigma_size;
  double mean = 0.0;
  for (const auto& y : train) mean += y[count_at];
  det.count_mean = mean / static_cast<double>(train.size());
  for (auto& y : train) y[count_at] /= det.count_mean;

  det.pca = fit_pca(train, opts.variance_target);
  std::vector<RealVector> projected;
  projected.reserve(train.size());
  for (const auto& y : train) projected.push_back(det.pca.project(y));

  OcsvmParams params;
  params.nu = opts.nu;
  params.gamma = opts.gamma.value_or(default_gamma(projected));
  params.tol = opts.tol;
  det.model = train_ocsvm(projected, params);
  return det;
}

double WindowSvmDetector::score(const Window& w, std::span<const FlowState> states) const {
  auto y = window_feature(w, states, sigma_size);
  y.back() /= count_mean;
  return decision_value(model, pca.project(y));
}

void WindowSvmDetector::write(std::ostream& out) const {
  const std::vector<std::pair<std::string, double>> extra{
      {"count_mean", count_mean},
      {"components", static_cast<double>(pca.components.size())},
      {"input_dim", static_cast<double>(pca.mean.size())}};
  model.write(out, extra);
}

std::vector<WindowVerdict> score_windows(const WindowSvmDetector& det, std::span<const Window> windows,
                                         std::span<const FlowState> states) {
  std::vector<WindowVerdict> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    WindowVerdict v;
    v.window_index = w.index;
    v.start_time = w.start;
    v.flow_count = w.members.size();
    if (w.members.size() < 2) {
      v.degenerate = true;
      v.threshold = INFINITY;
    } else {
      v.score = det.score(w, states);
      v.threshold = 0.0;
      v.flagged = v.score < 0.0;
    }
    out.push_back(v);
  }
  return out;
}

std::vector<WindowVerdict> detect_window_svm(std::span<const Window> training_windows,
                                             std::span<const FlowState> training_states,
                                             std::span<const Window> windows, std::span<const FlowState> states,
                                             std::size_t sigma_size, const WindowSvmOptions& opts) {
  return score_windows(fit_window_svm(training_windows, training_states, sigma_size, opts), windows, states);
}

void write_flow_verdicts(std::ostream& out, std::span<const FlowVerdict> verdicts) {
  out << "flow_index,start_time,score,flagged\n";
  for (const auto& v : verdicts) {
    out << v.flow_index << ',' << format_real(v.start_time) << ',' << format_real(v.score) << ','
        << (v.flagged ? 1 : 0) << '\n';
  }
}

std::vector<FlowVerdict> read_flow_verdicts(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("flow_index,start_time,score,flagged", 0) != 0) {
    throw ParseError("expected flow verdict header", 1);
  }
  std::vector<FlowVerdict> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 4) throw ParseError("expected 4 fields", lineno);
    out.push_back(FlowVerdict{static_cast<std::size_t>(parse_real(f[0], lineno)), parse_real(f[1], lineno),
                              parse_real(f[2], lineno), f[3] == "1"});
  }
  return out;
}

}  // namespace netad
