#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netad/aggregation.hpp"
#include "netad/art.hpp"
#include "netad/config.hpp"
#include "netad/evaluation.hpp"
#include "netad/simulator.hpp"
#include "netad/stochastic.hpp"
#include "netad/svm_detect.hpp"
#include "netad/windowing.hpp"

namespace netad {

enum class Method { model_free, model_based, flow_svm, window_svm, art };

std::string_view method_name(Method m) noexcept;
std::vector<Method> all_methods();
/// "all" or a comma-separated subset. Throws ConfigError naming the bad entry.
std::vector<Method> parse_methods(std::string_view text);

struct RunConfig {
  std::string preset = "atypical_user";
  std::optional<std::string> input;      // evaluation flow CSV
  std::optional<std::string> reference;  // nominal flow CSV; defaults to the input
  std::optional<std::string> packets;    // packet CSV, aggregated into the evaluation flows
  std::string output = "netad_out";
  std::vector<Method> methods = all_methods();
  std::uint64_t seed = 1;

  ScenarioPreset scenario = scenario_preset("atypical_user");
  FlowGapConfig aggregation;
  WindowConfig windows;
  ReferenceOptions reference_model;
  StochasticOptions stochastic;
  FlowSvmOptions flow_svm;
  WindowSvmOptions window_svm;
  ArtConfig art;

  bool selected(Method m) const;
  /// Throws ConfigError on out-of-range parameters.
  void validate() const;
};

/// Detector parameters tuned per preset; everything else at module defaults.
RunConfig default_run_config(std::string_view preset);

/// Every accepted "section.key".
std::vector<std::string> run_config_keys();

/// Applies one setting. Type errors carry the setting's line.
void apply_setting(RunConfig& cfg, const Setting& s);

/// defaults < config file < NETAD_* environment < command line.
RunConfig resolve_run_config(const std::optional<std::string>& config_path, std::span<const Setting> command_line);

struct Dataset {
  std::vector<FlowRecord> reference;
  std::vector<FlowRecord> evaluation;
  bool labeled() const;
};

/// Simulates the preset unless input files are configured.
Dataset load_dataset(const RunConfig& cfg);

struct Detections {
  std::vector<Window> windows;  // over the evaluation flows
  std::optional<std::vector<WindowVerdict>> model_free;
  std::optional<std::vector<WindowVerdict>> model_based;
  std::optional<std::vector<WindowVerdict>> window_svm;
  std::optional<std::vector<FlowVerdict>> flow_svm;
  std::optional<ArtClusterState> art;
};

struct DetectionRun {
  ReferenceModel reference;
  Detections detections;
  std::vector<FlowState> states;  // quantized evaluation sequence
  std::optional<FlowSvmDetector> flow_svm_model;
  std::optional<WindowSvmDetector> window_svm_model;
};

DetectionRun run_detectors(const RunConfig& cfg, const Dataset& data);

struct MethodSummary {
  std::string method;
  std::string unit;  // "window" or "flow"
  Rates rates;
};

struct EvaluationReport {
  std::vector<MethodSummary> summaries;
  std::map<std::string, RocCurve> rocs;  // keyed by method, plus "fused"
  std::vector<TauPoint> tau_curve;
  double tau_spearman = 0.0;
  std::vector<bool> art_flags;
  std::vector<bool> window_cover;
  std::vector<bool> fused;
};

/// Evenly spaced tau values over [0, 1].
std::vector<double> tau_grid(std::size_t points);

/// Requires labeled flows. ART + model-free fusion runs when both are present.
EvaluationReport evaluate_detections(const RunConfig& cfg, std::span<const FlowRecord> flows,
                                     const Detections& detections);

// Stages, each reading and writing files under cfg.output.
void write_dataset(const RunConfig& cfg, const Dataset& data);
void write_detections(const RunConfig& cfg, const DetectionRun& run, std::span<const FlowRecord> flows);
void write_report(const RunConfig& cfg, const EvaluationReport& report, std::span<const FlowRecord> flows);

/// Rebuilds detections from the verdict files that exist under cfg.output.
Detections read_detections(const RunConfig& cfg, std::span<const FlowRecord> flows);

int run_simulate(const RunConfig& cfg);
int run_detect(const RunConfig& cfg);
int run_evaluate(const RunConfig& cfg);
/// SVG for one window verdict CSV.
int run_plot(const std::string& verdict_csv, const std::string& svg_path, const std::string& title,
             std::optional<std::pair<double, double>> shaded);
/// simulate, detect and (for labeled data) evaluate.
int run_pipeline(const RunConfig& cfg);

}  // namespace netad
