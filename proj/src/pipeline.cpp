#include "netad/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "netad/csv.hpp"
#include "netad/error.hpp"
#include "netad/svg.hpp"

namespace netad {

namespace {

namespace fs = std::filesystem;

const char* const kScenarioKeys[] = {"total_time", "anomaly_start", "anomaly_end", "magnitude",
                                     "target",     "bots",          "intruder"};

std::string out_path(const RunConfig& cfg, const std::string& name) { return (fs::path(cfg.output) / name).string(); }

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  return in;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

ThresholdMode parse_threshold_mode(const Setting& s) {
  if (s.value == "per_window") return ThresholdMode::per_window;
  if (s.value == "fixed_mean") return ThresholdMode::fixed_mean;
  throw ParseError("key '" + s.key + "' expects per_window or fixed_mean, got '" + s.value + "'", s.line);
}

void apply_scenario_key(ScenarioPreset& p, std::string_view name, const Setting& s) {
  auto& c = p.config;
  if (name == "total_time") c.total_time = to_real(s);
  else if (name == "anomaly_start") c.anomaly_start = to_real(s);
  else if (name == "anomaly_end") c.anomaly_end = to_real(s);
  else if (name == "magnitude") c.magnitude = to_real(s);
  else if (name == "target") c.target = to_count(s);
  else if (name == "bots") c.bots = to_count(s);
  else if (name == "intruder") c.intruder = IpAddress::parse(s.value);
}

void apply_setting_unchecked(RunConfig& cfg, const Setting& s) {
  const auto dot = s.key.find('.');
  const std::string section = s.key.substr(0, dot);
  const std::string name = s.key.substr(dot + 1);

  if (section == "run") {
    if (name == "preset") {
      // Switching preset resets everything preset-dependent.
      auto keep = cfg;
      cfg = default_run_config(s.value);
      cfg.input = keep.input;
      cfg.reference = keep.reference;
      cfg.packets = keep.packets;
      cfg.output = keep.output;
      cfg.methods = keep.methods;
    } else if (name == "input") cfg.input = s.value;
    else if (name == "reference") cfg.reference = s.value;
    else if (name == "packets") cfg.packets = s.value;
    else if (name == "output") cfg.output = s.value;
    else if (name == "methods") cfg.methods = parse_methods(s.value);
    else if (name == "seed") {
      cfg.seed = to_u64(s);
      cfg.scenario.config.seed = cfg.seed;
      cfg.reference_model.seed = cfg.seed;
    }
  } else if (section == cfg.preset) {
    apply_scenario_key(cfg.scenario, name, s);
  } else if (section == "profiles") {
    if (name == "server") {
      cfg.scenario.server = IpAddress::parse(s.value);
      return;
    }
    const double v = to_real(s);
    for (auto& p : cfg.scenario.profiles) {
      if (name == "rate") p.rate = v;
      else if (name == "size_std") p.size_std = v;
      else if (name == "duration_mean") p.duration_mean = v;
    }
  } else if (section == "aggregation") {
    if (name == "delta_f") cfg.aggregation.delta_f = to_real(s);
  } else if (section == "windows") {
    if (name == "h") cfg.windows.step = to_real(s);
    else if (name == "ws") cfg.windows.size = to_real(s);
  } else if (section == "stochastic") {
    if (name == "epsilon") cfg.stochastic.epsilon = to_real(s);
    else if (name == "k") cfg.reference_model.clusters = to_count(s);
    else if (name == "quant") {
      // size, distance, duration: the order the levels are usually quoted in
      const auto v = to_count_list(s);
      if (v.size() != 3) throw ParseError("key 'stochastic.quant' expects three levels: size,dist,duration", s.line);
      cfg.reference_model.levels = QuantLevels{v[1], v[0], v[2]};
    } else if (name == "pseudo_count") cfg.reference_model.pseudo_count = to_real(s);
    else if (name == "threshold_mode") cfg.stochastic.mode = parse_threshold_mode(s);
  } else if (section == "svm") {
    if (name == "flow_nu") cfg.flow_svm.nu = to_real(s);
    else if (name == "window_nu") cfg.window_svm.nu = to_real(s);
    else if (name == "flow_gamma") cfg.flow_svm.gamma = to_real(s);
    else if (name == "window_gamma") cfg.window_svm.gamma = to_real(s);
    else if (name == "variance_target") cfg.window_svm.variance_target = to_real(s);
    else if (name == "tol") cfg.flow_svm.tol = cfg.window_svm.tol = to_real(s);
  } else if (section == "art") {
    if (name == "vigilance") {
      auto v = to_real_list(s);
      if (v.size() == 1) v.assign(4, v[0]);
      if (v.size() != 4) throw ParseError("key 'art.vigilance' expects one or four values", s.line);
      cfg.art.vigilance = v;
    } else if (name == "radius") cfg.art.radius = to_real(s);
    else if (name == "tau") cfg.art.tau = to_real(s);
    else if (name == "max_passes") cfg.art.max_passes = to_count(s);
  }
}

std::vector<double> window_scores(std::span<const WindowVerdict> v, ScoreOrientation o) {
  std::vector<double> out;
  out.reserve(v.size());
  const double never = o == ScoreOrientation::high_is_anomalous ? -INFINITY : INFINITY;
  for (const auto& w : v) out.push_back(w.degenerate ? never : w.score);
  return out;
}

bool both_classes(const std::vector<bool>& truth) {
  return std::find(truth.begin(), truth.end(), true) != truth.end() &&
         std::find(truth.begin(), truth.end(), false) != truth.end();
}

std::optional<std::pair<double, double>> anomaly_band(const RunConfig& cfg) {
  if (cfg.input || cfg.packets) return std::nullopt;
  return std::make_pair(cfg.scenario.config.anomaly_start, cfg.scenario.config.anomaly_end);
}

ArtClusterState read_art_state(std::istream& in, std::size_t flow_count) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("flow_index,cluster_id", 0) != 0) {
    throw ParseError("missing ART flow header", 1);
  }
  ArtClusterState state;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < 2) throw ParseError("expected flow_index,cluster_id,...", line_no);
    const auto idx = static_cast<std::size_t>(parse_real(fields[0], line_no));
    const auto cluster = static_cast<std::size_t>(parse_real(fields[1], line_no));
    if (idx != state.assignment.size()) throw ParseError("flow indices must be consecutive", line_no);
    state.assignment.push_back(cluster);
    if (cluster >= state.members.size()) state.members.resize(cluster + 1);
    state.members[cluster].push_back(idx);
  }
  if (state.assignment.size() != flow_count) throw ConfigError("ART dump does not match the flow count");
  state.centers.assign(state.members.size(), RealVector{});
  state.converged = true;
  return state;
}

}  // namespace

std::string_view method_name(Method m) noexcept {
  switch (m) {
    case Method::model_free: return "model_free";
    case Method::model_based: return "model_based";
    case Method::flow_svm: return "flow_svm";
    case Method::window_svm: return "window_svm";
    case Method::art: return "art";
  }
  return "unknown";
}

std::vector<Method> all_methods() {
  return {Method::model_free, Method::model_based, Method::flow_svm, Method::window_svm, Method::art};
}

std::vector<Method> parse_methods(std::string_view text) {
  if (text == "all") return all_methods();
  std::vector<Method> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const auto name = text.substr(pos, comma - pos);
    bool found = false;
    for (auto m : all_methods()) {
      if (method_name(m) == name) {
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        found = true;
      }
    }
    if (!found) {
      throw ConfigError("unknown method '" + std::string(name) +
                        "' (valid: all, model_free, model_based, flow_svm, window_svm, art)");
    }
    pos = comma + 1;
  }
  return out;
}

bool RunConfig::selected(Method m) const { return std::find(methods.begin(), methods.end(), m) != methods.end(); }

void RunConfig::validate() const {
  if (methods.empty()) throw ConfigError("no detection method selected");
  if (!(aggregation.delta_f > 0.0)) throw ConfigError("aggregation.delta_f must be positive");
  if (!(windows.step > 0.0) || !(windows.size > 0.0)) throw ConfigError("windows.h and windows.ws must be positive");
  if (reference_model.clusters == 0) throw ConfigError("stochastic.k must be at least 1");
  if (reference_model.levels.product() == 0) throw ConfigError("stochastic.quant levels must be at least 1");
  if (reference_model.pseudo_count && !(*reference_model.pseudo_count > 0.0)) {
    throw ConfigError("stochastic.pseudo_count must be positive");
  }
  if (!(stochastic.epsilon > 0.0 && stochastic.epsilon < 1.0)) throw ConfigError("stochastic.epsilon must lie in (0, 1)");
  if (!(flow_svm.nu > 0.0 && flow_svm.nu <= 1.0)) throw ConfigError("svm.flow_nu must lie in (0, 1]");
  if (!(window_svm.nu > 0.0 && window_svm.nu <= 1.0)) throw ConfigError("svm.window_nu must lie in (0, 1]");
  if (flow_svm.gamma && !(*flow_svm.gamma > 0.0)) throw ConfigError("svm.flow_gamma must be positive");
  if (window_svm.gamma && !(*window_svm.gamma > 0.0)) throw ConfigError("svm.window_gamma must be positive");
  if (!(window_svm.variance_target > 0.0 && window_svm.variance_target <= 1.0)) {
    throw ConfigError("svm.variance_target must lie in (0, 1]");
  }
  art.validate();
  if (!input && !packets) scenario.config.validate(scenario.profiles.size());
}

RunConfig default_run_config(std::string_view preset) {
  RunConfig cfg;
  cfg.preset = std::string(preset);
  cfg.scenario = scenario_preset(preset);
  cfg.windows = WindowConfig{30.0, 200.0};
  cfg.reference_model = ReferenceOptions{3, QuantLevels{2, 3, 1}, std::nullopt, cfg.seed};
  cfg.stochastic.epsilon = 0.01;
  cfg.flow_svm.nu = 0.002;
  cfg.window_svm.nu = 0.1;
  cfg.art.tau = 0.05;
  switch (cfg.scenario.config.scenario) {
    case Scenario::atypical_user:
    case Scenario::large_access_rate:
      break;
    case Scenario::large_download:
      cfg.flow_svm.nu = 0.0015;
      cfg.art.tau = 0.01;
      break;
    case Scenario::ddos_flood:
      cfg.windows = WindowConfig{10.0, 100.0};
      cfg.window_svm.nu = 0.05;
      break;
  }
  return cfg;
}

std::vector<std::string> run_config_keys() {
  std::vector<std::string> keys = {
      "run.preset",          "run.input",           "run.reference",        "run.packets",
      "run.output",          "run.methods",         "run.seed",             "profiles.rate",
      "profiles.size_std",   "profiles.duration_mean", "profiles.server",   "aggregation.delta_f",
      "windows.h",           "windows.ws",          "stochastic.epsilon",   "stochastic.k",
      "stochastic.quant",    "stochastic.pseudo_count", "stochastic.threshold_mode", "svm.flow_nu",
      "svm.window_nu",       "svm.flow_gamma",      "svm.window_gamma",     "svm.variance_target",
      "svm.tol",             "art.vigilance",       "art.radius",           "art.tau",
      "art.max_passes",
  };
  for (const auto& preset : preset_names()) {
    for (const char* k : kScenarioKeys) keys.push_back(preset + "." + k);
  }
  return keys;
}

void apply_setting(RunConfig& cfg, const Setting& s) {
  const auto keys = run_config_keys();
  if (std::find(keys.begin(), keys.end(), s.key) == keys.end()) {
    throw ParseError("unknown key '" + s.key + "' (did you mean '" + nearest_key(s.key, keys) + "'?)", s.line);
  }
  try {
    apply_setting_unchecked(cfg, s);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("key '" + s.key + "': " + e.what(), s.line);
  }
}

RunConfig resolve_run_config(const std::optional<std::string>& config_path, std::span<const Setting> command_line) {
  const auto keys = run_config_keys();
  std::vector<Setting> settings;
  if (config_path) settings = parse_ini_file(*config_path, keys);
  for (auto& s : env_settings(keys)) settings.push_back(std::move(s));
  settings.insert(settings.end(), command_line.begin(), command_line.end());

  // The preset picks the defaults every other setting overrides.
  std::string preset = "atypical_user";
  const Setting* preset_setting = nullptr;
  for (const auto& s : settings) {
    if (s.key == "run.preset") preset_setting = &s;
  }
  RunConfig cfg;
  if (preset_setting) {
    try {
      cfg = default_run_config(preset_setting->value);
    } catch (const Error& e) {
      throw ParseError("key 'run.preset': " + std::string(e.what()), preset_setting->line);
    }
  } else {
    cfg = default_run_config(preset);
  }
  for (const auto& s : settings) {
    if (s.key != "run.preset") apply_setting(cfg, s);
  }
  cfg.validate();
  return cfg;
}

bool Dataset::labeled() const {
  return std::any_of(evaluation.begin(), evaluation.end(), [](const FlowRecord& f) { return f.label.has_value(); });
}

namespace {

// Input failures name the key that pointed at the file.
template <typename Read>
auto read_keyed(const char* key, Read read) {
  try {
    return read();
  } catch (const Error& e) {
    throw Error(std::string(key) + ": " + e.what());
  }
}

}  // namespace

Dataset load_dataset(const RunConfig& cfg) {
  Dataset data;
  if (cfg.packets) {
    data.evaluation = read_keyed("run.packets", [&] {
      auto in = open_in(*cfg.packets);
      return aggregate_packets(read_packets(in), cfg.aggregation);
    });
  } else if (cfg.input) {
    data.evaluation = read_keyed("run.input", [&] { return read_flows_file(*cfg.input); });
  } else {
    auto traces = simulate(cfg.scenario);
    data.reference = std::move(traces.reference);
    data.evaluation = std::move(traces.evaluation);
    return data;
  }
  data.reference =
      cfg.reference ? read_keyed("run.reference", [&] { return read_flows_file(*cfg.reference); }) : data.evaluation;
  return data;
}

DetectionRun run_detectors(const RunConfig& cfg, const Dataset& data) {
  if (data.evaluation.empty()) throw ConfigError("no flows to analyse");
  ReferenceOptions ro = cfg.reference_model;
  DetectionRun run{build_reference(data.reference, ro), {}, {}, std::nullopt, std::nullopt};
  const auto& ref = run.reference;
  auto& det = run.detections;

  const auto distilled = distill_flows(data.evaluation, ref.clusters);
  run.states = quantize_all(distilled, ref.quantizer, ref.clusters.cluster_count());
  const auto& states = run.states;
  det.windows = partition_windows(start_times<FlowRecord>(data.evaluation), cfg.windows);

  if (cfg.selected(Method::model_free)) det.model_free = detect_model_free(det.windows, states, ref, cfg.stochastic);
  if (cfg.selected(Method::model_based)) det.model_based = detect_model_based(det.windows, states, ref, cfg.stochastic);
  if (cfg.selected(Method::window_svm)) {
    const auto ref_windows = partition_windows(start_times<FlowRecord>(data.reference), cfg.windows);
    run.window_svm_model = fit_window_svm(ref_windows, ref.states, ref.alphabet_size(), cfg.window_svm);
    det.window_svm = score_windows(*run.window_svm_model, det.windows, states);
  }
  if (cfg.selected(Method::flow_svm)) {
    const auto ref_distilled = distill_flows(data.reference, ref.clusters);
    run.flow_svm_model = fit_flow_svm(ref_distilled, cfg.flow_svm);
    det.flow_svm = score_flows(*run.flow_svm_model, distilled);
  }
  if (cfg.selected(Method::art)) det.art = art_cluster(art_features(data.evaluation, cfg.scenario.server), cfg.art);
  return run;
}

std::vector<double> tau_grid(std::size_t points) {
  std::vector<double> out;
  if (points == 1) return {1.0};
  for (std::size_t i = 0; i < points; ++i) out.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
  return out;
}

EvaluationReport evaluate_detections(const RunConfig& cfg, std::span<const FlowRecord> flows,
                                     const Detections& det) {
  if (!std::any_of(flows.begin(), flows.end(), [](const FlowRecord& f) { return f.label.has_value(); })) {
    throw ConfigError("evaluation needs labeled flows");
  }
  EvaluationReport report;
  const auto truth = flow_truth(flows);
  const auto wtruth = label_windows(det.windows, flows);

  const auto window_method = [&](const char* name, const std::optional<std::vector<WindowVerdict>>& v,
                                 ScoreOrientation o) {
    if (!v) return;
    report.summaries.push_back(MethodSummary{name, "window", rates(window_flags(*v), wtruth)});
    if (both_classes(wtruth)) report.rocs[name] = roc_curve(window_scores(*v, o), wtruth, o);
  };
  window_method("model_free", det.model_free, ScoreOrientation::high_is_anomalous);
  window_method("model_based", det.model_based, ScoreOrientation::high_is_anomalous);
  window_method("window_svm", det.window_svm, ScoreOrientation::low_is_anomalous);

  if (det.flow_svm) {
    report.summaries.push_back(MethodSummary{"flow_svm", "flow", rates(flow_flags(*det.flow_svm), truth)});
    std::vector<double> scores;
    for (const auto& v : *det.flow_svm) scores.push_back(v.score);
    if (both_classes(truth)) report.rocs["flow_svm"] = roc_flow_detector(scores, truth);
  }

  if (det.art) {
    report.art_flags = flag_art_clusters(*det.art, cfg.art.tau);
    report.summaries.push_back(MethodSummary{"art", "flow", rates(report.art_flags, truth)});
    const auto ratios = art_size_ratios(*det.art);
    if (both_classes(truth)) report.rocs["art"] = roc_flow_detector(ratios, truth);

    const auto grid = tau_grid(50);
    report.tau_curve = tau_vs_false_alarm(*det.art, truth, grid);
    std::vector<double> fa;
    for (const auto& p : report.tau_curve) fa.push_back(p.false_alarm_rate);
    report.tau_spearman = spearman(grid, fa);

    if (det.model_free) {
      report.window_cover = flows_in_flagged_windows(*det.model_free, det.windows, flows.size());
      report.fused = fuse(report.art_flags, *det.model_free, det.windows, flows.size());
      report.summaries.push_back(MethodSummary{"art+model_free", "flow", rates(report.fused, truth)});
      if (both_classes(truth)) report.rocs["fused"] = roc_flow_detector(fused_scores(ratios, *det.model_free, det.windows), truth);
    }
  }
  return report;
}

void write_dataset(const RunConfig& cfg, const Dataset& data) {
  fs::create_directories(cfg.output);
  write_flows_file(out_path(cfg, "flows.csv"), data.evaluation);
  write_flows_file(out_path(cfg, "reference_flows.csv"), data.reference);
}

void write_detections(const RunConfig& cfg, const DetectionRun& run, std::span<const FlowRecord> flows) {
  fs::create_directories(cfg.output);
  const auto& det = run.detections;
  {
    const auto path = out_path(cfg, "user_clusters.csv");
    auto out = open_out(path);
    run.reference.clusters.write_centers(out);
    finish(out, path);
  }
  {
    const auto path = out_path(cfg, "user_assignment.csv");
    auto out = open_out(path);
    run.reference.clusters.write_assignment(out);
    finish(out, path);
  }
  {
    const auto path = out_path(cfg, "quantizer.csv");
    auto out = open_out(path);
    run.reference.quantizer.write(out);
    finish(out, path);
  }
  const auto window_output = [&](const char* name, const char* title,
                                 const std::optional<std::vector<WindowVerdict>>& v) {
    if (!v) return;
    const auto path = out_path(cfg, std::string(name) + ".csv");
    auto out = open_out(path);
    write_verdicts(out, *v);
    finish(out, path);
    auto plot = plot_from_verdicts(*v, title);
    plot.shaded = anomaly_band(cfg);
    write_svg_file(out_path(cfg, std::string(name) + ".svg"), plot);
  };
  // Per-window measures behind the divergence tests, only when the states are at hand.
  const auto measure_output = [&](const char* name, bool pairs) {
    if (run.states.size() != flows.size()) return;
    const std::size_t sigma = run.reference.alphabet_size();
    const auto path = out_path(cfg, name);
    auto out = open_out(path);
    write_measure_header(out, pairs ? sigma * sigma : sigma);
    for (const auto& w : det.windows) {
      const auto ws = window_states(w, run.states);
      if (ws.size() < (pairs ? 2u : 1u)) {
        write_measure_row(out, w, std::vector<double>(pairs ? sigma * sigma : sigma, 0.0));
      } else if (pairs) {
        write_measure_row(out, w, transition_measure(ws, sigma).probs);
      } else {
        write_measure_row(out, w, empirical_measure(ws, sigma).probs);
      }
    }
    finish(out, path);
  };
  if (det.model_free) measure_output("model_free_measures.csv", false);
  if (det.model_based) measure_output("model_based_measures.csv", true);
  const auto model_output = [&](const char* name, const auto& model) {
    if (!model) return;
    const auto path = out_path(cfg, name);
    auto out = open_out(path);
    model->write(out);
    finish(out, path);
  };
  model_output("flow_svm_model.csv", run.flow_svm_model);
  model_output("window_svm_model.csv", run.window_svm_model);
  window_output("model_free", "model-free divergence per window", det.model_free);
  window_output("model_based", "model-based divergence per window", det.model_based);
  window_output("window_svm", "window SVM decision value", det.window_svm);
  if (det.flow_svm) {
    const auto path = out_path(cfg, "flow_svm.csv");
    auto out = open_out(path);
    write_flow_verdicts(out, *det.flow_svm);
    finish(out, path);
  }
  if (det.art) {
    if (det.art->flow_count() != flows.size()) throw ConfigError("ART state does not match the flow count");
    const auto path = out_path(cfg, "art.csv");
    auto out = open_out(path);
    write_art_flows(out, *det.art, cfg.art.tau);
    finish(out, path);
    const auto cpath = out_path(cfg, "art_clusters.csv");
    auto cout = open_out(cpath);
    write_art_clusters(cout, *det.art, cfg.art.tau);
    finish(cout, cpath);
  }
}

void write_report(const RunConfig& cfg, const EvaluationReport& report, std::span<const FlowRecord> flows) {
  fs::create_directories(cfg.output);
  {
    const auto path = out_path(cfg, "summary.csv");
    auto out = open_out(path);
    out << "method,unit,detection_rate,false_alarm_rate,positives,negatives\n";
    for (const auto& s : report.summaries) {
      out << s.method << ',' << s.unit << ',' << format_real(s.rates.detection_rate) << ','
          << format_real(s.rates.false_alarm_rate) << ',' << s.rates.positives << ',' << s.rates.negatives << '\n';
    }
    finish(out, path);
  }
  for (const auto& [name, curve] : report.rocs) {
    const auto path = out_path(cfg, "roc_" + name + ".csv");
    auto out = open_out(path);
    write_roc(out, curve);
    finish(out, path);
  }
  if (!report.tau_curve.empty()) {
    const auto path = out_path(cfg, "tau_false_alarm.csv");
    auto out = open_out(path);
    write_tau_curve(out, report.tau_curve);
    finish(out, path);
  }
  if (!report.fused.empty()) {
    const auto path = out_path(cfg, "fusion.csv");
    auto out = open_out(path);
    write_fusion_report(out, flows, report.art_flags, report.window_cover, report.fused);
    finish(out, path);
  }
}

Detections read_detections(const RunConfig& cfg, std::span<const FlowRecord> flows) {
  Detections det;
  det.windows = partition_windows(start_times<FlowRecord>(flows), cfg.windows);
  const auto read_windows = [&](Method m, std::optional<std::vector<WindowVerdict>>& slot) {
    const auto path = out_path(cfg, std::string(method_name(m)) + ".csv");
    if (!cfg.selected(m) || !fs::exists(path)) return;
    auto in = open_in(path);
    slot = read_verdicts(in);
    if (slot->size() != det.windows.size()) {
      throw ConfigError("'" + path + "' does not match the window partition; check windows.h and windows.ws");
    }
  };
  read_windows(Method::model_free, det.model_free);
  read_windows(Method::model_based, det.model_based);
  read_windows(Method::window_svm, det.window_svm);
  if (cfg.selected(Method::flow_svm) && fs::exists(out_path(cfg, "flow_svm.csv"))) {
    auto in = open_in(out_path(cfg, "flow_svm.csv"));
    det.flow_svm = read_flow_verdicts(in);
    if (det.flow_svm->size() != flows.size()) throw ConfigError("flow_svm.csv does not match the flow count");
  }
  if (cfg.selected(Method::art) && fs::exists(out_path(cfg, "art.csv"))) {
    auto in = open_in(out_path(cfg, "art.csv"));
    det.art = read_art_state(in, flows.size());
  }
  return det;
}

int run_simulate(const RunConfig& cfg) {
  write_dataset(cfg, load_dataset(cfg));
  return 0;
}

int run_detect(const RunConfig& cfg) {
  const auto data = load_dataset(cfg);
  write_dataset(cfg, data);
  write_detections(cfg, run_detectors(cfg, data), data.evaluation);
  return 0;
}

int run_evaluate(const RunConfig& cfg) {
  const auto flows = read_flows_file(cfg.input ? *cfg.input : out_path(cfg, "flows.csv"));
  const auto det = read_detections(cfg, flows);
  write_report(cfg, evaluate_detections(cfg, flows, det), flows);
  return 0;
}

int run_plot(const std::string& verdict_csv, const std::string& svg_path, const std::string& title,
             std::optional<std::pair<double, double>> shaded) {
  auto in = open_in(verdict_csv);
  auto plot = plot_from_verdicts(read_verdicts(in), title);
  plot.shaded = shaded;
  write_svg_file(svg_path, plot);
  return 0;
}

int run_pipeline(const RunConfig& cfg) {
  const auto data = load_dataset(cfg);
  write_dataset(cfg, data);
  const auto run = run_detectors(cfg, data);
  write_detections(cfg, run, data.evaluation);
  if (data.labeled()) write_report(cfg, evaluate_detections(cfg, data.evaluation, run.detections), data.evaluation);
  return 0;
}

}  // namespace netad
