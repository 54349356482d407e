// netad: simulate traffic, run the five detectors, evaluate and plot.
#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netad/pipeline.hpp"

namespace {

// Command-line flag bound to one configuration key.
struct Flag {
  const char* name;
  const char* key;
  const char* help;
  std::string value;
  CLI::Option* option = nullptr;
};

std::vector<Flag> make_flags() {
  return {
      {"--preset", "run.preset", "scenario preset: atypical_user, large_download, large_access_rate, ddos_flood", {}},
      {"--input", "run.input", "evaluation flow CSV (instead of simulating)", {}},
      {"--reference", "run.reference", "nominal reference flow CSV (defaults to --input)", {}},
      {"--packets", "run.packets", "packet CSV aggregated into flows", {}},
      {"-o,--output", "run.output", "output directory", {}},
      {"--methods", "run.methods", "all, or a comma list of model_free,model_based,flow_svm,window_svm,art", {}},
      {"--seed", "run.seed", "random seed", {}},
      {"--delta-f", "aggregation.delta_f", "packet gap closing a flow (s)", {}},
      {"--h", "windows.h", "window step (s)", {}},
      {"--ws", "windows.ws", "window size (s)", {}},
      {"--epsilon", "stochastic.epsilon", "target false-alarm rate of the divergence tests", {}},
      {"--k", "stochastic.k", "number of user clusters", {}},
      {"--quant", "stochastic.quant", "quantization levels size,dist,duration", {}},
      {"--pseudo-count", "stochastic.pseudo_count", "smoothing added to each reference cell (default 1/|states|)", {}},
      {"--threshold-mode", "stochastic.threshold_mode", "per_window or fixed_mean", {}},
      {"--nu-flow", "svm.flow_nu", "nu of the flow-level SVM", {}},
      {"--nu-window", "svm.window_nu", "nu of the window-level SVM", {}},
      {"--gamma-flow", "svm.flow_gamma", "RBF gamma of the flow-level SVM", {}},
      {"--gamma-window", "svm.window_gamma", "RBF gamma of the window-level SVM", {}},
      {"--variance", "svm.variance_target", "PCA explained-variance target", {}},
      {"--tau", "art.tau", "small-cluster threshold", {}},
      {"--vigilance", "art.vigilance", "ART vigilance, one value or four", {}},
      {"--radius", "art.radius", "ART radius", {}},
  };
}

struct CommonOptions {
  std::string config;
  CLI::Option* config_option = nullptr;
  std::vector<Flag> flags = make_flags();

  void attach(CLI::App* app) {
    app->set_help_flag("--help", "Print this help message and exit");  // keeps -h free so --h can be the window step
    config_option = app->add_option("--config", config, "INI configuration file")->check(CLI::ExistingFile);
    for (auto& f : flags) f.option = app->add_option(f.name, f.value, f.help);
  }

  netad::RunConfig resolve() const {
    std::vector<netad::Setting> cli;
    for (const auto& f : flags) {
      if (f.option->count() > 0) cli.push_back(netad::Setting{f.key, f.value, 0, "command line"});
    }
    std::optional<std::string> path;
    if (config_option->count() > 0) path = config;
    return netad::resolve_run_config(path, cli);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Host-based network anomaly detection: divergence tests, one-class SVMs and ART clustering"};
  app.require_subcommand(1);
  app.footer("Settings resolve as defaults < --config file < NETAD_<SECTION>_<KEY> environment < flags.");

  CommonOptions sim_opts, det_opts, eval_opts, run_opts;
  auto* sim = app.add_subcommand("simulate", "write nominal reference and evaluation flow traces");
  sim_opts.attach(sim);
  auto* det = app.add_subcommand("detect", "run the selected detectors and write verdict CSVs and plots");
  det_opts.attach(det);
  auto* eval = app.add_subcommand("evaluate", "score existing verdict files against flow labels");
  eval_opts.attach(eval);
  auto* run = app.add_subcommand("run", "simulate, detect and evaluate in one go");
  run_opts.attach(run);

  std::string plot_in, plot_out, plot_title = "window score";
  std::vector<double> plot_band;
  auto* plot = app.add_subcommand("plot", "render a window verdict CSV as SVG");
  plot->add_option("verdicts", plot_in, "verdict CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("svg", plot_out, "output SVG path")->required();
  plot->add_option("--title", plot_title, "plot title");
  plot->add_option("--band", plot_band, "shade an interval: START END")->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return netad::run_simulate(sim_opts.resolve());
    if (det->parsed()) return netad::run_detect(det_opts.resolve());
    if (eval->parsed()) return netad::run_evaluate(eval_opts.resolve());
    if (run->parsed()) return netad::run_pipeline(run_opts.resolve());
    if (plot->parsed()) {
      std::optional<std::pair<double, double>> band;
      if (plot_band.size() == 2) band = std::make_pair(plot_band[0], plot_band[1]);
      return netad::run_plot(plot_in, plot_out, plot_title, band);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "netad: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
