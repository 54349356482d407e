#include "netad/simulator.hpp"

#include <algorithm>

#include "netad/error.hpp"
#include "netad/random.hpp"

namespace netad {

namespace {

constexpr std::uint64_t kNominalStream = 0;
constexpr std::uint64_t kReferenceStream = 1;
constexpr std::uint64_t kAnomalyStream = 2;

// DDoS bot flows: mostly single pings, sometimes many pings merged into one flow.
constexpr double kPingMergeProbability = 0.2;
constexpr double kPingSizeMean = 300.0;
constexpr double kPingSizeStd = 100.0;
constexpr double kMergedSizeMean = 12000.0;
constexpr double kMergedSizeStd = 3000.0;
constexpr double kPingDurationMean = 0.5;

void sort_by_start(std::vector<FlowRecord>& flows) {
  std::stable_sort(flows.begin(), flows.end(),
                   [](const FlowRecord& a, const FlowRecord& b) { return a.start_time < b.start_time; });
}

// Poisson flows for one profile over [begin, end).
void emit_flows(Rng& rng, const UserProfile& p, double begin, double end, Label label,
                std::vector<FlowRecord>& out) {
  double t = begin;
  while (true) {
    t += rng.exponential(1.0 / p.rate);
    const double size = std::max(1.0, rng.normal(p.size_mean, p.size_std));
    const double duration = rng.exponential(p.duration_mean);
    if (t >= end) break;
    out.push_back(FlowRecord{p.address, size, duration, t, label});
  }
}

}  // namespace

std::string_view scenario_name(Scenario s) noexcept {
  switch (s) {
    case Scenario::atypical_user: return "atypical_user";
    case Scenario::large_download: return "large_download";
    case Scenario::large_access_rate: return "large_access_rate";
    case Scenario::ddos_flood: return "ddos_flood";
  }
  return "unknown";
}

std::vector<std::string> preset_names() {
  return {"atypical_user", "large_download", "large_access_rate", "ddos_flood"};
}

Scenario parse_scenario(std::string_view name) {
  for (auto s : {Scenario::atypical_user, Scenario::large_download, Scenario::large_access_rate,
                 Scenario::ddos_flood}) {
    if (scenario_name(s) == name) return s;
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown scenario '" + std::string(name) + "' (valid: " + valid + ")");
}

void ScenarioConfig::validate(std::size_t profile_count) const {
  if (!(total_time > 0.0)) throw ConfigError("total_time must be positive");
  if (!(anomaly_start >= 0.0 && anomaly_start < anomaly_end && anomaly_end <= total_time)) {
    throw ConfigError("anomaly interval must satisfy 0 <= start < end <= total_time");
  }
  if (!(magnitude > 0.0)) throw ConfigError("magnitude must be positive");
  if ((scenario == Scenario::large_download || scenario == Scenario::large_access_rate) && target >= profile_count) {
    throw ConfigError("target user index out of range");
  }
  if (scenario == Scenario::ddos_flood && (bots == 0 || bots > profile_count)) {
    throw ConfigError("bot count must lie in [1, number of users]");
  }
}

std::vector<UserProfile> default_profiles() {
  // Group means keep each user's sizes inside one quantization bin.
  const struct {
    const char* ip;
    double size_mean;
  } users[] = {
      {"192.168.1.10", 2000.0},  {"192.168.1.11", 2000.0},  {"192.168.1.12", 2000.0},
      {"192.168.1.100", 5000.0}, {"192.168.1.101", 5000.0}, {"192.168.1.102", 5000.0},
      {"192.168.1.200", 8000.0}, {"192.168.1.220", 8000.0},
  };
  std::vector<UserProfile> profiles;
  for (const auto& u : users) profiles.push_back(UserProfile{IpAddress::parse(u.ip), u.size_mean, 300.0, 0.1, 2.0});
  return profiles;
}

IpAddress default_server() { return IpAddress::parse("192.168.1.1"); }

ScenarioPreset scenario_preset(std::string_view name) {
  ScenarioPreset preset{ScenarioConfig{}, default_profiles(), default_server()};
  auto& c = preset.config;
  c.scenario = parse_scenario(name);
  switch (c.scenario) {
    case Scenario::atypical_user:
      c.total_time = 5000.0;
      c.anomaly_start = 1000.0;
      c.anomaly_end = 1300.0;
      c.magnitude = 0.1;
      break;
    case Scenario::large_download:
      c.total_time = 5000.0;
      c.anomaly_start = 1000.0;
      c.anomaly_end = 1300.0;
      c.magnitude = 2.0;
      break;
    case Scenario::large_access_rate:
      c.total_time = 2000.0;
      c.anomaly_start = 1000.0;
      c.anomaly_end = 1300.0;
      c.magnitude = 6.0;
      break;
    case Scenario::ddos_flood:
      c.total_time = 900.0;
      c.anomaly_start = 500.0;
      c.anomaly_end = 600.0;
      c.magnitude = 10.0;
      break;
  }
  return preset;
}

std::vector<FlowRecord> generate_nominal(std::span<const UserProfile> profiles, double total_time,
                                         std::uint64_t seed, std::uint64_t stream) {
  if (!(total_time > 0.0)) throw ConfigError("total_time must be positive");
  Rng rng(seed, stream);
  std::vector<FlowRecord> flows;
  for (const auto& p : profiles) {
    if (!(p.rate > 0.0) || !(p.size_std >= 0.0) || !(p.duration_mean > 0.0)) {
      throw ConfigError("profile for " + p.address.to_string() + " has a non-positive rate or duration");
    }
    emit_flows(rng, p, 0.0, total_time, Label::nominal, flows);
  }
  sort_by_start(flows);
  return flows;
}

std::vector<FlowRecord> inject_anomaly(std::span<const FlowRecord> nominal, std::span<const UserProfile> profiles,
                                       const ScenarioConfig& cfg) {
  cfg.validate(profiles.size());
  Rng rng(cfg.seed, kAnomalyStream);
  std::vector<FlowRecord> out(nominal.begin(), nominal.end());
  const double a = cfg.anomaly_start;
  const double b = cfg.anomaly_end;

  switch (cfg.scenario) {
    case Scenario::atypical_user: {
      UserProfile intruder{cfg.intruder, cfg.intruder_size_mean, cfg.intruder_size_std, cfg.magnitude,
                           cfg.intruder_duration_mean};
      emit_flows(rng, intruder, a, b, Label::anomalous, out);
      break;
    }
    case Scenario::large_download: {
      // The target's flows inside the interval are redrawn with the larger mean.
      UserProfile p = profiles[cfg.target];
      std::erase_if(out, [&](const FlowRecord& f) { return f.user == p.address && f.start_time >= a && f.start_time < b; });
      p.size_mean *= cfg.magnitude;
      emit_flows(rng, p, a, b, Label::anomalous, out);
      break;
    }
    case Scenario::large_access_rate: {
      // Superposing a Poisson stream at (m - 1) * rate gives rate m * rate overall.
      if (cfg.magnitude <= 1.0) throw ConfigError("access-rate multiplier must exceed 1");
      UserProfile p = profiles[cfg.target];
      p.rate *= cfg.magnitude - 1.0;
      emit_flows(rng, p, a, b, Label::anomalous, out);
      break;
    }
    case Scenario::ddos_flood: {
      for (std::size_t k = 0; k < cfg.bots; ++k) {
        const auto& p = profiles[k];
        double t = a;
        while (true) {
          t += rng.exponential(1.0 / (p.rate * cfg.magnitude));
          const bool merged = rng.uniform() < kPingMergeProbability;
          const double size = merged ? std::max(1.0, rng.normal(kMergedSizeMean, kMergedSizeStd))
                                     : std::max(1.0, rng.normal(kPingSizeMean, kPingSizeStd));
          const double duration = rng.exponential(kPingDurationMean);
          if (t >= b) break;
          out.push_back(FlowRecord{p.address, size, duration, t, Label::anomalous});
        }
      }
      break;
    }
  }
  sort_by_start(out);
  return out;
}

SimulatedTraces simulate(const ScenarioPreset& preset) {
  preset.config.validate(preset.profiles.size());
  SimulatedTraces traces;
  traces.reference = generate_nominal(preset.profiles, preset.config.total_time, preset.config.seed, kReferenceStream);
  auto nominal = generate_nominal(preset.profiles, preset.config.total_time, preset.config.seed, kNominalStream);
  traces.evaluation = inject_anomaly(nominal, preset.profiles, preset.config);
  return traces;
}

}  // namespace netad
