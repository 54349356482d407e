#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netad/flow_model.hpp"

namespace netad {

struct UserProfile {
  IpAddress address;
  double size_mean = 4000.0;   // bytes
  double size_std = 1000.0;    // bytes
  double rate = 0.1;           // flows per second
  double duration_mean = 2.0;  // seconds
};

enum class Scenario { atypical_user, large_download, large_access_rate, ddos_flood };

std::string_view scenario_name(Scenario s) noexcept;
/// Throws ConfigError listing the valid names.
Scenario parse_scenario(std::string_view name);

struct ScenarioConfig {
  Scenario scenario = Scenario::atypical_user;
  double total_time = 5000.0;
  double anomaly_start = 1000.0;
  double anomaly_end = 1300.0;
  /// atypical_user: intruder flow rate (flows/s); large_download: size-mean
  /// multiplier; large_access_rate and ddos_flood: rate multiplier.
  double magnitude = 0.1;
  std::uint64_t seed = 1;

  std::size_t target = 0;  // profile index for large_download / large_access_rate
  std::size_t bots = 5;    // ddos_flood: profiles [0, bots) turn into bots

  IpAddress intruder = IpAddress::parse("195.168.1.50");
  double intruder_size_mean = 4000.0;
  double intruder_size_std = 2000.0;
  double intruder_duration_mean = 2.0;

  /// Throws ConfigError unless 0 <= start < end <= total_time and magnitude > 0.
  void validate(std::size_t profile_count) const;
};

struct ScenarioPreset {
  ScenarioConfig config;
  std::vector<UserProfile> profiles;
  IpAddress server;
};

/// Eight users CT1..CT8 in three address groups on one /24, server at .1.
std::vector<UserProfile> default_profiles();
IpAddress default_server();

std::vector<std::string> preset_names();
/// Throws ConfigError naming the valid presets.
ScenarioPreset scenario_preset(std::string_view name);

/// Poisson arrivals per user, Gaussian sizes truncated below at 1 byte,
/// exponential durations, all labeled nominal and merged by start time.
///
/// Draw order (one Rng(seed, stream)): users in profile order; per user,
/// repeat {inter-arrival gap, size, duration} until the arrival passes
/// total_time (that last gap is drawn but unused).
std::vector<FlowRecord> generate_nominal(std::span<const UserProfile> profiles, double total_time,
                                         std::uint64_t seed, std::uint64_t stream = 0);

/// Adds the scenario's anomalous flows (labeled anomalous) to a nominal
/// trace, drawing from Rng(cfg.seed, 2). The result is sorted by start time.
std::vector<FlowRecord> inject_anomaly(std::span<const FlowRecord> nominal, std::span<const UserProfile> profiles,
                                       const ScenarioConfig& cfg);

struct SimulatedTraces {
  std::vector<FlowRecord> reference;   // nominal only, stream 1
  std::vector<FlowRecord> evaluation;  // nominal stream 0 plus the anomaly
};

SimulatedTraces simulate(const ScenarioPreset& preset);

}  // namespace netad
