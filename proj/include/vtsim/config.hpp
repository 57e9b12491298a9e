#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vtsim/curve.hpp"
#include "vtsim/mobility.hpp"
#include "vtsim/trust.hpp"
#include "vtsim/types.hpp"

namespace vtsim {

/// Raised for unreadable, malformed or inconsistent configuration. Carries one
/// diagnostic per offending field.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
  std::vector<std::string> diagnostics_;
};

struct ScenarioConfig {
  // Layout and population.
  Area area{1000.0, 1000.0};
  double duration_s = 150.0;
  std::uint32_t n_vehicles = 31;
  std::vector<Vec2> rsu_positions{{250.0, 500.0}, {750.0, 500.0}};
  std::vector<NodeId> malicious_ids;         // explicit set wins
  std::optional<double> malicious_fraction;  // then a fraction of n_vehicles
  std::uint32_t malicious_count = 3;         // otherwise a seeded random pick
  std::vector<NodeId> impostor_ids;          // answer auth challenges with a wrong key
  SpeedRange speed{5.0, 20.0};
  double radio_range = 250.0;
  std::uint64_t seed = 42;

  // Safety messaging and the trust loop.
  double msg_interval_s = 1.0;
  trust::TrustConfig trust;
  double detect_p = 0.9;
  double fp_p = 0.0;
  double drop_p = 0.8;
  double bogus_p = 0.5;
  bool eviction = true;

  // Curve selection: tiny23 | desk | custom.
  std::string curve = "desk";
  std::optional<std::uint64_t> curve_q, curve_a, curve_b, curve_gx, curve_gy, curve_n;
  unsigned kappa = 0; // 0 = default for the curve

  // Data traffic (constant bit rate flows between vehicle pairs).
  std::uint32_t n_flows = 10;
  std::uint32_t packet_size = 512;
  double packet_interval_s = 0.25;
  double traffic_start_s = 5.0;

  // Radio, routing and channel abstractions.
  double link_rate_bps = 6e6;
  double latency_base_s = 0.0002;
  double channel_latency_s = 0.005;
  double dsdv_period_s = 1.0;
  double route_timeout_s = 3.0;
  std::uint32_t ttl = 32;
  double mobility_tick_s = 0.1;
  double sample_window_s = 1.0;

  /// Applies one "key = value" assignment. Throws ConfigError.
  void set(std::string_view key, std::string_view value);

  /// Checks cross-field invariants; throws ConfigError listing every problem.
  void validate() const;

  /// Validated curve parameters for the selected profile.
  ec::CurveParams resolve_curve() const;
  unsigned resolved_kappa(const ec::CurveParams& params) const;

  /// Malicious vehicle ids after applying ids / fraction / count precedence.
  std::vector<NodeId> resolve_malicious() const;

  /// Every key with its effective value, in a stable order. Feeding the
  /// result back through parse_config reproduces this config.
  std::vector<std::pair<std::string, std::string>> to_entries() const;
  std::string to_text() const;
};

/// Every key accepted by ScenarioConfig::set, in documentation order.
const std::vector<std::string>& config_keys();

/// Parses flat "key = value" text ('#' starts a comment) on top of defaults.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::string& path);

/// "KEY=VALUE" override as given on the command line.
void apply_override(ScenarioConfig& config, std::string_view assignment);

} // namespace vtsim
