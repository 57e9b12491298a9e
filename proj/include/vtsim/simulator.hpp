#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vtsim/config.hpp"
#include "vtsim/curve.hpp"
#include "vtsim/metrics.hpp"
#include "vtsim/types.hpp"

namespace vtsim {

struct SimResult {
  ScenarioConfig config;
  ec::CurveParams curve;
  MetricsLog metrics;
  std::string trace; // events.jsonl contents

  std::vector<NodeId> malicious;
  std::set<NodeId> rsu_observed;            // vehicles some RSU reported on
  std::map<NodeId, double> final_trust;     // per vehicle, at end of run
  std::uint64_t ata_steps = 0;
};

/// Node naming shared by trace and reports: vehicles "v<i>", RSUs "rsu<j>",
/// then "ata" and "ta".
std::string node_name(NodeId id, std::uint32_t n_vehicles, std::uint32_t n_rsus);

/// Runs one scenario to completion. Throws ConfigError for invalid input.
/// Identical configs (including seed) give byte-identical traces and metrics.
SimResult run_scenario(const ScenarioConfig& config);

std::string summary_text(const SimResult& result);

} // namespace vtsim
