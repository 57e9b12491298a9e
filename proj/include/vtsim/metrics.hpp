#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vtsim/trust.hpp"
#include "vtsim/types.hpp"

namespace vtsim {

struct TrustSample {
  double time = 0.0;
  NodeId vehicle = 0;
  double trust = 0.0;
  std::uint64_t reward_points = 0;
  bool trusted = true;
};

struct BandwidthSample {
  double time = 0.0;
  std::uint64_t bytes = 0;  // delivered since the previous sample
  double bytes_per_s = 0.0;
};

struct PacketCounters {
  std::uint64_t sent = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
};

struct MetricsLog {
  std::vector<TrustSample> trust_samples;
  std::vector<BandwidthSample> bandwidth;
  std::map<NodeId, PacketCounters> per_node;      // data packets, keyed by source
  std::map<std::string, std::uint64_t> drop_reasons;
  PacketCounters honest;                          // flows with honest endpoints only
  std::uint64_t bytes_delivered = 0;
  std::uint64_t window_bytes = 0;                 // delivered since the last sample
  double last_sample_time = 0.0;

  std::uint64_t safety_sent = 0;
  std::uint64_t safety_forwarded = 0;
  std::uint64_t safety_rejected = 0;
  std::uint64_t safety_dropped = 0;
  std::uint64_t payload_mismatches = 0;
  std::map<NodeId, double> eviction_times;

  void record_sent(NodeId src, bool honest_flow);
  void record_delivery(NodeId src, bool honest_flow, std::uint64_t bytes);
  void record_drop(NodeId src, bool honest_flow, std::string_view reason);

  PacketCounters totals() const;
  /// delivered / sent, or 1 when nothing was sent.
  double pdr() const;
  double honest_pdr() const;
};

/// Appends one bandwidth sample covering (last sample, now] and one trust
/// sample per record in the store.
void sample_metrics(MetricsLog& log, double now, double window_s, const trust::TrustStore& store);

/// JSON-lines event trace: {time, type, src, dst, detail}.
class TraceWriter {
public:
  void emit(SimTime time, std::string_view type, std::string_view src, std::string_view dst,
            nlohmann::ordered_json detail = nlohmann::ordered_json::object());
  const std::string& text() const noexcept { return text_; }
  std::size_t lines() const noexcept { return lines_; }

private:
  std::string text_;
  std::size_t lines_ = 0;
};

std::string trust_csv(const MetricsLog& log);
std::string bandwidth_csv(const MetricsLog& log);

} // namespace vtsim
