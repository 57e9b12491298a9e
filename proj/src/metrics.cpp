#include "vtsim/metrics.hpp"

#include <cstdio>

namespace vtsim {

void MetricsLog::record_sent(NodeId src, bool honest_flow) {
  ++per_node[src].sent;
  if (honest_flow) ++honest.sent;
}

void MetricsLog::record_delivery(NodeId src, bool honest_flow, std::uint64_t bytes) {
  ++per_node[src].delivered;
  if (honest_flow) ++honest.delivered;
  bytes_delivered += bytes;
  window_bytes += bytes;
}

void MetricsLog::record_drop(NodeId src, bool honest_flow, std::string_view reason) {
  ++per_node[src].dropped;
  if (honest_flow) ++honest.dropped;
  ++drop_reasons[std::string(reason)];
}

PacketCounters MetricsLog::totals() const {
  PacketCounters out;
  for (const auto& [id, c] : per_node) {
    out.sent += c.sent;
    out.delivered += c.delivered;
    out.dropped += c.dropped;
  }
  return out;
}

double MetricsLog::pdr() const {
  const PacketCounters t = totals();
  return t.sent == 0 ? 1.0 : static_cast<double>(t.delivered) / static_cast<double>(t.sent);
}

double MetricsLog::honest_pdr() const {
  return honest.sent == 0 ? 1.0 : static_cast<double>(honest.delivered) / static_cast<double>(honest.sent);
}

void sample_metrics(MetricsLog& log, double now, double window_s, const trust::TrustStore& store) {
  log.bandwidth.push_back({now, log.window_bytes, static_cast<double>(log.window_bytes) / window_s});
  log.window_bytes = 0;
  log.last_sample_time = now;
  for (const auto& [id, rec] : store.records()) {
    log.trust_samples.push_back({now, id, rec.trust, rec.reward_points, trust::is_trusted(rec, store.config())});
  }
}

void TraceWriter::emit(SimTime time, std::string_view type, std::string_view src, std::string_view dst,
                       nlohmann::ordered_json detail) {
  nlohmann::ordered_json row;
  row["time"] = to_seconds(time);
  row["type"] = type;
  row["src"] = src;
  row["dst"] = dst;
  row["detail"] = std::move(detail);
  text_ += row.dump();
  text_ += '\n';
  ++lines_;
}

std::string trust_csv(const MetricsLog& log) {
  std::string out = "time_s,vehicle_id,trust,reward_points,trusted\n";
  char buf[128];
  for (const TrustSample& s : log.trust_samples) {
    std::snprintf(buf, sizeof buf, "%.3f,%u,%.6f,%llu,%d\n", s.time, s.vehicle, s.trust,
                  static_cast<unsigned long long>(s.reward_points), s.trusted ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string bandwidth_csv(const MetricsLog& log) {
  std::string out = "time_s,bytes_per_s\n";
  char buf[96];
  for (const BandwidthSample& s : log.bandwidth) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f\n", s.time, s.bytes_per_s);
    out += buf;
  }
  return out;
}

} // namespace vtsim
