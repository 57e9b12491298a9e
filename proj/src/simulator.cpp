#include "vtsim/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "vtsim/crypto.hpp"
#include "vtsim/dsdv.hpp"
#include "vtsim/entities.hpp"
#include "vtsim/mobility.hpp"
#include "vtsim/rng.hpp"

namespace vtsim {

using nlohmann::ordered_json;

std::string node_name(NodeId id, std::uint32_t n_vehicles, std::uint32_t n_rsus) {
  if (id < n_vehicles) return "v" + std::to_string(id);
  if (id < n_vehicles + n_rsus) return "rsu" + std::to_string(id - n_vehicles);
  if (id == n_vehicles + n_rsus) return "ata";
  return "ta";
}

namespace {

struct Vehicle {
  NodeId id = 0;
  MobilityState mobility;
  Rng mobility_rng;
  Rng crypto_rng;
  Rng behavior_rng;
  std::optional<entities::ObuAgent> obu;
  dsdv::DsdvAgent router;
  bool malicious = false;
  bool impostor = false;
  bool revoked = false; // eviction notice has reached the network
};

struct Flow {
  NodeId src = 0;
  NodeId dst = 0;
  bool honest = true;
};

struct Packet {
  std::uint64_t id = 0;
  std::size_t flow = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t size = 0;
  std::uint32_t hops = 0;
  bool honest = true;
};

class Simulation {
public:
  explicit Simulation(const ScenarioConfig& config);
  SimResult run();

private:
  using Action = std::function<void()>;
  struct Scheduled {
    SimTime time;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Scheduled& a, const Scheduled& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void schedule(SimTime at, Action action);
  std::string name(NodeId id) const { return node_name(id, n_vehicles_, n_rsus_); }
  SimTime hop_delay(std::uint64_t bytes) const;
  std::optional<std::size_t> nearest_rsu(const Vec2& pos) const;

  void register_entities();
  void start_timers();

  void on_mobility_tick();
  void on_sample();
  void on_dsdv_timer(NodeId v);
  void on_safety_timer(NodeId v);
  void send_safety(NodeId v, std::size_t rsu_index);
  void on_rsu_receive(std::size_t rsu_index, const entities::SealedMessage& msg);
  void report_event(const trust::TrustEvent& event);
  void on_ata_event(const trust::TrustEvent& event);
  void on_ata_recommendation(NodeId subject, NodeId recommender, double value);
  void on_eviction(const entities::EvictionNotice& notice, std::uint64_t step);
  void on_flow_timer(std::size_t flow);
  void forward_at(NodeId at, Packet packet, std::optional<NodeId> previous);
  void report_watchdog(NodeId observer, NodeId subject, double value);
  void drop_packet(const Packet& packet, NodeId at, const char* reason);
  void trust_update_row(const entities::AtaOutcome& outcome, ordered_json detail);

  ScenarioConfig config_;
  ec::CurveParams params_;
  unsigned kappa_;
  std::uint32_t n_vehicles_;
  std::uint32_t n_rsus_;
  NodeId ata_id_;
  SimTime now_ = 0;
  SimTime end_;
  std::uint64_t next_seq_ = 0;
  std::vector<Scheduled> queue_;

  entities::TaDirectory directory_;
  std::vector<Vehicle> vehicles_;
  std::vector<entities::RsuAgent> rsus_;
  std::optional<entities::AtaAgent> ata_;
  std::vector<Flow> flows_;
  std::uint64_t next_packet_ = 0;
  std::map<std::uint64_t, Packet> in_flight_packets_;
  std::map<std::pair<NodeId, std::uint64_t>, std::vector<std::uint8_t>> originated_;

  TraceWriter trace_;
  SimResult result_;
};

Simulation::Simulation(const ScenarioConfig& config)
    : config_(config),
      params_((config.validate(), config.resolve_curve())),
      kappa_(config.resolved_kappa(params_)),
      n_vehicles_(config.n_vehicles),
      n_rsus_(static_cast<std::uint32_t>(config.rsu_positions.size())),
      ata_id_(n_vehicles_ + n_rsus_),
      end_(from_seconds(config.duration_s)),
      directory_(params_) {
  result_.config = config_;
  result_.curve = params_;
  result_.malicious = config_.resolve_malicious();
}

void Simulation::schedule(SimTime at, Action action) {
  if (at < now_) at = now_;
  if (at > end_) return;
  queue_.push_back(Scheduled{at, next_seq_++, std::move(action)});
  std::push_heap(queue_.begin(), queue_.end(), Later{});
}

SimTime Simulation::hop_delay(std::uint64_t bytes) const {
  const double seconds = config_.latency_base_s + static_cast<double>(bytes) * 8.0 / config_.link_rate_bps;
  return std::max<SimTime>(1, from_seconds(seconds));
}

std::optional<std::size_t> Simulation::nearest_rsu(const Vec2& pos) const {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < rsus_.size(); ++i) {
    if (!radio_in_range(rsus_[i].position(), pos, config_.radio_range)) continue;
    const double d = distance(rsus_[i].position(), pos);
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

void Simulation::register_entities() {
  Rng ta_rng(config_.seed, "ta");
  auto row = [this](NodeId id, entities::Role role) {
    const auto& rec = *directory_.find(id);
    trace_.emit(0, "REGISTER", "ta", name(id),
                ordered_json{{"role", entities::to_string(role)}, {"public", rec.keypair.public_key.to_string()}});
  };
  for (NodeId v = 0; v < n_vehicles_; ++v) {
    directory_.register_entity(v, entities::Role::OBU, ta_rng);
    row(v, entities::Role::OBU);
  }
  for (std::uint32_t r = 0; r < n_rsus_; ++r) {
    directory_.register_entity(n_vehicles_ + r, entities::Role::RSU, ta_rng);
    row(n_vehicles_ + r, entities::Role::RSU);
  }
  directory_.register_entity(ata_id_, entities::Role::ATA, ta_rng);
  row(ata_id_, entities::Role::ATA);

  const std::set<NodeId> malicious(result_.malicious.begin(), result_.malicious.end());
  const std::set<NodeId> impostors(config_.impostor_ids.begin(), config_.impostor_ids.end());
  const Area area = config_.area;
  vehicles_.reserve(n_vehicles_);
  for (NodeId v = 0; v < n_vehicles_; ++v) {
    Vehicle veh{v,
                {},
                Rng(config_.seed, "mobility", v),
                Rng(config_.seed, "crypto", v),
                Rng(config_.seed, "behavior", v),
                std::nullopt,
                dsdv::DsdvAgent(v),
                malicious.contains(v),
                impostors.contains(v),
                false};
    veh.mobility = random_start(area, config_.speed, veh.mobility_rng);
    veh.obu.emplace(v, directory_.find(v)->keypair, params_, kappa_);
    vehicles_.push_back(std::move(veh));
  }
  rsus_.reserve(n_rsus_);
  for (std::uint32_t r = 0; r < n_rsus_; ++r) {
    rsus_.emplace_back(n_vehicles_ + r, config_.rsu_positions[r], config_.radio_range, directory_,
                       entities::PlausibilityOracle(config_.detect_p, config_.fp_p,
                                                    Rng(config_.seed, "plausibility", r)),
                       Rng(config_.seed, "challenge", r), kappa_);
  }
  ata_.emplace(ata_id_, directory_, config_.trust, config_.eviction);
  ata_->init_records(0.0);
}

void Simulation::start_timers() {
  const SimTime tick = from_seconds(config_.mobility_tick_s);
  schedule(tick, [this] { on_mobility_tick(); });
  schedule(from_seconds(config_.sample_window_s), [this] { on_sample(); });

  for (NodeId v = 0; v < n_vehicles_; ++v) {
    Rng phase(config_.seed, "phase", v);
    schedule(from_seconds(phase.uniform(0.0, config_.dsdv_period_s)), [this, v] { on_dsdv_timer(v); });
    schedule(from_seconds(phase.uniform(0.0, config_.msg_interval_s)), [this, v] { on_safety_timer(v); });
  }

  Rng flow_rng(config_.seed, "flows");
  if (n_vehicles_ >= 2) {
    const std::set<NodeId> malicious(result_.malicious.begin(), result_.malicious.end());
    for (std::uint32_t f = 0; f < config_.n_flows; ++f) {
      const auto src = static_cast<NodeId>(flow_rng.below(n_vehicles_));
      auto dst = static_cast<NodeId>(flow_rng.below(n_vehicles_ - 1));
      if (dst >= src) ++dst;
      flows_.push_back({src, dst, !malicious.contains(src) && !malicious.contains(dst)});
      const double start = config_.traffic_start_s + flow_rng.uniform(0.0, config_.packet_interval_s);
      schedule(from_seconds(start), [this, f] { on_flow_timer(f); });
    }
  }
}

void Simulation::on_mobility_tick() {
  const double dt = config_.mobility_tick_s;
  for (Vehicle& v : vehicles_) {
    v.mobility = step_mobility(v.mobility, dt, config_.area, config_.speed, v.mobility_rng);
  }
  schedule(now_ + from_seconds(dt), [this] { on_mobility_tick(); });
}

void Simulation::on_sample() {
  sample_metrics(result_.metrics, to_seconds(now_), config_.sample_window_s, ata_->store());
  schedule(now_ + from_seconds(config_.sample_window_s), [this] { on_sample(); });
}

void Simulation::on_dsdv_timer(NodeId v) {
  Vehicle& self = vehicles_[v];
  if (self.revoked) return;
  schedule(now_ + from_seconds(config_.dsdv_period_s), [this, v] { on_dsdv_timer(v); });

  self.router.expire_links(now_, from_seconds(config_.route_timeout_s));
  auto adv = std::make_shared<const dsdv::Advertisement>(self.router.periodic_update(now_));
  const SimTime delay = hop_delay(8 + 12 * adv->routes.size());
  for (Vehicle& other : vehicles_) {
    if (other.id == v || other.revoked) continue;
    if (!radio_in_range(self.mobility.position, other.mobility.position, config_.radio_range)) continue;
    const NodeId u = other.id;
    schedule(now_ + delay, [this, u, adv] {
      if (!vehicles_[u].revoked) vehicles_[u].router.handle_update(*adv, now_);
    });
  }
}

void Simulation::on_safety_timer(NodeId v) {
  schedule(now_ + from_seconds(config_.msg_interval_s), [this, v] { on_safety_timer(v); });
  Vehicle& veh = vehicles_[v];
  const auto r = nearest_rsu(veh.mobility.position);
  if (!r) return;
  entities::RsuAgent& rsu = rsus_[*r];
  if (veh.obu->has_session(rsu.id())) {
    send_safety(v, *r);
    return;
  }

  const entities::ObuAgent& obu = *veh.obu;
  const bool impostor = veh.impostor;
  const entities::Responder responder = [&obu, impostor, this](const ec::CurvePoint& challenge) {
    // An impostor answers with a key the TA never issued to it.
    const ec::Scalar key = impostor ? obu.keys().private_key % (params_.order - 1) + 1 : obu.keys().private_key;
    return crypto::auth_respond(key, challenge, params_);
  };
  const entities::AuthOutcome auth =
      rsu.authenticate(obu.keys().public_key, veh.mobility.position, responder, to_seconds(now_));
  trace_.emit(now_, "AUTH_CHALLENGE", name(rsu.id()), name(v),
              ordered_json{{"challenge", auth.challenge_point.to_string()}});

  if (auth.session.state == entities::SessionState::Verified) {
    trace_.emit(now_, "AUTH_OK", name(rsu.id()), name(v));
    veh.obu->mark_verified(rsu.id());
    const std::size_t idx = *r;
    schedule(now_ + 2 * hop_delay(8 * ((std::bit_width(params_.q) + 7) / 8)), [this, v, idx] { send_safety(v, idx); });
  } else if (auth.failure_event) {
    trace_.emit(now_, "AUTH_FAIL", name(rsu.id()), name(v));
    report_event(*auth.failure_event);
  } else {
    ++result_.metrics.safety_dropped;
    trace_.emit(now_, "DROP", name(rsu.id()), name(v), ordered_json{{"reason", "evicted"}, {"stage", "auth"}});
  }
}

void Simulation::send_safety(NodeId v, std::size_t rsu_index) {
  Vehicle& veh = vehicles_[v];
  entities::RsuAgent& rsu = rsus_[rsu_index];
  if (!veh.obu->has_session(rsu.id())) return;
  if (!radio_in_range(rsu.position(), veh.mobility.position, config_.radio_range)) return;

  const bool bogus = veh.malicious && veh.behavior_rng.bernoulli(config_.bogus_p);
  char text[128];
  const int len = std::snprintf(text, sizeof text, "SAFETY v=%u seq=%llu t=%.3f pos=%.1f,%.1f", v,
                                static_cast<unsigned long long>(veh.obu->last_seq() + 1), to_seconds(now_),
                                veh.mobility.position.x, veh.mobility.position.y);
  const std::vector<std::uint8_t> payload(text, text + len);
  entities::SealedMessage sealed;
  try {
    sealed = veh.obu->send_safety(rsu.id(), rsu.keys().public_key, payload, to_seconds(now_), bogus, veh.crypto_rng);
  } catch (const crypto::CryptoError& e) {
    if (e.kind() != crypto::CryptoError::Kind::EncodingFailure) throw;
    ++result_.metrics.safety_dropped;
    trace_.emit(now_, "DROP", name(v), name(rsu.id()), ordered_json{{"reason", "encoding_failure"}});
    return;
  }
  originated_[{v, sealed.seq}] = payload;
  ++result_.metrics.safety_sent;

  const std::uint64_t coord_bytes = (std::bit_width(params_.q) + 7) / 8;
  const std::uint64_t bytes = 24 + sealed.blocks.size() * 4 * coord_bytes;
  trace_.emit(now_, "MSG_SEND", name(v), name(rsu.id()),
              ordered_json{{"seq", sealed.seq}, {"blocks", sealed.blocks.size()}, {"bytes", bytes}});
  schedule(now_ + hop_delay(bytes),
           [this, rsu_index, msg = std::move(sealed)] { on_rsu_receive(rsu_index, msg); });
}

void Simulation::on_rsu_receive(std::size_t rsu_index, const entities::SealedMessage& msg) {
  entities::RsuAgent& rsu = rsus_[rsu_index];
  const Vehicle& veh = vehicles_[msg.origin];
  if (!radio_in_range(rsu.position(), veh.mobility.position, config_.radio_range)) {
    ++result_.metrics.safety_dropped;
    trace_.emit(now_, "DROP", name(rsu.id()), name(msg.origin),
                ordered_json{{"reason", "out_of_range"}, {"seq", msg.seq}});
    return;
  }
  entities::IngestResult res = rsu.ingest(msg, to_seconds(now_));
  switch (res.status) {
  case entities::IngestResult::Status::Dropped:
    ++result_.metrics.safety_dropped;
    trace_.emit(now_, "DROP", name(rsu.id()), name(msg.origin), ordered_json{{"reason", res.reason}, {"seq", msg.seq}});
    return;
  case entities::IngestResult::Status::Rejected:
    ++result_.metrics.safety_rejected;
    trace_.emit(now_, "DROP", name(rsu.id()), name(msg.origin), ordered_json{{"reason", "garbage"}, {"seq", msg.seq}});
    break;
  case entities::IngestResult::Status::Forwarded: {
    ++result_.metrics.safety_forwarded;
    const auto it = originated_.find({msg.origin, msg.seq});
    const bool intact = it != originated_.end() && it->second == res.message->payload;
    if (!intact) ++result_.metrics.payload_mismatches;
    trace_.emit(now_, "MSG_FORWARD", name(rsu.id()), name(ata_id_),
                ordered_json{{"origin", name(msg.origin)},
                             {"seq", msg.seq},
                             {"verdict", trust::to_string(res.event->kind)},
                             {"intact", intact}});
    break;
  }
  }
  report_event(*res.event);
}

void Simulation::report_event(const trust::TrustEvent& event) {
  result_.rsu_observed.insert(event.subject);
  schedule(now_ + from_seconds(config_.channel_latency_s), [this, event] { on_ata_event(event); });
}

void Simulation::trust_update_row(const entities::AtaOutcome& outcome, ordered_json detail) {
  result_.ata_steps = outcome.step;
  ordered_json row{{"step", outcome.step}};
  for (auto& [k, v] : detail.items()) row[k] = v;
  row["trust"] = outcome.record.trust;
  row["reward_points"] = outcome.record.reward_points;
  row["trusted"] = trust::is_trusted(outcome.record, config_.trust);
  trace_.emit(now_, "TRUST_UPDATE", name(ata_id_), name(outcome.record.vehicle_id), std::move(row));
  if (outcome.eviction) on_eviction(*outcome.eviction, outcome.step);
}

void Simulation::on_ata_event(const trust::TrustEvent& event) {
  trust::TrustEvent stamped = event;
  stamped.time = to_seconds(now_);
  const entities::AtaOutcome outcome = ata_->process(stamped);
  trust_update_row(outcome, ordered_json{{"cause", trust::to_string(event.kind)}, {"reporter", name(event.reporter)}});
}

void Simulation::on_ata_recommendation(NodeId subject, NodeId recommender, double value) {
  const entities::AtaOutcome outcome = ata_->recommend(subject, recommender, value, to_seconds(now_));
  trust_update_row(outcome,
                   ordered_json{{"cause", "Recommendation"}, {"recommender", name(recommender)}, {"value", value}});
}

void Simulation::on_eviction(const entities::EvictionNotice& notice, std::uint64_t step) {
  trace_.emit(now_, "EVICT", name(ata_id_), name(notice.vehicle),
              ordered_json{{"step", step}, {"trust", notice.trust}});
  result_.metrics.eviction_times[notice.vehicle] = notice.time;
  schedule(now_ + from_seconds(config_.channel_latency_s), [this, notice] {
    for (entities::RsuAgent& rsu : rsus_) rsu.on_eviction(notice);
    for (Vehicle& v : vehicles_) {
      if (v.id == notice.vehicle) {
        v.revoked = true;
        for (const entities::RsuAgent& rsu : rsus_) v.obu->drop_session(rsu.id());
      } else {
        v.router.forget(notice.vehicle, now_);
      }
    }
  });
}

void Simulation::on_flow_timer(std::size_t f) {
  schedule(now_ + from_seconds(config_.packet_interval_s), [this, f] { on_flow_timer(f); });
  const Flow& flow = flows_[f];
  Packet p{next_packet_++, f, flow.src, flow.dst, config_.packet_size, 0, flow.honest};
  result_.metrics.record_sent(p.src, p.honest);
  in_flight_packets_.emplace(p.id, p);
  if (vehicles_[p.src].revoked) {
    drop_packet(p, p.src, "source_evicted");
    return;
  }
  forward_at(p.src, p, std::nullopt);
}

void Simulation::drop_packet(const Packet& packet, NodeId at, const char* reason) {
  result_.metrics.record_drop(packet.src, packet.honest, reason);
  in_flight_packets_.erase(packet.id);
  trace_.emit(now_, "DROP", name(at), name(packet.dst),
              ordered_json{{"packet", packet.id}, {"origin", name(packet.src)}, {"reason", reason}});
}

void Simulation::forward_at(NodeId at, Packet packet, std::optional<NodeId> previous) {
  Vehicle& node = vehicles_[at];
  if (at == packet.dst) {
    result_.metrics.record_delivery(packet.src, packet.honest, packet.size);
    in_flight_packets_.erase(packet.id);
    return;
  }
  if (node.revoked) {
    drop_packet(packet, at, "evicted_relay");
    return;
  }
  const bool relay = at != packet.src;
  if (relay && node.malicious && node.behavior_rng.bernoulli(config_.drop_p)) {
    // Silent drop: neither a forward nor a route error is emitted.
    drop_packet(packet, at, "malicious");
    if (previous) report_watchdog(*previous, at, 0.0);
    if (const auto r = nearest_rsu(node.mobility.position)) {
      if (const auto event = rsus_[*r].observe_drop(at, node.mobility.position, to_seconds(now_))) {
        report_event(*event);
      }
    }
    return;
  }
  if (packet.hops >= config_.ttl) {
    drop_packet(packet, at, "ttl");
    return;
  }
  const auto next = node.router.next_hop(packet.dst);
  if (!next) {
    drop_packet(packet, at, "no_route");
    return;
  }
  if (!radio_in_range(node.mobility.position, vehicles_[*next].mobility.position, config_.radio_range)) {
    node.router.break_link(*next, now_);
    drop_packet(packet, at, "link_broken");
    return;
  }
  if (relay && previous) report_watchdog(*previous, at, 1.0);
  ++packet.hops;
  const NodeId hop = *next;
  schedule(now_ + hop_delay(packet.size), [this, hop, packet, at] { forward_at(hop, packet, at); });
}

void Simulation::report_watchdog(NodeId observer, NodeId subject, double value) {
  const Vehicle& obs = vehicles_[observer];
  if (obs.revoked) return;
  const auto r = nearest_rsu(obs.mobility.position);
  if (!r || rsus_[*r].is_evicted(observer)) return;
  schedule(now_ + from_seconds(config_.channel_latency_s),
           [this, subject, observer, value] { on_ata_recommendation(subject, observer, value); });
}

SimResult Simulation::run() {
  register_entities();
  start_timers();

  while (!queue_.empty()) {
    std::pop_heap(queue_.begin(), queue_.end(), Later{});
    Scheduled next = std::move(queue_.back());
    queue_.pop_back();
    now_ = next.time;
    next.action();
  }

  now_ = end_;
  const double end_s = to_seconds(end_);
  MetricsLog& m = result_.metrics;
  if (m.bandwidth.empty() || m.last_sample_time < end_s) {
    sample_metrics(m, end_s, end_s - m.last_sample_time, ata_->store());
  }
  const auto leftover = in_flight_packets_;
  for (const auto& [id, packet] : leftover) drop_packet(packet, packet.src, "in_flight");

  for (const auto& [id, rec] : ata_->store().records()) result_.final_trust[id] = rec.trust;
  result_.trace = trace_.text();
  return std::move(result_);
}

} // namespace

SimResult run_scenario(const ScenarioConfig& config) { return Simulation(config).run(); }

std::string summary_text(const SimResult& result) {
  const MetricsLog& m = result.metrics;
  const PacketCounters t = m.totals();
  const auto n_rsus = static_cast<std::uint32_t>(result.config.rsu_positions.size());
  std::ostringstream out;
  char buf[160];
  out << "seed: " << result.config.seed << "\n";
  out << "curve: " << result.curve.name << " (q=" << result.curve.q << ", n=" << result.curve.order << ")\n";
  out << "vehicles: " << result.config.n_vehicles << "  rsus: " << n_rsus << "\n";
  out << "eviction: " << (result.config.eviction ? "on" : "off") << "\n";
  std::snprintf(buf, sizeof buf, "data packets: sent=%llu delivered=%llu dropped=%llu pdr=%.6f\n",
                static_cast<unsigned long long>(t.sent), static_cast<unsigned long long>(t.delivered),
                static_cast<unsigned long long>(t.dropped), m.pdr());
  out << buf;
  std::snprintf(buf, sizeof buf, "honest flows: sent=%llu delivered=%llu pdr=%.6f\n",
                static_cast<unsigned long long>(m.honest.sent), static_cast<unsigned long long>(m.honest.delivered),
                m.honest_pdr());
  out << buf;
  out << "bytes delivered: " << m.bytes_delivered << "\n";
  out << "drop reasons:";
  for (const auto& [reason, n] : m.drop_reasons) out << " " << reason << "=" << n;
  out << "\n";
  out << "safety messages: sent=" << m.safety_sent << " forwarded=" << m.safety_forwarded
      << " rejected=" << m.safety_rejected << " dropped=" << m.safety_dropped
      << " payload_mismatches=" << m.payload_mismatches << "\n";
  out << "malicious:";
  for (NodeId id : result.malicious) out << " " << node_name(id, result.config.n_vehicles, n_rsus);
  out << "\n";
  out << "evictions:";
  for (const auto& [id, time] : m.eviction_times) {
    std::snprintf(buf, sizeof buf, " %s@%.3f", node_name(id, result.config.n_vehicles, n_rsus).c_str(), time);
    out << buf;
  }
  out << "\n";
  out << "final trust:\n";
  for (const auto& [id, trust] : result.final_trust) {
    std::snprintf(buf, sizeof buf, "  %s %.6f\n", node_name(id, result.config.n_vehicles, n_rsus).c_str(), trust);
    out << buf;
  }
  return out.str();
}

} // namespace vtsim
