#include "vtsim/trust.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vtsim::trust {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require(bool ok, const char* what) {
  if (!ok) throw TrustError(TrustError::Kind::InvalidConfig, what);
}

} // namespace

void TrustConfig::validate() const {
  require(initial_trust >= 0.0 && initial_trust <= 1.0, "trust_t0 must lie in [0, 1]");
  require(reward > 0.0 && reward <= 1.0, "trust_reward must lie in (0, 1]");
  require(penalty > 0.0 && penalty <= 1.0, "trust_penalty must lie in (0, 1]");
  require(threshold > 0.0 && threshold < 1.0, "trust_threshold must lie in (0, 1)");
  require(w_direct >= 0.0 && w_rec >= 0.0 && w_hist >= 0.0, "trust weights must be non-negative");
  require(std::abs(w_direct + w_rec + w_hist - 1.0) < 1e-9, "trust weights must sum to 1");
  require(history_window > 0, "trust_history must be positive");
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
  case EventKind::ValidMessage: return "ValidMessage";
  case EventKind::InvalidMessage: return "InvalidMessage";
  case EventKind::PacketDropObserved: return "PacketDropObserved";
  case EventKind::AuthFailure: return "AuthFailure";
  }
  return "?";
}

double compute_trust(double direct, std::span<const WeightedRecommendation> recommendations,
                     const std::deque<bool>& history, const TrustConfig& config) {
  double weight_sum = 0.0, weighted = 0.0;
  for (const auto& r : recommendations) {
    weight_sum += r.neighbor_trust;
    weighted += r.neighbor_trust * r.reported_value;
  }
  const double rec = weight_sum > 0.0 ? weighted / weight_sum : direct;

  double hist = direct;
  if (!history.empty()) {
    const auto valid = std::count(history.begin(), history.end(), true);
    hist = static_cast<double>(valid) / static_cast<double>(history.size());
  }
  return clamp01(config.w_direct * direct + config.w_rec * rec + config.w_hist * hist);
}

TrustRecord init_trust(NodeId vehicle_id, const TrustConfig& config, double now) {
  TrustRecord rec;
  rec.vehicle_id = vehicle_id;
  rec.trust = config.initial_trust;
  rec.direct = config.initial_trust;
  rec.last_update = now;
  return rec;
}

TrustRecord apply_event(const TrustRecord& record, const TrustEvent& event, const TrustConfig& config,
                        std::span<const WeightedRecommendation> recommendations) {
  if (event.subject != record.vehicle_id) {
    throw TrustError(TrustError::Kind::SubjectMismatch,
                     "event for vehicle " + std::to_string(event.subject) + " applied to record of " +
                         std::to_string(record.vehicle_id));
  }
  TrustRecord out = record;
  const bool valid = !is_penalty(event.kind);
  if (valid) {
    out.direct = clamp01(out.direct + config.reward);
    ++out.reward_points;
    ++out.valid_events;
  } else {
    out.direct = clamp01(out.direct - config.penalty);
    ++out.invalid_events;
  }
  ++out.interactions;
  out.history.push_back(valid);
  while (out.history.size() > config.history_window) out.history.pop_front();
  out.trust = compute_trust(out.direct, recommendations, out.history, config);
  out.last_update = event.time;
  return out;
}

bool is_trusted(const TrustRecord& record, const TrustConfig& config) noexcept {
  return record.trust >= config.threshold;
}

TrustStore::TrustStore(TrustConfig config) : config_(config) { config_.validate(); }

void TrustStore::register_vehicle(NodeId id) { registered_.insert(id); }

const TrustRecord& TrustStore::init(NodeId id, double now) {
  if (!registered_.contains(id)) {
    throw TrustError(TrustError::Kind::UnregisteredVehicle, "vehicle " + std::to_string(id) + " is not registered");
  }
  if (records_.contains(id)) {
    throw TrustError(TrustError::Kind::DuplicateRecord, "vehicle " + std::to_string(id) + " already has a record");
  }
  return records_.emplace(id, init_trust(id, config_, now)).first->second;
}

TrustRecord& TrustStore::mutable_record(NodeId id) {
  const auto it = records_.find(id);
  if (it == records_.end()) {
    throw TrustError(TrustError::Kind::UnregisteredVehicle, "no trust record for vehicle " + std::to_string(id));
  }
  return it->second;
}

const TrustRecord& TrustStore::record(NodeId id) const {
  const auto it = records_.find(id);
  if (it == records_.end()) {
    throw TrustError(TrustError::Kind::UnregisteredVehicle, "no trust record for vehicle " + std::to_string(id));
  }
  return it->second;
}

std::vector<WeightedRecommendation> TrustStore::weigh(const TrustRecord& record) const {
  std::vector<WeightedRecommendation> out;
  out.reserve(record.recommendations.size());
  for (const Recommendation& r : record.recommendations) {
    const auto it = records_.find(r.recommender);
    const double weight = it != records_.end() ? it->second.trust : config_.initial_trust;
    out.push_back({weight, r.value});
  }
  return out;
}

const TrustRecord& TrustStore::apply(const TrustEvent& event) {
  TrustRecord& rec = mutable_record(event.subject);
  const auto weighted = weigh(rec);
  rec = apply_event(rec, event, config_, weighted);
  return rec;
}

const TrustRecord& TrustStore::recommend(NodeId subject, const Recommendation& recommendation, double now) {
  TrustRecord& rec = mutable_record(subject);
  rec.recommendations.push_back({recommendation.recommender, clamp01(recommendation.value)});
  while (rec.recommendations.size() > config_.history_window) rec.recommendations.pop_front();
  const auto weighted = weigh(rec);
  rec.trust = compute_trust(rec.direct, weighted, rec.history, config_);
  rec.last_update = now;
  return rec;
}

} // namespace vtsim::trust
