#include "vtsim/entities.hpp"

namespace vtsim::entities {

using K = EntityError::Kind;

const char* to_string(Role role) noexcept {
  switch (role) {
  case Role::OBU: return "OBU";
  case Role::RSU: return "RSU";
  case Role::ATA: return "ATA";
  }
  return "?";
}

const char* to_string(SessionState state) noexcept {
  switch (state) {
  case SessionState::Challenged: return "Challenged";
  case SessionState::Verified: return "Verified";
  case SessionState::Failed: return "Failed";
  }
  return "?";
}

const RegistrationRecord& TaDirectory::register_entity(NodeId id, Role role, Rng& rng, double now) {
  if (records_.contains(id)) {
    throw EntityError(K::DuplicateRegistration, "entity " + std::to_string(id) + " is already registered");
  }
  RegistrationRecord rec{id, role, crypto::keygen(*params_, rng), now};
  return records_.emplace(id, rec).first->second;
}

const RegistrationRecord* TaDirectory::find(NodeId id) const {
  const auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second;
}

std::optional<NodeId> TaDirectory::find_by_public(const CurvePoint& public_key) const {
  for (const auto& [id, rec] : records_) {
    if (rec.keypair.public_key == public_key) return id;
  }
  return std::nullopt;
}

bool TaDirectory::is_registered(NodeId id, Role role) const {
  const RegistrationRecord* rec = find(id);
  return rec != nullptr && rec->role == role;
}

bool PlausibilityOracle::judge_invalid(const SealedMessage& msg) {
  return rng_.bernoulli(msg.bogus_flag ? detect_p_ : fp_p_);
}

RsuAgent::RsuAgent(NodeId id, Vec2 position, double radio_range, const TaDirectory& directory,
                   PlausibilityOracle oracle, Rng challenge_rng, unsigned kappa)
    : id_(id), position_(position), radio_range_(radio_range), directory_(&directory),
      oracle_(std::move(oracle)), challenge_rng_(challenge_rng), kappa_(kappa) {}

const KeyPair& RsuAgent::keys() const {
  const RegistrationRecord* rec = directory_->find(id_);
  if (rec == nullptr) throw EntityError(K::UnregisteredReporter, "RSU " + std::to_string(id_) + " has no keys");
  return rec->keypair;
}

AuthOutcome RsuAgent::authenticate(const CurvePoint& vehicle_public, const Vec2& vehicle_position,
                                   const Responder& responder, double now) {
  const auto vehicle = directory_->find_by_public(vehicle_public);
  if (!vehicle || directory_->find(*vehicle)->role != Role::OBU) {
    throw EntityError(K::UnknownVehicle, "public key " + vehicle_public.to_string() + " is not in the TA directory");
  }
  if (!radio_in_range(position_, vehicle_position, radio_range_)) {
    throw EntityError(K::OutOfRange, "vehicle " + std::to_string(*vehicle) + " is out of range");
  }

  const CurveParams& params = directory_->params();
  const crypto::Challenge challenge = crypto::auth_challenge(params, challenge_rng_);
  AuthOutcome out;
  out.challenge_point = challenge.point;
  out.session = AuthSession{id_, *vehicle, challenge.scalar, SessionState::Challenged, now};

  if (evicted_.contains(*vehicle)) {
    out.session.state = SessionState::Failed;
  } else {
    bool ok = false;
    try {
      ok = crypto::auth_verify(responder(challenge.point), challenge.scalar, vehicle_public, params);
    } catch (const crypto::CryptoError&) {
      ok = false;
    }
    out.session.state = ok ? SessionState::Verified : SessionState::Failed;
    if (!ok) {
      out.failure_event = trust::TrustEvent{*vehicle, trust::EventKind::AuthFailure, id_, now};
    }
  }
  sessions_[*vehicle] = out.session;
  return out;
}

IngestResult RsuAgent::ingest(const SealedMessage& msg, double now) {
  IngestResult out;
  if (evicted_.contains(msg.origin)) {
    out.reason = "evicted";
    return out;
  }
  const auto it = sessions_.find(msg.origin);
  if (it == sessions_.end() || it->second.state != SessionState::Verified) {
    out.reason = "no_session";
    return out;
  }

  std::vector<std::uint8_t> payload;
  try {
    payload = crypto::decrypt_bytes(msg.blocks, keys().private_key, directory_->params(), kappa_);
  } catch (const crypto::CryptoError& e) {
    out.status = IngestResult::Status::Rejected;
    out.reason = e.what();
    out.event = trust::TrustEvent{msg.origin, trust::EventKind::InvalidMessage, id_, now};
    return out;
  }

  const bool invalid = oracle_.judge_invalid(msg);
  out.status = IngestResult::Status::Forwarded;
  out.message = SafetyMessage{msg.origin, msg.seq, std::move(payload), msg.timestamp, msg.bogus_flag};
  out.event = trust::TrustEvent{msg.origin, invalid ? trust::EventKind::InvalidMessage : trust::EventKind::ValidMessage,
                                id_, now};
  return out;
}

std::optional<trust::TrustEvent> RsuAgent::observe_drop(NodeId relay, const Vec2& relay_position, double now) const {
  if (!radio_in_range(position_, relay_position, radio_range_)) return std::nullopt;
  return trust::TrustEvent{relay, trust::EventKind::PacketDropObserved, id_, now};
}

void RsuAgent::on_eviction(const EvictionNotice& notice) {
  evicted_.insert(notice.vehicle);
  sessions_.erase(notice.vehicle);
}

const AuthSession* RsuAgent::session(NodeId vehicle) const {
  const auto it = sessions_.find(vehicle);
  return it == sessions_.end() ? nullptr : &it->second;
}

ObuAgent::ObuAgent(NodeId id, KeyPair keys, const CurveParams& params, unsigned kappa)
    : id_(id), keys_(keys), params_(&params), kappa_(kappa) {}

CurvePoint ObuAgent::respond(const CurvePoint& challenge_point) const {
  return crypto::auth_respond(keys_.private_key, challenge_point, *params_);
}

SealedMessage ObuAgent::send_safety(NodeId rsu, const CurvePoint& rsu_public, std::span<const std::uint8_t> payload,
                                    double now, bool bogus, Rng& rng) {
  if (!verified_.contains(rsu)) {
    throw EntityError(K::NoSession, "vehicle " + std::to_string(id_) + " has no session with RSU " + std::to_string(rsu));
  }
  SealedMessage msg;
  msg.origin = id_;
  msg.seq = ++seq_;
  msg.timestamp = now;
  msg.blocks = crypto::encrypt_bytes(payload, rsu_public, *params_, kappa_, rng);
  msg.bogus_flag = bogus;
  return msg;
}

AtaAgent::AtaAgent(NodeId id, const TaDirectory& directory, trust::TrustConfig config, bool eviction_enabled)
    : id_(id), directory_(&directory), store_(config), eviction_enabled_(eviction_enabled) {
  for (const auto& [vid, rec] : directory.records()) {
    if (rec.role == Role::OBU) store_.register_vehicle(vid);
  }
}

void AtaAgent::init_records(double now) {
  for (const auto& [vid, rec] : directory_->records()) {
    if (rec.role == Role::OBU && !store_.has_record(vid)) {
      store_.register_vehicle(vid);
      store_.init(vid, now);
    }
  }
}

AtaOutcome AtaAgent::finish(const trust::TrustRecord& record, double now) {
  AtaOutcome out;
  out.step = ++step_;
  out.record = record;
  if (eviction_enabled_ && !evicted_.contains(record.vehicle_id) && !trust::is_trusted(record, store_.config())) {
    evicted_.insert(record.vehicle_id);
    eviction_times_[record.vehicle_id] = now;
    out.eviction = EvictionNotice{record.vehicle_id, now, record.trust};
  }
  return out;
}

AtaOutcome AtaAgent::process(const trust::TrustEvent& event) {
  if (!directory_->is_registered(event.reporter, Role::RSU)) {
    throw EntityError(K::UnregisteredReporter, "reporter " + std::to_string(event.reporter) + " is not a registered RSU");
  }
  if (!directory_->is_registered(event.subject, Role::OBU) || !store_.has_record(event.subject)) {
    throw EntityError(K::UnregisteredVehicle, "vehicle " + std::to_string(event.subject) + " is not registered");
  }
  return finish(store_.apply(event), event.time);
}

AtaOutcome AtaAgent::recommend(NodeId subject, NodeId recommender, double value, double now) {
  if (!directory_->is_registered(subject, Role::OBU) || !store_.has_record(subject)) {
    throw EntityError(K::UnregisteredVehicle, "vehicle " + std::to_string(subject) + " is not registered");
  }
  if (!directory_->is_registered(recommender, Role::OBU)) {
    throw EntityError(K::UnregisteredVehicle, "recommender " + std::to_string(recommender) + " is not registered");
  }
  return finish(store_.recommend(subject, trust::Recommendation{recommender, value}, now), now);
}

} // namespace vtsim::entities
