#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "vtsim/crypto.hpp"
#include "vtsim/mobility.hpp"
#include "vtsim/trust.hpp"
#include "vtsim/types.hpp"

namespace vtsim::entities {

using crypto::CipherPair;
using crypto::KeyPair;
using ec::CurveParams;
using ec::CurvePoint;

class EntityError : public std::runtime_error {
public:
  enum class Kind {
    DuplicateRegistration,
    UnknownVehicle,
    OutOfRange,
    NoSession,
    UnregisteredVehicle,
    UnregisteredReporter,
  };

  EntityError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

enum class Role { OBU, RSU, ATA };
const char* to_string(Role role) noexcept;

struct RegistrationRecord {
  NodeId entity_id = 0;
  Role role = Role::OBU;
  KeyPair keypair;
  double registered_at = 0.0;
};

/// The trusted authority's off-line directory. Issues every key pair.
class TaDirectory {
public:
  explicit TaDirectory(const CurveParams& params) : params_(&params) {}

  const RegistrationRecord& register_entity(NodeId id, Role role, Rng& rng, double now = 0.0);

  const RegistrationRecord* find(NodeId id) const;
  std::optional<NodeId> find_by_public(const CurvePoint& public_key) const;
  bool is_registered(NodeId id, Role role) const;
  std::size_t size() const noexcept { return records_.size(); }
  const std::map<NodeId, RegistrationRecord>& records() const noexcept { return records_; }
  const CurveParams& params() const noexcept { return *params_; }

private:
  const CurveParams* params_;
  std::map<NodeId, RegistrationRecord> records_;
};

struct SafetyMessage {
  NodeId origin = 0;
  std::uint64_t seq = 0;
  std::vector<std::uint8_t> payload;
  double timestamp = 0.0;
  bool bogus_flag = false; // ground truth; only the plausibility oracle may read it
};

/// What travels on the OBU -> RSU leg: clear header plus encrypted payload.
struct SealedMessage {
  NodeId origin = 0;
  std::uint64_t seq = 0;
  double timestamp = 0.0;
  std::vector<CipherPair> blocks;
  bool bogus_flag = false;
};

enum class SessionState { Challenged, Verified, Failed };
const char* to_string(SessionState state) noexcept;

struct AuthSession {
  NodeId rsu_id = 0;
  NodeId vehicle_id = 0;
  ec::Scalar challenge = 0;
  SessionState state = SessionState::Challenged;
  double started_at = 0.0;
};

struct AuthOutcome {
  AuthSession session;
  CurvePoint challenge_point = CurvePoint::identity();
  std::optional<trust::TrustEvent> failure_event; // AuthFailure for the ATA
};

/// Vehicle side of the handshake: maps a challenge point to a response.
using Responder = std::function<CurvePoint(const CurvePoint&)>;

/// Simulated content check. Flags a ground-truth bogus message with
/// probability detect_p and an honest one with probability fp_p.
class PlausibilityOracle {
public:
  PlausibilityOracle(double detect_p, double fp_p, Rng rng) : detect_p_(detect_p), fp_p_(fp_p), rng_(rng) {}
  bool judge_invalid(const SealedMessage& msg);

private:
  double detect_p_;
  double fp_p_;
  Rng rng_;
};

struct IngestResult {
  enum class Status { Forwarded, Rejected, Dropped };
  Status status = Status::Dropped;
  std::optional<SafetyMessage> message; // set when Forwarded
  std::optional<trust::TrustEvent> event;
  std::string reason;                   // for Rejected / Dropped
};

struct EvictionNotice {
  NodeId vehicle = 0;
  double time = 0.0;
  double trust = 0.0;
};

/// Road-side unit: authenticates vehicles, decrypts and screens their safety
/// messages and forwards them to the ATA. Holds no trust arithmetic; only the
/// eviction list the ATA publishes.
class RsuAgent {
public:
  RsuAgent(NodeId id, Vec2 position, double radio_range, const TaDirectory& directory,
           PlausibilityOracle oracle, Rng challenge_rng, unsigned kappa);

  NodeId id() const noexcept { return id_; }
  const Vec2& position() const noexcept { return position_; }
  const KeyPair& keys() const;

  AuthOutcome authenticate(const CurvePoint& vehicle_public, const Vec2& vehicle_position,
                           const Responder& responder, double now);

  IngestResult ingest(const SealedMessage& msg, double now);

  /// Packet-drop observation for the ATA, or nullopt if the relay is out of
  /// this RSU's coverage.
  std::optional<trust::TrustEvent> observe_drop(NodeId relay, const Vec2& relay_position, double now) const;

  void on_eviction(const EvictionNotice& notice);
  bool is_evicted(NodeId vehicle) const { return evicted_.contains(vehicle); }
  const AuthSession* session(NodeId vehicle) const;

private:
  NodeId id_;
  Vec2 position_;
  double radio_range_;
  const TaDirectory* directory_;
  PlausibilityOracle oracle_;
  Rng challenge_rng_;
  unsigned kappa_;
  std::map<NodeId, AuthSession> sessions_;
  std::set<NodeId> evicted_;
};

/// On-board unit of one vehicle.
class ObuAgent {
public:
  ObuAgent(NodeId id, KeyPair keys, const CurveParams& params, unsigned kappa);

  NodeId id() const noexcept { return id_; }
  const KeyPair& keys() const noexcept { return keys_; }

  CurvePoint respond(const CurvePoint& challenge_point) const;
  void mark_verified(NodeId rsu) { verified_.insert(rsu); }
  void drop_session(NodeId rsu) { verified_.erase(rsu); }
  bool has_session(NodeId rsu) const { return verified_.contains(rsu); }

  /// Encrypts payload to the RSU under a Verified session.
  SealedMessage send_safety(NodeId rsu, const CurvePoint& rsu_public, std::span<const std::uint8_t> payload,
                            double now, bool bogus, Rng& rng);

  std::uint64_t last_seq() const noexcept { return seq_; }

private:
  NodeId id_;
  KeyPair keys_;
  const CurveParams* params_;
  unsigned kappa_;
  std::uint64_t seq_ = 0;
  std::set<NodeId> verified_;
};

struct AtaOutcome {
  std::uint64_t step = 0; // ATA step id; every trust change cites one
  trust::TrustRecord record;
  std::optional<EvictionNotice> eviction;
};

/// Agent of the trusted authority. The only writer of trust values.
class AtaAgent {
public:
  AtaAgent(NodeId id, const TaDirectory& directory, trust::TrustConfig config, bool eviction_enabled);

  NodeId id() const noexcept { return id_; }

  /// Creates a trust record for every registered vehicle.
  void init_records(double now);

  AtaOutcome process(const trust::TrustEvent& event);
  AtaOutcome recommend(NodeId subject, NodeId recommender, double value, double now);

  const trust::TrustStore& store() const noexcept { return store_; }
  bool is_evicted(NodeId vehicle) const { return evicted_.contains(vehicle); }
  const std::map<NodeId, double>& eviction_times() const noexcept { return eviction_times_; }

private:
  AtaOutcome finish(const trust::TrustRecord& record, double now);

  NodeId id_;
  const TaDirectory* directory_;
  trust::TrustStore store_;
  bool eviction_enabled_;
  std::uint64_t step_ = 0;
  std::set<NodeId> evicted_;
  std::map<NodeId, double> eviction_times_;
};

} // namespace vtsim::entities
