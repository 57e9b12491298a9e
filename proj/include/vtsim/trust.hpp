#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vtsim/types.hpp"

namespace vtsim::trust {

class TrustError : public std::runtime_error {
public:
  enum class Kind { UnregisteredVehicle, DuplicateRecord, SubjectMismatch, InvalidConfig };

  TrustError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct TrustConfig {
  double initial_trust = 0.5;
  double reward = 0.05;
  double penalty = 0.2;
  double threshold = 0.3;
  double w_direct = 0.6;
  double w_rec = 0.2;
  double w_hist = 0.2;
  std::size_t history_window = 20;

  /// Throws TrustError(InvalidConfig) naming the offending field.
  void validate() const;
};

enum class EventKind { ValidMessage, InvalidMessage, PacketDropObserved, AuthFailure };

std::string_view to_string(EventKind kind) noexcept;
inline bool is_penalty(EventKind kind) noexcept { return kind != EventKind::ValidMessage; }

struct TrustEvent {
  NodeId subject = 0;
  EventKind kind = EventKind::ValidMessage;
  NodeId reporter = 0; // RSU that observed the event
  double time = 0.0;
};

struct Recommendation {
  NodeId recommender = 0;
  double value = 0.0; // in [0, 1]
  bool operator==(const Recommendation&) const = default;
};

/// A recommendation paired with the recommender's current trust.
struct WeightedRecommendation {
  double neighbor_trust = 0.0;
  double reported_value = 0.0;
};

struct TrustRecord {
  NodeId vehicle_id = 0;
  double trust = 0.0;
  double direct = 0.0;
  std::uint64_t reward_points = 0;
  std::uint64_t interactions = 0;
  std::uint64_t valid_events = 0;
  std::uint64_t invalid_events = 0;
  std::deque<bool> history;                    // true = valid, newest at back
  std::deque<Recommendation> recommendations;  // newest at back
  double last_update = 0.0;

  bool operator==(const TrustRecord&) const = default;
};

/// w_direct * direct + w_rec * (trust-weighted mean of recommendations, or
/// direct when none carry weight) + w_hist * (valid fraction of the window, or
/// direct when empty), clamped to [0, 1].
double compute_trust(double direct, std::span<const WeightedRecommendation> recommendations,
                     const std::deque<bool>& history, const TrustConfig& config);

TrustRecord init_trust(NodeId vehicle_id, const TrustConfig& config, double now = 0.0);

TrustRecord apply_event(const TrustRecord& record, const TrustEvent& event, const TrustConfig& config,
                        std::span<const WeightedRecommendation> recommendations = {});

/// Boundary inclusive: trust == threshold counts as trusted.
bool is_trusted(const TrustRecord& record, const TrustConfig& config) noexcept;

/// All trust records of one run. Only the ATA holds one of these.
class TrustStore {
public:
  explicit TrustStore(TrustConfig config);

  const TrustConfig& config() const noexcept { return config_; }

  /// Vehicles must be registered before init.
  void register_vehicle(NodeId id);
  bool is_registered(NodeId id) const { return registered_.contains(id); }

  const TrustRecord& init(NodeId id, double now);
  const TrustRecord& apply(const TrustEvent& event);
  const TrustRecord& recommend(NodeId subject, const Recommendation& rec, double now);

  const TrustRecord& record(NodeId id) const;
  bool has_record(NodeId id) const { return records_.contains(id); }
  const std::map<NodeId, TrustRecord>& records() const noexcept { return records_; }

private:
  TrustRecord& mutable_record(NodeId id);
  std::vector<WeightedRecommendation> weigh(const TrustRecord& record) const;

  TrustConfig config_;
  std::set<NodeId> registered_;
  std::map<NodeId, TrustRecord> records_;
};

} // namespace vtsim::trust
