#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "vtsim/types.hpp"

namespace vtsim::dsdv {

inline constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

struct RouteEntry {
  NodeId next_hop = 0;
  std::uint32_t metric = kInfinity; // hop count
  std::uint64_t seq_number = 0;     // even: issued by the destination; odd: broken link
  SimTime install_time = 0;

  bool valid() const noexcept { return metric != kInfinity; }
  bool operator==(const RouteEntry&) const = default;
};

struct AdvertisedRoute {
  NodeId destination = 0;
  std::uint32_t metric = kInfinity;
  std::uint64_t seq_number = 0;
};

/// Full-table dump broadcast by one node.
struct Advertisement {
  NodeId origin = 0;
  std::vector<AdvertisedRoute> routes;
};

/// Keyed by destination. Ordered so dumps are deterministic.
using RouteTable = std::map<NodeId, RouteEntry>;

/// Destination-sequenced distance-vector agent for one node. Only periodic
/// full dumps; no incremental updates and no settling-time damping.
class DsdvAgent {
public:
  explicit DsdvAgent(NodeId self);

  NodeId self() const noexcept { return self_; }
  const RouteTable& table() const noexcept { return table_; }
  std::uint64_t own_seq() const noexcept { return table_.at(self_).seq_number; }

  /// Bumps the own sequence number by 2 and returns the full table dump.
  Advertisement periodic_update(SimTime now);

  /// Merges a neighbour's dump. An entry is replaced only by a newer sequence
  /// number, or the same sequence number with a strictly lower metric.
  /// Returns true when any entry changed.
  bool handle_update(const Advertisement& adv, SimTime now);

  /// Marks every route whose next hop is `neighbor` as broken: metric becomes
  /// infinite and the sequence number is bumped to the next odd value.
  void break_link(NodeId neighbor, SimTime now);

  /// Breaks links to neighbours not heard from since now - timeout.
  void expire_links(SimTime now, SimTime timeout);

  /// Removes a node from routing for good (eviction): its routes are dropped,
  /// and later dumps from it or naming it are ignored.
  void forget(NodeId node, SimTime now);

  std::optional<NodeId> next_hop(NodeId destination) const;
  std::optional<std::uint32_t> metric(NodeId destination) const;

private:
  NodeId self_;
  RouteTable table_;
  std::map<NodeId, SimTime> last_heard_;
  std::set<NodeId> blocked_;
};

} // namespace vtsim::dsdv
