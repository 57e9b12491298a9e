#include "vtsim/dsdv.hpp"

namespace vtsim::dsdv {

DsdvAgent::DsdvAgent(NodeId self) : self_(self) {
  table_[self_] = RouteEntry{self_, 0, 0, 0};
}

Advertisement DsdvAgent::periodic_update(SimTime now) {
  RouteEntry& own = table_[self_];
  own.seq_number += 2;
  own.install_time = now;

  Advertisement adv{self_, {}};
  adv.routes.reserve(table_.size());
  for (const auto& [dest, entry] : table_) {
    adv.routes.push_back({dest, entry.metric, entry.seq_number});
  }
  return adv;
}

bool DsdvAgent::handle_update(const Advertisement& adv, SimTime now) {
  if (adv.origin == self_ || blocked_.contains(adv.origin)) return false;
  last_heard_[adv.origin] = now;

  bool changed = false;
  for (const AdvertisedRoute& r : adv.routes) {
    if (r.destination == self_ || blocked_.contains(r.destination)) continue;
    const std::uint32_t metric = r.metric == kInfinity ? kInfinity : r.metric + 1;
    const auto it = table_.find(r.destination);
    if (it == table_.end()) {
      if (metric == kInfinity) continue;
      table_.emplace(r.destination, RouteEntry{adv.origin, metric, r.seq_number, now});
      changed = true;
      continue;
    }
    RouteEntry& cur = it->second;
    const bool newer = r.seq_number > cur.seq_number;
    const bool better = r.seq_number == cur.seq_number && metric < cur.metric;
    if (newer || better) {
      cur = RouteEntry{adv.origin, metric, r.seq_number, now};
      changed = true;
    }
  }
  return changed;
}

void DsdvAgent::break_link(NodeId neighbor, SimTime now) {
  for (auto& [dest, entry] : table_) {
    if (dest == self_ || entry.next_hop != neighbor || !entry.valid()) continue;
    entry.metric = kInfinity;
    entry.seq_number |= 1U; // next odd value
    entry.install_time = now;
  }
  last_heard_.erase(neighbor);
}

void DsdvAgent::expire_links(SimTime now, SimTime timeout) {
  std::vector<NodeId> stale;
  for (const auto& [neighbor, heard] : last_heard_) {
    if (now - heard > timeout) stale.push_back(neighbor);
  }
  for (NodeId n : stale) break_link(n, now);
}

void DsdvAgent::forget(NodeId node, SimTime now) {
  if (node == self_) return;
  break_link(node, now);
  table_.erase(node);
  blocked_.insert(node);
}

std::optional<NodeId> DsdvAgent::next_hop(NodeId destination) const {
  const auto it = table_.find(destination);
  if (it == table_.end() || !it->second.valid()) return std::nullopt;
  return it->second.next_hop;
}

std::optional<std::uint32_t> DsdvAgent::metric(NodeId destination) const {
  const auto it = table_.find(destination);
  if (it == table_.end() || !it->second.valid()) return std::nullopt;
  return it->second.metric;
}

} // namespace vtsim::dsdv
