#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/graphs.hpp"
#include "vtsim/dsdv.hpp"
#include "vtsim/mobility.hpp"

using namespace vtsim;
using namespace vtsim::dsdv;

TEST_CASE("radio range") {
  CHECK(radio_in_range({5, 5}, {5, 5}, 250));
  CHECK(radio_in_range({0, 0}, {250, 0}, 250));
  CHECK(radio_in_range({0, 0}, {150, 200}, 250));
  CHECK_FALSE(radio_in_range({0, 0}, {300, 400}, 250));
  CHECK(distance({0, 0}, {300, 400}) == doctest::Approx(500));
}

TEST_CASE("random waypoint") {
  const Area area{1000, 1000};
  const SpeedRange speeds{5, 20};
  Rng rng(17);
  for (int v = 0; v < 20; ++v) {
    MobilityState s = random_start(area, speeds, rng);
    for (int step = 0; step < 3000; ++step) {
      const MobilityState next = step_mobility(s, 0.1, area, speeds, rng);
      CHECK(distance(s.position, next.position) <= speeds.max * 0.1 + 1e-9);
      CHECK(next.position.x >= 0.0);
      CHECK(next.position.x <= 1000.0);
      CHECK(next.position.y >= 0.0);
      CHECK(next.position.y <= 1000.0);
      CHECK(next.speed >= speeds.min);
      CHECK(next.speed <= speeds.max);
      s = next;
    }
  }

  const SpeedRange parked{0, 0};
  MobilityState still = random_start(area, parked, rng);
  for (int step = 0; step < 100; ++step) {
    const MobilityState next = step_mobility(still, 0.1, area, parked, rng);
    CHECK(next.position == still.position);
    still = next;
  }
}

TEST_CASE("isolated node") {
  DsdvAgent a(0);
  const Advertisement adv = a.periodic_update(kMicrosPerSecond);
  CHECK(a.own_seq() == 2);
  REQUIRE(adv.routes.size() == 1);
  CHECK(adv.routes[0].destination == 0);
  CHECK(adv.routes[0].metric == 0);
  CHECK(a.periodic_update(2 * kMicrosPerSecond).routes[0].seq_number == 4);
  CHECK_FALSE(a.next_hop(1).has_value());
}

TEST_CASE("two nodes, one exchange") {
  const testsupport::Adjacency adj{{1}, {0}};
  const auto agents = testsupport::converge(adj, 1);
  CHECK(agents[0].next_hop(1) == 1U);
  CHECK(agents[0].metric(1) == 1U);
  CHECK(agents[1].next_hop(0) == 0U);
  CHECK(agents[1].metric(0) == 1U);
}

TEST_CASE("five node line") {
  const testsupport::Adjacency adj{{1}, {0, 2}, {1, 3}, {2, 4}, {3}};
  const auto agents = testsupport::converge(adj, 4);
  for (NodeId s = 0; s < 5; ++s)
    for (NodeId d = 0; d < 5; ++d) {
      if (s == d) continue;
      CHECK(agents[s].metric(d) == static_cast<std::uint32_t>(s > d ? s - d : d - s));
      CHECK(agents[s].next_hop(d) == (d > s ? s + 1 : s - 1));
    }
  const auto early = testsupport::converge(adj, 2);
  CHECK_FALSE(early[0].metric(4).has_value());
}

TEST_CASE("update rules") {
  DsdvAgent a(0);
  CHECK(a.handle_update({1, {{1, 0, 4}, {2, 1, 10}}}, 1));
  CHECK(a.metric(2) == 2U);
  CHECK(a.next_hop(2) == 1U);

  // stale sequence number: ignored
  CHECK_FALSE(a.handle_update({3, {{2, 0, 8}}}, 2));
  CHECK(a.next_hop(2) == 1U);

  // same sequence, same metric via another neighbour: incumbent kept
  CHECK_FALSE(a.handle_update({4, {{2, 1, 10}}}, 3));
  CHECK(a.next_hop(2) == 1U);

  // same sequence, strictly better metric: replaced
  CHECK(a.handle_update({2, {{2, 0, 10}}}, 4));
  CHECK(a.next_hop(2) == 2U);
  CHECK(a.metric(2) == 1U);

  // newer sequence wins even with a worse metric
  CHECK(a.handle_update({1, {{2, 3, 12}}}, 5));
  CHECK(a.metric(2) == 4U);

  // own entry is never overwritten
  a.handle_update({1, {{0, 0, 1000}}}, 6);
  CHECK(a.metric(0) == 0U);
}

TEST_CASE("broken link and eviction") {
  const testsupport::Adjacency adj{{1}, {0, 2}, {1}};
  auto agents = testsupport::converge(adj, 3);
  REQUIRE(agents[0].metric(2) == 2U);
  agents[0].break_link(1, 10 * kMicrosPerSecond);
  CHECK_FALSE(agents[0].next_hop(1).has_value());
  CHECK_FALSE(agents[0].next_hop(2).has_value());
  CHECK(agents[0].table().at(2).seq_number % 2 == 1);

  // a fresh dump from the destination restores the route
  const Advertisement from1 = agents[1].periodic_update(11 * kMicrosPerSecond);
  agents[0].handle_update(from1, 11 * kMicrosPerSecond);
  CHECK(agents[0].metric(1) == 1U);

  agents[0].forget(1, 12 * kMicrosPerSecond);
  CHECK_FALSE(agents[0].next_hop(1).has_value());
  agents[0].handle_update(agents[1].periodic_update(13 * kMicrosPerSecond), 13 * kMicrosPerSecond);
  CHECK_FALSE(agents[0].next_hop(1).has_value());
  CHECK_FALSE(agents[0].next_hop(2).has_value());
}

TEST_CASE("link expiry") {
  const testsupport::Adjacency adj{{1}, {0}};
  auto agents = testsupport::converge(adj, 1);
  agents[0].expire_links(2 * kMicrosPerSecond, 3 * kMicrosPerSecond);
  CHECK(agents[0].next_hop(1).has_value());
  agents[0].expire_links(10 * kMicrosPerSecond, 3 * kMicrosPerSecond);
  CHECK_FALSE(agents[0].next_hop(1).has_value());
}

TEST_CASE("converged tables match shortest paths on random graphs") {
  Rng rng(99, "graphs");
  for (int g = 0; g < 30; ++g) {
    const std::size_t n = 2 + rng.below(30);
    const auto adj = testsupport::random_topology(rng, n, 1000.0, 250.0);
    const auto agents = testsupport::converge(adj, n);
    CHECK(testsupport::route_mismatches(adj, agents) == 0);
  }
}
