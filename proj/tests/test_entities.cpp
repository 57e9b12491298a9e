#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vtsim/entities.hpp"

using namespace vtsim;
using namespace vtsim::entities;

namespace {

bool throws_kind(auto&& fn, EntityError::Kind kind) {
  try {
    fn();
  } catch (const EntityError& e) {
    return e.kind() == kind;
  }
  return false;
}

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

// Directory with vehicles 0..2, RSU 10 at the origin and the ATA 20.
struct World {
  const ec::CurveParams& params = ec::desk();
  Rng rng{5, "register"};
  TaDirectory directory{params};
  std::vector<ObuAgent> obus;
  std::optional<RsuAgent> rsu;

  explicit World(double detect_p = 0.9, double fp_p = 0.0) {
    for (NodeId v = 0; v < 3; ++v) {
      const auto& rec = directory.register_entity(v, Role::OBU, rng);
      obus.emplace_back(v, rec.keypair, params, 16);
    }
    directory.register_entity(10, Role::RSU, rng);
    directory.register_entity(20, Role::ATA, rng);
    rsu.emplace(10, Vec2{0, 0}, 250.0, directory, PlausibilityOracle(detect_p, fp_p, Rng(1, "oracle")),
                Rng(1, "challenge"), 16);
  }

  AuthOutcome auth(NodeId v, Vec2 where = {10, 10}) {
    const ObuAgent& obu = obus[v];
    AuthOutcome out = rsu->authenticate(obu.keys().public_key, where,
                                        [&](const ec::CurvePoint& c) { return obu.respond(c); }, 1.0);
    if (out.session.state == SessionState::Verified) obus[v].mark_verified(10);
    return out;
  }

  SealedMessage send(NodeId v, std::string_view text, bool bogus = false) {
    return obus[v].send_safety(10, rsu->keys().public_key, bytes_of(text), 2.0, bogus, rng);
  }
};

} // namespace

TEST_CASE("registration") {
  TaDirectory dir(ec::desk());
  Rng rng(1);
  dir.register_entity(1, Role::OBU, rng);
  CHECK(throws_kind([&] { dir.register_entity(1, Role::OBU, rng); }, EntityError::Kind::DuplicateRegistration));

  TaDirectory full(ec::desk());
  for (NodeId v = 0; v < 31; ++v) full.register_entity(v, Role::OBU, rng);
  full.register_entity(31, Role::RSU, rng);
  full.register_entity(32, Role::RSU, rng);
  full.register_entity(33, Role::ATA, rng);
  CHECK(full.size() == 34);
  CHECK(full.is_registered(31, Role::RSU));
  CHECK_FALSE(full.is_registered(31, Role::OBU));
  for (const auto& [id, rec] : full.records()) {
    CHECK(ec::is_on_curve(rec.keypair.public_key, ec::desk()));
    CHECK(full.find_by_public(rec.keypair.public_key) == id);
  }
}

TEST_CASE("authentication") {
  World w;
  const AuthOutcome ok = w.auth(0);
  CHECK(ok.session.state == SessionState::Verified);
  CHECK_FALSE(ok.failure_event.has_value());
  CHECK(w.rsu->session(0)->state == SessionState::Verified);

  const auto wrong = crypto::keypair_from_private(12345, w.params);
  const AuthOutcome bad = w.rsu->authenticate(
      w.obus[1].keys().public_key, {0, 0}, [&](const ec::CurvePoint& c) { return crypto::auth_respond(wrong.private_key, c, w.params); },
      1.0);
  CHECK(bad.session.state == SessionState::Failed);
  REQUIRE(bad.failure_event.has_value());
  CHECK(bad.failure_event->kind == trust::EventKind::AuthFailure);
  CHECK(bad.failure_event->subject == 1);
  CHECK(bad.failure_event->reporter == 10);

  CHECK(throws_kind([&] { w.rsu->authenticate(wrong.public_key, {0, 0}, [](const ec::CurvePoint& c) { return c; }, 1.0); },
                    EntityError::Kind::UnknownVehicle));
  CHECK(throws_kind([&] { w.auth(2, {300, 400}); }, EntityError::Kind::OutOfRange));
}

TEST_CASE("safety message ingest") {
  World w;
  CHECK(throws_kind([&] { w.send(0, "x"); }, EntityError::Kind::NoSession));
  w.auth(0);
  w.auth(1);

  const SealedMessage m = w.send(0, "brake");
  const IngestResult r = w.rsu->ingest(m, 2.0);
  CHECK(r.status == IngestResult::Status::Forwarded);
  REQUIRE(r.message.has_value());
  CHECK(r.message->payload == bytes_of("brake"));
  CHECK(r.event->kind == trust::EventKind::ValidMessage);

  const SealedMessage empty = w.send(0, "");
  CHECK(empty.blocks.size() == 1);
  CHECK(w.rsu->ingest(empty, 2.0).message->payload.empty());

  const SealedMessage a = w.send(0, "same"), b = w.send(0, "same");
  CHECK(a.blocks[0].c1 != b.blocks[0].c1);
  CHECK(b.seq == a.seq + 1);

  SealedMessage cut = w.send(1, "a longer safety message");
  cut.blocks.pop_back();
  const IngestResult garbage = w.rsu->ingest(cut, 2.0);
  CHECK(garbage.status == IngestResult::Status::Rejected);
  CHECK(garbage.event->kind == trust::EventKind::InvalidMessage);

  SealedMessage forged = w.send(1, "x");
  forged.origin = 2;
  CHECK(w.rsu->ingest(forged, 2.0).reason == "no_session");

  w.rsu->on_eviction({0, 3.0, 0.1});
  CHECK(w.rsu->ingest(w.send(0, "late"), 3.0).reason == "evicted");
  CHECK(w.auth(0).session.state == SessionState::Failed);
}

TEST_CASE("plausibility detection frequency") {
  World w(0.9, 0.0);
  w.auth(0);
  const int trials = 10000;
  int flagged = 0, false_flags = 0;
  const SealedMessage bogus = w.send(0, "ice", true);
  const SealedMessage honest = w.send(0, "ice", false);
  for (int i = 0; i < trials; ++i) {
    if (w.rsu->ingest(bogus, 2.0).event->kind == trust::EventKind::InvalidMessage) ++flagged;
    if (w.rsu->ingest(honest, 2.0).event->kind == trust::EventKind::InvalidMessage) ++false_flags;
  }
  const double sigma = std::sqrt(trials * 0.9 * 0.1);
  CHECK(std::abs(flagged - 0.9 * trials) <= 3 * sigma);
  CHECK(false_flags == 0);
}

TEST_CASE("drop observation needs coverage") {
  World w;
  CHECK(w.rsu->observe_drop(1, {100, 0}, 4.0)->kind == trust::EventKind::PacketDropObserved);
  CHECK_FALSE(w.rsu->observe_drop(1, {300, 0}, 4.0).has_value());
}

TEST_CASE("ATA trust loop") {
  World w;
  AtaAgent ata(20, w.directory, trust::TrustConfig{}, true);
  ata.init_records(0.0);
  CHECK(ata.store().records().size() == 3);

  double last = 0.5;
  for (int i = 0; i < 20; ++i) {
    const AtaOutcome o = ata.process({0, trust::EventKind::ValidMessage, 10, 1.0 + i});
    CHECK(o.record.trust >= last);
    CHECK_FALSE(o.eviction.has_value());
    CHECK(o.step == static_cast<std::uint64_t>(i + 1));
    last = o.record.trust;
  }
  CHECK(last == doctest::Approx(1.0));

  // bound from the penalty alone is ceil((0.5 - 0.3) / (0.6 * 0.2)) = 2 events;
  // the history term makes the first one sufficient
  int events = 0;
  std::optional<EvictionNotice> notice;
  while (!notice && events < 2) {
    ++events;
    notice = ata.process({1, trust::EventKind::InvalidMessage, 10, 30.0}).eviction;
  }
  REQUIRE(notice.has_value());
  CHECK(events == 1);
  CHECK(notice->trust == doctest::Approx(0.24));
  CHECK(ata.is_evicted(1));
  CHECK_FALSE(ata.process({1, trust::EventKind::InvalidMessage, 10, 31.0}).eviction.has_value());

  CHECK(throws_kind([&] { ata.process({99, trust::EventKind::ValidMessage, 10, 1.0}); },
                    EntityError::Kind::UnregisteredVehicle));
  CHECK(throws_kind([&] { ata.process({0, trust::EventKind::ValidMessage, 0, 1.0}); },
                    EntityError::Kind::UnregisteredReporter));

  AtaAgent passive(20, w.directory, trust::TrustConfig{}, false);
  passive.init_records(0.0);
  CHECK_FALSE(passive.process({1, trust::EventKind::InvalidMessage, 10, 1.0}).eviction.has_value());
  CHECK_FALSE(passive.is_evicted(1));
}
