// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <unistd.h>

#include "../support/graphs.hpp"
#include "vtsim/cli.hpp"
#include "vtsim/crypto.hpp"
#include "vtsim/simulator.hpp"

using namespace vtsim;
using namespace vtsim::ec;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CurvePoint repeated_add(std::uint64_t k, const CurvePoint& p, const CurveParams& c) {
  CurvePoint acc = CurvePoint::identity();
  for (std::uint64_t i = 0; i < k; ++i) acc = point_add(acc, p, c);
  return acc;
}

Verdict exhaustive_group_laws() {
  const auto t0 = Clock::now();
  const CurveParams& c = tiny23();
  const auto pts = enumerate_points(c.q, c.a, c.b).points;
  const CurvePoint O = CurvePoint::identity();
  std::uint64_t checks = 0, failures = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  try {
    for (const auto& p : pts) {
      expect(point_add(p, O, c) == p && point_add(O, p, c) == p);
      expect(point_add(p, point_negate(p, c), c).is_identity());
      for (const auto& r : pts) {
        const CurvePoint s = point_add(p, r, c);
        expect(std::binary_search(pts.begin(), pts.end(), s));
        expect(s == point_add(r, p, c));
        for (const auto& t : pts) expect(point_add(s, t, c) == point_add(p, point_add(r, t, c), c));
      }
    }
    for (const auto& p : pts)
      for (std::uint64_t k = 0; k <= c.order; ++k) expect(scalar_mul(k, p, c) == repeated_add(k, p, c));
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << pts.size() << " points, " << checks << " checks, " << failures << " failures, " << secs << " s";
  return {failures == 0 && pts.size() == c.order && secs < 10.0, d.str()};
}

Verdict elgamal_round_trip() {
  const auto t0 = Clock::now();
  std::uint64_t tiny_cases = 0, desk_cases = 0, failures = 0;
  try {
    const CurveParams& c = tiny23();
    for (Scalar priv = 1; priv < c.order; ++priv) {
      const CurvePoint pb = scalar_mul(priv, c.generator, c);
      for (const auto& pm : enumerate_points(c.q, c.a, c.b).points)
        for (Scalar k = 1; k < c.order; ++k) {
          ++tiny_cases;
          if (crypto::elgamal_decrypt(crypto::elgamal_encrypt(pm, pb, k, c), priv, c) != pm) ++failures;
        }
    }
    const CurveParams& d = desk();
    Rng rng(2024, "acceptance-elgamal");
    for (int i = 0; i < 10000; ++i) {
      const crypto::KeyPair kp = crypto::keygen(d, rng);
      const CurvePoint pm = scalar_mul(rng.below(d.order), d.generator, d);
      const Scalar k = 1 + rng.below(d.order - 1);
      ++desk_cases;
      if (crypto::elgamal_decrypt(crypto::elgamal_encrypt(pm, kp.public_key, k, d), kp.private_key, d) != pm) ++failures;
    }
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << tiny_cases << " tiny23 cases (every key, point and ephemeral), " << desk_cases << " desk trials, " << failures
    << " failures, " << secs << " s";
  return {failures == 0 && secs < 30.0, d.str()};
}

Verdict ecdh_agreement() {
  const CurveParams& d = desk();
  Rng rng(77, "acceptance-ecdh");
  int agree = 0;
  const int pairs = 1000;
  try {
    for (int i = 0; i < pairs; ++i) {
      const crypto::KeyPair a = crypto::keygen(d, rng), b = crypto::keygen(d, rng);
      const auto ab = crypto::ecdh_shared(a.private_key, b.public_key, d);
      const auto ba = crypto::ecdh_shared(b.private_key, a.public_key, d);
      if (ab.point == ba.point && ab.key_bytes == ba.key_bytes) ++agree;
    }
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
  return {agree == pairs, std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree"};
}

std::vector<SimResult> run_seeds(const ScenarioConfig& base, std::uint64_t first, std::uint64_t count) {
  std::vector<SimResult> out(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      ScenarioConfig c = base;
      c.seed = first + i;
      out[i] = run_scenario(c);
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(std::thread::hardware_concurrency(), count));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

Verdict trust_loop(const std::vector<SimResult>& runs, double secs) {
  int good = 0;
  std::string misses;
  for (const SimResult& r : runs) {
    bool ok = !r.malicious.empty();
    double worst_malicious = 0.0, best_honest_floor = 1.0;
    for (NodeId m : r.malicious) {
      if (r.rsu_observed.contains(m)) {
        const auto it = r.metrics.eviction_times.find(m);
        ok = ok && it != r.metrics.eviction_times.end() && it->second < r.config.duration_s;
      }
      worst_malicious = std::max(worst_malicious, r.final_trust.at(m));
    }
    for (const auto& [v, t] : r.final_trust)
      if (!std::binary_search(r.malicious.begin(), r.malicious.end(), v)) best_honest_floor = std::min(best_honest_floor, t);
    ok = ok && worst_malicious < best_honest_floor;
    if (ok) {
      ++good;
    } else {
      misses += " seed" + std::to_string(r.config.seed);
    }
  }
  std::ostringstream d;
  d << good << "/" << runs.size() << " seeds pass, " << secs << " s";
  if (!misses.empty()) d << ", failing:" << misses;
  return {good >= 19 && secs < 60.0, d.str()};
}

Verdict eviction_helps(const std::vector<SimResult>& on, const std::vector<SimResult>& off) {
  int wins = 0;
  double mean_on = 0, mean_off = 0;
  for (std::size_t i = 0; i < on.size(); ++i) {
    const double a = on[i].metrics.honest_pdr(), b = off[i].metrics.honest_pdr();
    if (a > b) ++wins;
    mean_on += a / on.size();
    mean_off += b / off.size();
  }
  std::ostringstream d;
  d << "eviction on beats off in " << wins << "/" << on.size() << " seeds, mean honest pdr " << mean_on << " vs "
    << mean_off;
  return {wins >= 16, d.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("vtsim_accept_" + std::to_string(getpid()));
  std::ostringstream sink;
  for (const char* run : {"a", "b"}) {
    fs::remove_all(root / run);
    if (run_cli({"run", "--seed", "42", "--out", (root / run).string()}, sink, sink) != kExitOk) {
      return {false, "run failed: " + sink.str()};
    }
  }
  int equal = 0;
  std::string differs;
  for (const char* f : {"events.jsonl", "trust.csv", "bandwidth.csv"}) {
    const std::string a = slurp(root / "a" / f), b = slurp(root / "b" / f);
    if (!a.empty() && a == b) {
      ++equal;
    } else {
      differs += std::string(" ") + f;
    }
  }
  fs::remove_all(root);
  return {equal == 3, std::to_string(equal) + "/3 files byte-identical" + (differs.empty() ? "" : ", differ:" + differs)};
}

Verdict dsdv_soundness() {
  Rng rng(31337, "acceptance-topologies");
  std::size_t graphs_ok = 0, pairs = 0, unreachable = 0, mismatches = 0;
  for (int g = 0; g < 50; ++g) {
    const std::size_t n = 2 + rng.below(30);
    const auto adj = testsupport::random_topology(rng, n, 1000.0, 250.0);
    const auto agents = testsupport::converge(adj, n);
    std::size_t reachable = 0;
    const std::size_t bad = testsupport::route_mismatches(adj, agents, &reachable);
    pairs += reachable;
    unreachable += n * (n - 1) - reachable;
    mismatches += bad;
    if (bad == 0) ++graphs_ok;
  }
  std::ostringstream d;
  d << graphs_ok << "/50 topologies, " << pairs << " reachable pairs, " << unreachable << " unreachable pairs, "
    << mismatches << " mismatches";
  return {graphs_ok == 50 && mismatches == 0, d.str()};
}

} // namespace

int main() {
  int failed = 0;
  auto report = [&](int id, const char* what, const Verdict& v) {
    std::printf("[%s] criterion %d: %s -- %s\n", v.pass ? "PASS" : "FAIL", id, what, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failed;
  };

  report(1, "exhaustive curve arithmetic on tiny23", exhaustive_group_laws());
  report(2, "ElGamal round trip", elgamal_round_trip());
  report(3, "ECDH agreement on desk", ecdh_agreement());

  ScenarioConfig base;
  const auto t0 = Clock::now();
  std::vector<SimResult> on;
  try {
    on = run_seeds(base, 1, 20);
  } catch (const std::exception& e) {
    report(4, "trust loop evicts malicious vehicles", {false, e.what()});
  }
  const double secs = seconds_since(t0);
  if (!on.empty()) report(4, "trust loop evicts malicious vehicles", trust_loop(on, secs));

  ScenarioConfig passive = base;
  passive.eviction = false;
  try {
    const auto off = run_seeds(passive, 1, 20);
    if (on.empty()) throw std::runtime_error("no eviction-on runs");
    report(5, "eviction improves honest delivery", eviction_helps(on, off));
  } catch (const std::exception& e) {
    report(5, "eviction improves honest delivery", {false, e.what()});
  }

  report(6, "seed 42 outputs are byte-identical", determinism());
  report(7, "DSDV converges to shortest paths", dsdv_soundness());

  std::printf("%d/7 criteria passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}
