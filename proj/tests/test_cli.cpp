#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "vtsim/cli.hpp"
#include "vtsim/curve.hpp"
#include "vtsim/selftest.hpp"

using namespace vtsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vtsim_cli_" + std::to_string(getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.starts_with(key + "=")) return line.substr(key.size() + 1);
  return {};
}

} // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"run", "--config", "/nonexistent/scenario.cfg"}).code == kExitUsage);
  const Outcome bad = cli({"run", "--set", "n_vehicles=0", "--out", scratch("bad").string()});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("n_vehicles") != std::string::npos);
  CHECK(cli({"run", "--set", "nokey=1"}).code == kExitUsage);
  CHECK(cli({"run", "--sweep", "1..3"}).code == kExitUsage);
  CHECK(cli({"run", "--curve", "tiny23", "--out", scratch("tiny").string()}).code == kExitUsage);
  CHECK(cli({"crypto", "ecdh", "--curve", "tiny23", "--private", "3", "--peer", "0,2"}).code == kExitUsage);
  CHECK(cli({"crypto", "ecdh", "--curve", "tiny23", "--private", "x3", "--peer", "0,1"}).code == kExitUsage);
  CHECK(cli({"crypto", "keygen", "--curve", "p256"}).code == kExitUsage);
  CHECK(cli({"crypto", "keygen", "--curve", "custom", "--q", "5", "--a", "0", "--b", "0"}).code == kExitUsage);
}

TEST_CASE("run writes every output") {
  const fs::path dir = scratch("run");
  const Outcome o = cli({"run", "--out", dir.string(), "--set", "duration_s=10", "--seed", "7"});
  REQUIRE(o.code == kExitOk);
  for (const char* f : {"manifest.json", "resolved.cfg", "events.jsonl", "trust.csv", "bandwidth.csv", "summary.txt"})
    CHECK(fs::exists(dir / f));
  CHECK(o.out.find("seed: 7") != std::string::npos);
  CHECK(o.out.find(slurp(dir / "summary.txt")) == 0);

  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["tool_version"] == kToolVersion);
  CHECK(manifest["config"]["seed"] == "7");
  CHECK(manifest["config"]["duration_s"] == "10");
  CHECK(slurp(dir / "trust.csv").starts_with("time_s,vehicle_id,trust,reward_points,trusted\n"));
  CHECK(slurp(dir / "bandwidth.csv").starts_with("time_s,bytes_per_s\n"));

  // the resolved config reproduces the run byte for byte
  const fs::path again = scratch("rerun");
  REQUIRE(cli({"run", "--config", (dir / "resolved.cfg").string(), "--out", again.string()}).code == kExitOk);
  CHECK(slurp(dir / "events.jsonl") == slurp(again / "events.jsonl"));
  CHECK(slurp(dir / "trust.csv") == slurp(again / "trust.csv"));
}

TEST_CASE("config file plus overrides") {
  const fs::path dir = scratch("cfg");
  {
    std::ofstream cfg(dir / "s.cfg");
    cfg << "# short\nduration_s = 6\nseed = 1\nn_vehicles = 10\n";
  }
  const Outcome o = cli({"run", "--config", (dir / "s.cfg").string(), "--set", "seed=3", "--out", (dir / "o").string()});
  REQUIRE(o.code == kExitOk);
  const auto manifest = nlohmann::json::parse(slurp(dir / "o" / "manifest.json"));
  CHECK(manifest["config"]["seed"] == "3");
  CHECK(manifest["config"]["n_vehicles"] == "10");
  CHECK(manifest["config_path"] == (dir / "s.cfg").string());
}

TEST_CASE("output root from the environment") {
  const fs::path dir = scratch("env");
  setenv("VTSIM_OUT", dir.string().c_str(), 1);
  const Outcome o = cli({"run", "--set", "duration_s=5"});
  unsetenv("VTSIM_OUT");
  REQUIRE(o.code == kExitOk);
  CHECK(fs::exists(dir / "events.jsonl"));
}

TEST_CASE("seed sweep") {
  const fs::path dir = scratch("sweep");
  const Outcome o = cli({"run", "--sweep", "seeds=1..3", "--set", "duration_s=5", "--out", dir.string()});
  REQUIRE(o.code == kExitOk);
  for (int s = 1; s <= 3; ++s) {
    CHECK(fs::exists(dir / ("seed_" + std::to_string(s)) / "summary.txt"));
    CHECK(o.out.find("seed " + std::to_string(s) + ": pdr=") != std::string::npos);
  }
}

TEST_CASE("keygen golden output") {
  const Outcome o = cli({"crypto", "keygen", "--curve", "tiny23", "--private", "5"});
  CHECK(o.code == kExitOk);
  CHECK(o.out == "curve=tiny23\nprivate=5\npublic=18,3\n");
  const Outcome a = cli({"crypto", "keygen", "--seed", "4"});
  const Outcome b = cli({"crypto", "keygen", "--seed", "0x4"});
  CHECK(a.out == b.out);
  CHECK(cli({"crypto", "keygen", "--curve", "tiny23", "--private", "28"}).code == kExitUsage);
}

TEST_CASE("ecdh from both sides") {
  const std::string g11 = ec::scalar_mul(11, ec::tiny23().generator, ec::tiny23()).to_string();
  const Outcome tiny = cli({"crypto", "ecdh", "--curve", "tiny23", "--private", "7", "--peer", g11});
  CHECK(tiny.code == kExitOk);
  CHECK(tiny.out == "point=11,20\nkey=0b\n");

  const Outcome a = cli({"crypto", "keygen", "--seed", "100"});
  const Outcome b = cli({"crypto", "keygen", "--seed", "200"});
  const Outcome ab = cli({"crypto", "ecdh", "--private", field(a.out, "private"), "--peer", field(b.out, "public")});
  const Outcome ba = cli({"crypto", "ecdh", "--private", field(b.out, "private"), "--peer", field(a.out, "public")});
  CHECK(ab.code == kExitOk);
  CHECK(ab.out == ba.out);
  CHECK(field(ab.out, "key").size() == 6);
}

TEST_CASE("encrypt and decrypt files") {
  const fs::path dir = scratch("crypt");
  const std::string message = "Obstacle on lane 2 at km 14.\nSlow down.\n";
  {
    std::ofstream(dir / "plain.txt", std::ios::binary) << message;
  }
  const Outcome keys = cli({"crypto", "keygen", "--seed", "9"});
  REQUIRE(keys.code == kExitOk);
  const Outcome enc = cli({"crypto", "encrypt", "--public", field(keys.out, "public"), "--in", (dir / "plain.txt").string(),
                           "--out", (dir / "ct.txt").string(), "--seed", "1"});
  REQUIRE(enc.code == kExitOk);
  CHECK(slurp(dir / "ct.txt").starts_with("vtsim-ciphertext 1\ncurve desk 1048583 3 6\nkappa 16\n"));
  const Outcome dec = cli({"crypto", "decrypt", "--private", field(keys.out, "private"), "--in", (dir / "ct.txt").string(),
                           "--out", (dir / "back.txt").string()});
  REQUIRE(dec.code == kExitOk);
  CHECK(slurp(dir / "back.txt") == message);

  const Outcome wrong = cli({"crypto", "decrypt", "--private", "12345", "--in", (dir / "ct.txt").string(), "--out",
                             (dir / "wrong.txt").string()});
  if (wrong.code == kExitOk) {
    CHECK(slurp(dir / "wrong.txt") != message);
  } else {
    CHECK(wrong.code == kExitRuntime);
  }

  CHECK(cli({"crypto", "decrypt", "--curve", "tiny23", "--private", "5", "--in", (dir / "ct.txt").string(), "--out",
             (dir / "x.txt").string()})
            .code == kExitUsage);
  CHECK(cli({"crypto", "encrypt", "--public", "1,1", "--in", (dir / "plain.txt").string(), "--out",
             (dir / "y.txt").string()})
            .code == kExitUsage);
  CHECK(cli({"crypto", "encrypt", "--public", field(keys.out, "public"), "--in", (dir / "missing").string(), "--out",
             (dir / "y.txt").string()})
            .code == kExitUsage);
}

TEST_CASE("unencodable plaintext is a runtime error") {
  const fs::path dir = scratch("enc_fail");
  {
    // 0x8675 is one of the three 16-bit blocks with no curve point on desk
    std::ofstream(dir / "p.bin", std::ios::binary) << "\x75\x86";
  }
  const Outcome keys = cli({"crypto", "keygen", "--seed", "9"});
  const Outcome enc = cli({"crypto", "encrypt", "--public", field(keys.out, "public"), "--in", (dir / "p.bin").string(),
                           "--out", (dir / "ct.txt").string(), "--seed", "1"});
  CHECK(enc.code == kExitRuntime);
}

TEST_CASE("selftest") {
  const Outcome o = cli({"selftest"});
  CHECK(o.code == kExitOk);
  std::size_t suites = 0;
  for (std::size_t pos = 0; (pos = o.out.find(" PASS ", pos)) != std::string::npos; ++pos) ++suites;
  CHECK(suites >= 4);

  ec::CurveParams broken = ec::tiny23();
  broken.order = 27;
  const auto results = run_selftest(broken);
  CHECK(std::any_of(results.begin(), results.end(), [](const SuiteResult& r) { return !r.passed; }));
}

TEST_CASE("installed binary") {
  const char* bin = std::getenv("VTSIM_BIN");
  if (bin == nullptr) return;
  CHECK(std::system((std::string(bin) + " selftest > /dev/null").c_str()) == 0);
  const int status = std::system((std::string(bin) + " run --nope 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(status) == 2);
}
