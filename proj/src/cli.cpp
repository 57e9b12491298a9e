#include "vtsim/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "vtsim/config.hpp"
#include "vtsim/crypto.hpp"
#include "vtsim/selftest.hpp"
#include "vtsim/simulator.hpp"

namespace vtsim {

namespace fs = std::filesystem;

namespace {

/// Malformed command-line input (maps to exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_scalar(const std::string& text, const char* what) {
  std::string_view s = text;
  int base = 10;
  if (s.starts_with("0x") || s.starts_with("0X")) {
    s.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError(std::string(what) + ": expected a decimal or 0x-prefixed hex integer, got '" + text + "'");
  }
  return v;
}

ec::CurvePoint parse_point(const std::string& text, const char* what) {
  try {
    return ec::CurvePoint::parse(text);
  } catch (const ec::CurveError& e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : bytes) {
    out += digits[b >> 4U];
    out += digits[b & 0xFU];
  }
  return out;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct CurveOptions {
  std::string name = "desk";
  std::string q, a, b, gx, gy, n;
  std::string kappa;

  void attach(CLI::App* cmd) {
    cmd->add_option("--curve", name, "tiny23 | desk | custom")->capture_default_str();
    cmd->add_option("--q", q, "custom curve: field prime");
    cmd->add_option("--a", a, "custom curve: coefficient a");
    cmd->add_option("--b", b, "custom curve: coefficient b");
    cmd->add_option("--gx", gx, "custom curve: generator x");
    cmd->add_option("--gy", gy, "custom curve: generator y");
    cmd->add_option("--n", n, "custom curve: generator order");
    cmd->add_option("--kappa", kappa, "message embedding expansion factor");
  }

  ec::CurveParams resolve() const {
    try {
      if (name != "custom") return ec::builtin_curve(name);
      if (q.empty() || a.empty() || b.empty()) throw UsageError("--curve custom needs --q, --a and --b");
      std::optional<ec::CurvePoint> g;
      if (!gx.empty() || !gy.empty()) {
        if (gx.empty() || gy.empty()) throw UsageError("--gx and --gy must be given together");
        g = ec::CurvePoint::affine(parse_scalar(gx, "--gx"), parse_scalar(gy, "--gy"));
      }
      std::optional<std::uint64_t> order;
      if (!n.empty()) order = parse_scalar(n, "--n");
      return ec::make_curve("custom", parse_scalar(q, "--q"), parse_scalar(a, "--a"), parse_scalar(b, "--b"), g,
                            order);
    } catch (const ec::CurveError& e) {
      throw UsageError(std::string("--curve: ") + e.what());
    }
  }

  unsigned resolve_kappa(const ec::CurveParams& params) const {
    if (kappa.empty()) return crypto::default_kappa(params);
    const std::uint64_t k = parse_scalar(kappa, "--kappa");
    if (k == 0 || k > 1024) throw UsageError("--kappa: must lie in [1, 1024]");
    return static_cast<unsigned>(k);
  }
};

std::uint64_t seed_or_random(const std::string& seed) {
  if (!seed.empty()) return parse_scalar(seed, "--seed");
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32U) | rd();
}

// Ciphertext file: a short header, then one "x,y;x,y" line per block.
std::string format_ciphertext(const ec::CurveParams& params, unsigned kappa,
                              const std::vector<crypto::CipherPair>& blocks) {
  std::string out = "vtsim-ciphertext 1\n";
  out += "curve " + params.name + " " + std::to_string(params.q) + " " + std::to_string(params.a) + " " +
         std::to_string(params.b) + "\n";
  out += "kappa " + std::to_string(kappa) + "\n";
  out += "blocks " + std::to_string(blocks.size()) + "\n";
  for (const auto& ct : blocks) out += ct.c1.to_string() + ";" + ct.c2.to_string() + "\n";
  return out;
}

std::vector<crypto::CipherPair> parse_ciphertext(const std::string& text, const ec::CurveParams& params,
                                                 unsigned& kappa) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw UsageError(std::string("ciphertext: missing ") + what);
    return line;
  };
  if (next("header") != "vtsim-ciphertext 1") throw UsageError("ciphertext: bad header");
  std::istringstream curve_line(next("curve line"));
  std::string tag, name;
  std::uint64_t q = 0, a = 0, b = 0;
  if (!(curve_line >> tag >> name >> q >> a >> b) || tag != "curve") throw UsageError("ciphertext: bad curve line");
  if (q != params.q || a != params.a || b != params.b) {
    throw UsageError("ciphertext: produced on curve '" + name + "', not '" + params.name + "'");
  }
  std::istringstream kappa_line(next("kappa line"));
  if (!(kappa_line >> tag >> kappa) || tag != "kappa" || kappa == 0) throw UsageError("ciphertext: bad kappa line");
  std::istringstream count_line(next("block count"));
  std::size_t count = 0;
  if (!(count_line >> tag >> count) || tag != "blocks") throw UsageError("ciphertext: bad block count");
  std::vector<crypto::CipherPair> blocks;
  for (std::size_t i = 0; i < count; ++i) {
    const std::string row = next("block");
    const auto semi = row.find(';');
    if (semi == std::string::npos) throw UsageError("ciphertext: block " + std::to_string(i) + " malformed");
    crypto::CipherPair ct{parse_point(row.substr(0, semi), "ciphertext"), parse_point(row.substr(semi + 1), "ciphertext")};
    if (!ec::is_on_curve(ct.c1, params) || !ec::is_on_curve(ct.c2, params)) {
      throw UsageError("ciphertext: block " + std::to_string(i) + " is off the curve");
    }
    blocks.push_back(ct);
  }
  return blocks;
}

fs::path default_out_root() {
  if (const char* env = std::getenv("VTSIM_OUT"); env != nullptr && *env != '\0') return env;
  return "vtsim_out";
}

std::pair<std::uint64_t, std::uint64_t> parse_sweep(const std::string& range) {
  const std::string prefix = "seeds=";
  const auto dots = range.find("..");
  if (!range.starts_with(prefix) || dots == std::string::npos) {
    throw UsageError("--sweep: expected seeds=A..B, got '" + range + "'");
  }
  const std::uint64_t lo = parse_scalar(range.substr(prefix.size(), dots - prefix.size()), "--sweep");
  const std::uint64_t hi = parse_scalar(range.substr(dots + 2), "--sweep");
  if (hi < lo) throw UsageError("--sweep: empty seed range");
  return {lo, hi};
}

void write_manifest(const fs::path& dir, const std::string& config_path, const ScenarioConfig& config) {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["tool"] = "vtsim";
  manifest["tool_version"] = kToolVersion;
  manifest["config_path"] = config_path;
  manifest["out_dir"] = dir.string();
  manifest["started_at"] = utc_now();
  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config.to_entries()) resolved[k] = v;
  manifest["config"] = std::move(resolved);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  write_file(dir / "resolved.cfg", "# effective configuration; rerun with: vtsim run --config resolved.cfg\n" +
                                       config.to_text());
}

SimResult run_into(const fs::path& dir, const std::string& config_path, ScenarioConfig config) {
  // Pin the malicious set so the manifest alone reproduces the run.
  config.malicious_ids = config.resolve_malicious();
  config.malicious_fraction.reset();
  write_manifest(dir, config_path, config);
  SimResult result = run_scenario(config);
  write_file(dir / "events.jsonl", result.trace);
  write_file(dir / "trust.csv", trust_csv(result.metrics));
  write_file(dir / "bandwidth.csv", bandwidth_csv(result.metrics));
  write_file(dir / "summary.txt", summary_text(result));
  return result;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, const std::string& out_dir,
            const std::string& seed, const std::string& sweep, const std::string& curve, std::ostream& out) {
  ScenarioConfig config = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
  for (const std::string& o : overrides) apply_override(config, o);
  if (!curve.empty()) config.set("curve", curve);
  if (!seed.empty()) config.seed = parse_scalar(seed, "--seed");
  config.validate();

  const fs::path dir = out_dir.empty() ? default_out_root() : fs::path(out_dir);
  if (sweep.empty()) {
    const SimResult result = run_into(dir, config_path, config);
    out << summary_text(result);
    out << "outputs: " << dir.string() << "\n";
    return kExitOk;
  }

  const auto [lo, hi] = parse_sweep(sweep);
  const std::uint64_t count = hi - lo + 1;
  std::vector<std::string> lines(count);
  std::vector<std::string> errors(count);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t i = next++; i < count; i = next++) {
      ScenarioConfig c = config;
      c.seed = lo + i;
      try {
        const SimResult r = run_into(dir / ("seed_" + std::to_string(c.seed)), config_path, c);
        std::ostringstream line;
        line << "seed " << c.seed << ": pdr=" << std::fixed << std::setprecision(6) << r.metrics.pdr()
             << " honest_pdr=" << r.metrics.honest_pdr() << " evictions=" << r.metrics.eviction_times.size();
        lines[i] = line.str();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::uint64_t>(count, std::max(1U, std::thread::hardware_concurrency())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!errors[i].empty()) throw std::runtime_error("seed " + std::to_string(lo + i) + ": " + errors[i]);
    out << lines[i] << "\n";
  }
  out << "outputs: " << dir.string() << "\n";
  return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vtsim: VANET trust and elliptic-curve security simulator", "vtsim"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  // run
  std::string config_path, out_dir, seed, sweep, curve;
  std::vector<std::string> overrides;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write traces and metrics");
  run->add_option("--config", config_path, "scenario file (key = value)");
  run->add_option("--out", out_dir, "output directory (default $VTSIM_OUT or ./vtsim_out)");
  run->add_option("--set", overrides, "KEY=VALUE override, repeatable");
  run->add_option("--seed", seed, "scenario seed");
  run->add_option("--sweep", sweep, "seeds=A..B: one run per seed, in parallel");
  run->add_option("--curve", curve, "tiny23 | desk | custom");

  // crypto
  CLI::App* crypto_cmd = app.add_subcommand("crypto", "elliptic-curve utilities");
  crypto_cmd->require_subcommand(1);
  CurveOptions curve_opts;
  std::string c_seed, c_private, c_public, c_peer, c_in, c_out;

  CLI::App* keygen = crypto_cmd->add_subcommand("keygen", "print a fresh key pair");
  curve_opts.attach(keygen);
  keygen->add_option("--seed", c_seed, "seed for the key (default: random)");
  keygen->add_option("--private", c_private, "derive the pair from this private scalar");

  CLI::App* encrypt = crypto_cmd->add_subcommand("encrypt", "ElGamal-encrypt a file to a public key");
  curve_opts.attach(encrypt);
  encrypt->add_option("--public", c_public, "receiver public key x,y")->required();
  encrypt->add_option("--in", c_in, "plaintext file")->required();
  encrypt->add_option("--out", c_out, "ciphertext file")->required();
  encrypt->add_option("--seed", c_seed, "seed for ephemerals (default: random)");

  CLI::App* decrypt = crypto_cmd->add_subcommand("decrypt", "decrypt a ciphertext file");
  curve_opts.attach(decrypt);
  decrypt->add_option("--private", c_private, "receiver private scalar")->required();
  decrypt->add_option("--in", c_in, "ciphertext file")->required();
  decrypt->add_option("--out", c_out, "plaintext file")->required();

  CLI::App* ecdh = crypto_cmd->add_subcommand("ecdh", "derive a shared key");
  curve_opts.attach(ecdh);
  ecdh->add_option("--private", c_private, "own private scalar")->required();
  ecdh->add_option("--peer", c_peer, "peer public key x,y")->required();

  CLI::App* selftest = app.add_subcommand("selftest", "exhaustive checks on the tiny23 curve");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("vtsim");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return cmd_run(config_path, overrides, out_dir, seed, sweep, curve, out);

    if (*selftest) {
      const auto results = run_selftest(ec::tiny23());
      print_selftest(results, out);
      const bool ok = std::all_of(results.begin(), results.end(), [](const SuiteResult& r) { return r.passed; });
      out << (ok ? "selftest: all suites passed\n" : "selftest: FAILED\n");
      return ok ? kExitOk : kExitRuntime;
    }

    const ec::CurveParams params = curve_opts.resolve();
    if (*keygen) {
      crypto::KeyPair kp;
      if (!c_private.empty()) {
        const std::uint64_t d = parse_scalar(c_private, "--private");
        if (d == 0 || d >= params.order) throw UsageError("--private: must lie in [1, n)");
        kp = crypto::keypair_from_private(d, params);
      } else {
        Rng rng(seed_or_random(c_seed), "keygen");
        kp = crypto::keygen(params, rng);
      }
      out << "curve=" << params.name << "\n";
      out << "private=" << kp.private_key << "\n";
      out << "public=" << kp.public_key.to_string() << "\n";
      return kExitOk;
    }
    if (*encrypt) {
      const unsigned kappa = curve_opts.resolve_kappa(params);
      const ec::CurvePoint receiver = parse_point(c_public, "--public");
      if (receiver.is_identity() || !ec::is_on_curve(receiver, params)) {
        throw UsageError("--public: not a point on curve " + params.name);
      }
      const std::string plain = read_file(c_in);
      const std::vector<std::uint8_t> bytes(plain.begin(), plain.end());
      Rng rng(seed_or_random(c_seed), "ephemeral");
      const auto blocks = crypto::encrypt_bytes(bytes, receiver, params, kappa, rng);
      write_file(c_out, format_ciphertext(params, kappa, blocks));
      out << "encrypted " << bytes.size() << " bytes into " << blocks.size() << " blocks\n";
      return kExitOk;
    }
    if (*decrypt) {
      const std::uint64_t d = parse_scalar(c_private, "--private");
      unsigned kappa = 0;
      const auto blocks = parse_ciphertext(read_file(c_in), params, kappa);
      const auto bytes = crypto::decrypt_bytes(blocks, d, params, kappa);
      write_file(c_out, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
      out << "decrypted " << bytes.size() << " bytes\n";
      return kExitOk;
    }
    if (*ecdh) {
      const std::uint64_t d = parse_scalar(c_private, "--private");
      const ec::CurvePoint peer = parse_point(c_peer, "--peer");
      crypto::SharedSecret secret;
      try {
        secret = crypto::ecdh_shared(d, peer, params);
      } catch (const crypto::CryptoError& e) {
        throw UsageError(std::string("--peer: ") + e.what());
      }
      out << "point=" << secret.point.to_string() << "\n";
      out << "key=" << hex(secret.key_bytes) << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "vtsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "vtsim: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "vtsim: error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

} // namespace vtsim
