#include "vtsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "vtsim/crypto.hpp"
#include "vtsim/rng.hpp"

namespace vtsim {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration";
  for (const auto& d : items) out += "\n  " + d;
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view key, const std::string& why) {
  throw ConfigError({std::string(key) + ": " + why});
}

double parse_double(std::string_view key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad(key, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    bad(key, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view v) {
  const std::uint64_t out = parse_u64(key, v);
  if (out > 0xFFFFFFFFULL) bad(key, "value too large");
  return static_cast<std::uint32_t>(out);
}

bool parse_bool(std::string_view key, std::string_view v) {
  v = trim(v);
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  bad(key, "expected true/false, got '" + std::string(v) + "'");
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt_opt(const std::optional<std::uint64_t>& v) { return v ? std::to_string(*v) : ""; }

struct Field {
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define VT_DOUBLE(name, member)                                                                   \
  {name, Field{[](ScenarioConfig& c, std::string_view v) { c.member = parse_double(name, v); },  \
               [](const ScenarioConfig& c) { return fmt_double(c.member); }}}
#define VT_U32(name, member)                                                                      \
  {name, Field{[](ScenarioConfig& c, std::string_view v) { c.member = parse_u32(name, v); },     \
               [](const ScenarioConfig& c) { return std::to_string(c.member); }}}
#define VT_OPT_U64(name, member)                                                                  \
  {name, Field{[](ScenarioConfig& c, std::string_view v) {                                        \
                 if (trim(v).empty()) c.member.reset(); else c.member = parse_u64(name, v);       \
               },                                                                                 \
               [](const ScenarioConfig& c) { return fmt_opt(c.member); }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      VT_DOUBLE("area_width", area.width),
      VT_DOUBLE("area_height", area.height),
      VT_DOUBLE("duration_s", duration_s),
      VT_U32("n_vehicles", n_vehicles),
      {"rsu_positions",
       Field{[](ScenarioConfig& c, std::string_view v) {
               c.rsu_positions.clear();
               for (std::string_view item : split(v, ';')) {
                 const auto xy = split(item, ',');
                 if (xy.size() != 2) bad("rsu_positions", "expected 'x,y;x,y;...', got '" + std::string(item) + "'");
                 c.rsu_positions.push_back({parse_double("rsu_positions", xy[0]), parse_double("rsu_positions", xy[1])});
               }
             },
             [](const ScenarioConfig& c) {
               std::string out;
               for (const Vec2& p : c.rsu_positions) {
                 if (!out.empty()) out += ';';
                 out += fmt_double(p.x) + "," + fmt_double(p.y);
               }
               return out;
             }}},
      {"malicious_ids",
       Field{[](ScenarioConfig& c, std::string_view v) {
               c.malicious_ids.clear();
               for (std::string_view item : split(v, ',')) c.malicious_ids.push_back(parse_u32("malicious_ids", item));
             },
             [](const ScenarioConfig& c) {
               std::string out;
               for (NodeId id : c.malicious_ids) {
                 if (!out.empty()) out += ',';
                 out += std::to_string(id);
               }
               return out;
             }}},
      {"malicious_fraction",
       Field{[](ScenarioConfig& c, std::string_view v) {
               if (trim(v).empty()) c.malicious_fraction.reset();
               else c.malicious_fraction = parse_double("malicious_fraction", v);
             },
             [](const ScenarioConfig& c) { return c.malicious_fraction ? fmt_double(*c.malicious_fraction) : ""; }}},
      VT_U32("malicious_count", malicious_count),
      {"impostor_ids",
       Field{[](ScenarioConfig& c, std::string_view v) {
               c.impostor_ids.clear();
               for (std::string_view item : split(v, ',')) c.impostor_ids.push_back(parse_u32("impostor_ids", item));
             },
             [](const ScenarioConfig& c) {
               std::string out;
               for (NodeId id : c.impostor_ids) {
                 if (!out.empty()) out += ',';
                 out += std::to_string(id);
               }
               return out;
             }}},
      VT_DOUBLE("speed_min", speed.min),
      VT_DOUBLE("speed_max", speed.max),
      VT_DOUBLE("radio_range", radio_range),
      {"seed", Field{[](ScenarioConfig& c, std::string_view v) { c.seed = parse_u64("seed", v); },
                     [](const ScenarioConfig& c) { return std::to_string(c.seed); }}},
      VT_DOUBLE("msg_interval_s", msg_interval_s),
      VT_DOUBLE("trust_t0", trust.initial_trust),
      VT_DOUBLE("trust_reward", trust.reward),
      VT_DOUBLE("trust_penalty", trust.penalty),
      VT_DOUBLE("trust_threshold", trust.threshold),
      VT_DOUBLE("trust_w_direct", trust.w_direct),
      VT_DOUBLE("trust_w_rec", trust.w_rec),
      VT_DOUBLE("trust_w_hist", trust.w_hist),
      {"trust_history",
       Field{[](ScenarioConfig& c, std::string_view v) { c.trust.history_window = parse_u32("trust_history", v); },
             [](const ScenarioConfig& c) { return std::to_string(c.trust.history_window); }}},
      VT_DOUBLE("detect_p", detect_p),
      VT_DOUBLE("fp_p", fp_p),
      VT_DOUBLE("drop_p", drop_p),
      VT_DOUBLE("bogus_p", bogus_p),
      {"eviction", Field{[](ScenarioConfig& c, std::string_view v) { c.eviction = parse_bool("eviction", v); },
                         [](const ScenarioConfig& c) { return std::string(c.eviction ? "true" : "false"); }}},
      {"curve", Field{[](ScenarioConfig& c, std::string_view v) { c.curve = std::string(trim(v)); },
                      [](const ScenarioConfig& c) { return c.curve; }}},
      VT_OPT_U64("curve_q", curve_q),
      VT_OPT_U64("curve_a", curve_a),
      VT_OPT_U64("curve_b", curve_b),
      VT_OPT_U64("curve_gx", curve_gx),
      VT_OPT_U64("curve_gy", curve_gy),
      VT_OPT_U64("curve_n", curve_n),
      VT_U32("kappa", kappa),
      VT_U32("n_flows", n_flows),
      VT_U32("packet_size", packet_size),
      VT_DOUBLE("packet_interval_s", packet_interval_s),
      VT_DOUBLE("traffic_start_s", traffic_start_s),
      VT_DOUBLE("link_rate_bps", link_rate_bps),
      VT_DOUBLE("latency_base_s", latency_base_s),
      VT_DOUBLE("channel_latency_s", channel_latency_s),
      VT_DOUBLE("dsdv_period_s", dsdv_period_s),
      VT_DOUBLE("route_timeout_s", route_timeout_s),
      VT_U32("ttl", ttl),
      VT_DOUBLE("mobility_tick_s", mobility_tick_s),
      VT_DOUBLE("sample_window_s", sample_window_s),
  };
  return table;
}

#undef VT_DOUBLE
#undef VT_U32
#undef VT_OPT_U64

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields()) {
    if (name == key) return &field;
  }
  return nullptr;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> diagnostics)
    : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : fields()) out.push_back(name);
    return out;
  }();
  return keys;
}

void ScenarioConfig::set(std::string_view key, std::string_view value) {
  key = trim(key);
  const Field* field = find_field(key);
  if (field == nullptr) throw ConfigError({"unknown key '" + std::string(key) + "'"});
  field->set(*this, value);
}

void ScenarioConfig::validate() const {
  std::vector<std::string> diag;
  auto check = [&diag](bool ok, std::string msg) {
    if (!ok) diag.push_back(std::move(msg));
  };
  auto prob = [&check](double p, const char* name) {
    check(p >= 0.0 && p <= 1.0, std::string(name) + ": must lie in [0, 1]");
  };

  check(area.width > 0.0 && area.height > 0.0, "area_width/area_height: must be positive");
  check(duration_s > 0.0, "duration_s: must be positive");
  check(n_vehicles > 0, "n_vehicles: must be positive");
  check(!rsu_positions.empty(), "rsu_positions: at least one RSU is required");
  for (const Vec2& p : rsu_positions) {
    check(p.x >= 0.0 && p.x <= area.width && p.y >= 0.0 && p.y <= area.height,
          "rsu_positions: RSU outside the simulation area");
  }
  std::set<NodeId> seen;
  for (NodeId id : malicious_ids) {
    check(id < n_vehicles, "malicious_ids: id " + std::to_string(id) + " is not a vehicle");
    check(seen.insert(id).second, "malicious_ids: duplicate id " + std::to_string(id));
  }
  for (NodeId id : impostor_ids) {
    check(id < n_vehicles, "impostor_ids: id " + std::to_string(id) + " is not a vehicle");
  }
  if (malicious_fraction) prob(*malicious_fraction, "malicious_fraction");
  check(malicious_count <= n_vehicles, "malicious_count: exceeds n_vehicles");
  check(speed.min >= 0.0 && speed.max >= speed.min, "speed_min/speed_max: need 0 <= speed_min <= speed_max");
  check(radio_range > 0.0, "radio_range: must be positive");
  check(msg_interval_s > 0.0, "msg_interval_s: must be positive");
  try {
    trust.validate();
  } catch (const trust::TrustError& e) {
    diag.push_back(e.what());
  }
  prob(detect_p, "detect_p");
  prob(fp_p, "fp_p");
  prob(drop_p, "drop_p");
  prob(bogus_p, "bogus_p");
  check(packet_size > 0, "packet_size: must be positive");
  check(packet_interval_s > 0.0, "packet_interval_s: must be positive");
  check(traffic_start_s >= 0.0, "traffic_start_s: must be non-negative");
  check(link_rate_bps > 0.0, "link_rate_bps: must be positive");
  check(latency_base_s >= 0.0, "latency_base_s: must be non-negative");
  check(channel_latency_s >= 0.0, "channel_latency_s: must be non-negative");
  check(dsdv_period_s > 0.0, "dsdv_period_s: must be positive");
  check(route_timeout_s > 0.0, "route_timeout_s: must be positive");
  check(ttl > 0, "ttl: must be positive");
  check(mobility_tick_s > 0.0, "mobility_tick_s: must be positive");
  check(sample_window_s > 0.0, "sample_window_s: must be positive");

  try {
    const ec::CurveParams params = resolve_curve();
    const unsigned k = resolved_kappa(params);
    // The longest safety payload is well under 64 bytes; the length block must hold it.
    check(crypto::payload_bits(params, k) >= 7,
          "curve: '" + curve + "' carries too few bits per block for safety messages");
  } catch (const ec::CurveError& e) {
    diag.push_back(std::string("curve: ") + e.what());
  }

  if (!diag.empty()) throw ConfigError(std::move(diag));
}

ec::CurveParams ScenarioConfig::resolve_curve() const {
  if (curve == "tiny23" || curve == "desk") return ec::builtin_curve(curve);
  if (curve != "custom") {
    throw ec::CurveError(ec::CurveError::Kind::InvalidParams, "expected tiny23, desk or custom, got '" + curve + "'");
  }
  if (!curve_q || !curve_a || !curve_b) {
    throw ec::CurveError(ec::CurveError::Kind::InvalidParams, "custom curve needs curve_q, curve_a and curve_b");
  }
  if (curve_gx.has_value() != curve_gy.has_value()) {
    throw ec::CurveError(ec::CurveError::Kind::InvalidParams, "curve_gx and curve_gy must be given together");
  }
  std::optional<ec::CurvePoint> g;
  if (curve_gx) g = ec::CurvePoint::affine(*curve_gx, *curve_gy);
  return ec::make_curve("custom", *curve_q, *curve_a, *curve_b, g, curve_n);
}

unsigned ScenarioConfig::resolved_kappa(const ec::CurveParams& params) const {
  return kappa != 0 ? kappa : crypto::default_kappa(params);
}

std::vector<NodeId> ScenarioConfig::resolve_malicious() const {
  if (!malicious_ids.empty()) {
    std::vector<NodeId> out = malicious_ids;
    std::sort(out.begin(), out.end());
    return out;
  }
  std::uint32_t count = malicious_count;
  if (malicious_fraction) {
    count = static_cast<std::uint32_t>(std::lround(*malicious_fraction * n_vehicles));
  }
  count = std::min(count, n_vehicles);
  // Partial Fisher-Yates on a dedicated stream.
  std::vector<NodeId> ids(n_vehicles);
  for (NodeId i = 0; i < n_vehicles; ++i) ids[i] = i;
  Rng rng(seed, "malicious");
  for (std::uint32_t i = 0; i < count; ++i) {
    std::swap(ids[i], ids[i + rng.below(n_vehicles - i)]);
  }
  std::vector<NodeId> out(ids.begin(), ids.begin() + count);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> ScenarioConfig::to_entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(*this));
  return out;
}

std::string ScenarioConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : to_entries()) out += k + " = " + v + "\n";
  return out;
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig config;
  std::vector<std::string> diag;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      diag.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    try {
      config.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      for (const auto& d : e.diagnostics()) diag.push_back("line " + std::to_string(line_no) + ": " + d);
    }
  }
  if (!diag.empty()) throw ConfigError(std::move(diag));
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({"cannot read config file '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void apply_override(ScenarioConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError({"override '" + std::string(assignment) + "' is not KEY=VALUE"});
  }
  config.set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

} // namespace vtsim
