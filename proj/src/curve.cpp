#include "vtsim/curve.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace vtsim::ec {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept {
  if (q <= 0xFFFFFFFFULL) return a * b % q;
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) noexcept {
  std::uint64_t result = 1 % q;
  base %= q;
  while (exp != 0) {
    if (exp & 1U) result = mul_mod(result, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1U;
  }
  return result;
}

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  // These bases are deterministic for every 64-bit n.
  for (std::uint64_t base : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(base, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t f = 2; f <= n / f; f += (f == 2 ? 1 : 2)) {
    if (n % f == 0) {
      out.push_back(f);
      while (n % f == 0) n /= f;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

FieldElement FieldElement::operator+(const FieldElement& o) const noexcept {
  std::uint64_t s = value_ + o.value_;
  if (s >= modulus_ || s < value_) s -= modulus_;
  return FieldElement{s, modulus_};
}

FieldElement FieldElement::operator-(const FieldElement& o) const noexcept {
  return FieldElement{value_ >= o.value_ ? value_ - o.value_ : modulus_ - (o.value_ - value_),
                      modulus_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const noexcept {
  return FieldElement{mul_mod(value_, o.value_, modulus_), modulus_};
}

FieldElement FieldElement::operator-() const noexcept {
  return FieldElement{value_ == 0 ? 0 : modulus_ - value_, modulus_};
}

FieldElement field_inv(const FieldElement& x) {
  if (x.is_zero()) throw CurveError(CurveError::Kind::ZeroInverse, "inverse of zero");
  if (x.modulus() < (std::uint64_t{1} << 62)) {
    std::int64_t r0 = static_cast<std::int64_t>(x.modulus()), r1 = static_cast<std::int64_t>(x.value());
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
      const std::int64_t quot = r0 / r1;
      std::int64_t tmp = r0 - quot * r1;
      r0 = r1;
      r1 = tmp;
      tmp = t0 - quot * t1;
      t0 = t1;
      t1 = tmp;
    }
    if (t0 < 0) t0 += static_cast<std::int64_t>(x.modulus());
    return FieldElement{static_cast<std::uint64_t>(t0), x.modulus()};
  }
  // Extended Euclid on signed 128-bit to avoid overflow for 64-bit moduli.
  __int128 r0 = x.modulus(), r1 = x.value();
  __int128 t0 = 0, t1 = 1;
  while (r1 != 0) {
    const __int128 quot = r0 / r1;
    const __int128 r2 = r0 - quot * r1;
    r0 = r1;
    r1 = r2;
    const __int128 t2 = t0 - quot * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t0 < 0) t0 += x.modulus();
  return FieldElement{static_cast<std::uint64_t>(t0), x.modulus()};
}

bool is_quadratic_residue(const FieldElement& x) {
  if (x.is_zero()) return true;
  return pow_mod(x.value(), (x.modulus() - 1) / 2, x.modulus()) == 1;
}

std::optional<FieldElement> field_sqrt(const FieldElement& x) {
  const std::uint64_t q = x.modulus();
  if (x.is_zero()) return x;
  if (!is_quadratic_residue(x)) return std::nullopt;

  std::uint64_t root = 0;
  if (q % 4 == 3) {
    root = pow_mod(x.value(), (q + 1) / 4, q);
  } else {
    std::uint64_t odd = q - 1;
    unsigned twos = 0;
    while ((odd & 1U) == 0) {
      odd >>= 1U;
      ++twos;
    }
    std::uint64_t z = 2;
    while (pow_mod(z, (q - 1) / 2, q) != q - 1) ++z;

    unsigned m = twos;
    std::uint64_t c = pow_mod(z, odd, q);
    std::uint64_t t = pow_mod(x.value(), odd, q);
    root = pow_mod(x.value(), (odd + 1) / 2, q);
    while (t != 1) {
      unsigned i = 0;
      std::uint64_t t2 = t;
      while (t2 != 1) {
        t2 = mul_mod(t2, t2, q);
        ++i;
      }
      std::uint64_t b = c;
      for (unsigned j = 0; j + 1 < m - i; ++j) b = mul_mod(b, b, q);
      m = i;
      c = mul_mod(b, b, q);
      t = mul_mod(t, c, q);
      root = mul_mod(root, b, q);
    }
  }
  return FieldElement{std::min(root, q - root), q};
}

bool CurvePoint::operator<(const CurvePoint& o) const noexcept {
  if (infinity_ || o.infinity_) return infinity_ && !o.infinity_;
  return x_ != o.x_ ? x_ < o.x_ : y_ < o.y_;
}

std::string CurvePoint::to_string() const {
  if (infinity_) return "INF";
  return std::to_string(x_) + "," + std::to_string(y_);
}

namespace {

std::uint64_t parse_u64(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw CurveError(CurveError::Kind::ParseError, "bad integer '" + std::string(s) + "'");
  }
  return v;
}

} // namespace

CurvePoint CurvePoint::parse(std::string_view text) {
  if (text == "INF") return identity();
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw CurveError(CurveError::Kind::ParseError, "expected 'x,y' or 'INF', got '" + std::string(text) + "'");
  }
  return affine(parse_u64(text.substr(0, comma)), parse_u64(text.substr(comma + 1)));
}

bool is_singular(std::uint64_t q, std::uint64_t a, std::uint64_t b) noexcept {
  const FieldElement fa{a, q}, fb{b, q};
  const FieldElement disc = FieldElement{4, q} * fa * fa * fa + FieldElement{27, q} * fb * fb;
  return disc.is_zero();
}

void CurveParams::validate() const {
  using K = CurveError::Kind;
  if (q <= 3 || !is_prime(q)) throw CurveError(K::InvalidParams, "q must be a prime > 3");
  if (a >= q || b >= q) throw CurveError(K::InvalidParams, "a and b must lie in [0, q)");
  if (is_singular(q, a, b)) throw CurveError(K::SingularCurve, "4a^3 + 27b^2 = 0 (mod q)");
  if (generator.is_identity() || generator.x() >= q || generator.y() >= q || !is_on_curve(generator, *this)) {
    throw CurveError(K::InvalidParams, "generator " + generator.to_string() + " is not on the curve");
  }
  if (order < 2) throw CurveError(K::InvalidParams, "order must be >= 2");
  if (!scalar_mul(order, generator, *this).is_identity()) {
    throw CurveError(K::InvalidParams, "n * G is not the identity");
  }
  for (std::uint64_t f : prime_factors(order)) {
    if (scalar_mul(order / f, generator, *this).is_identity()) {
      throw CurveError(K::InvalidParams, "n is a multiple of the order of G");
    }
  }
}

bool is_on_curve(const CurvePoint& p, const CurveParams& params) noexcept {
  if (p.is_identity()) return true;
  if (p.x() >= params.q || p.y() >= params.q) return false;
  const FieldElement x = params.fe(p.x()), y = params.fe(p.y());
  return y * y == x * x * x + params.fe(params.a) * x + params.fe(params.b);
}

CurvePoint point_negate(const CurvePoint& p, const CurveParams& params) noexcept {
  if (p.is_identity()) return p;
  return CurvePoint::affine(p.x(), (-params.fe(p.y())).value());
}

CurvePoint point_double(const CurvePoint& p, const CurveParams& params) {
  if (p.is_identity() || p.y() == 0) return CurvePoint::identity();
  const FieldElement x = params.fe(p.x()), y = params.fe(p.y());
  const FieldElement slope =
      (params.fe(3) * x * x + params.fe(params.a)) * field_inv(params.fe(2) * y);
  const FieldElement x3 = slope * slope - x - x;
  const FieldElement y3 = slope * (x - x3) - y;
  return CurvePoint::affine(x3.value(), y3.value());
}

CurvePoint point_add(const CurvePoint& p, const CurvePoint& r, const CurveParams& params) {
  if (p.is_identity()) return r;
  if (r.is_identity()) return p;
  if (p.x() == r.x()) {
    // On-curve points sharing x are either equal or mutual negations.
    if (p.y() == r.y()) return point_double(p, params);
    return CurvePoint::identity();
  }
  const FieldElement x1 = params.fe(p.x()), y1 = params.fe(p.y());
  const FieldElement x2 = params.fe(r.x()), y2 = params.fe(r.y());
  const FieldElement slope = (y2 - y1) * field_inv(x2 - x1);
  const FieldElement x3 = slope * slope - x1 - x2;
  const FieldElement y3 = slope * (x1 - x3) - y1;
  return CurvePoint::affine(x3.value(), y3.value());
}

CurvePoint scalar_mul(Scalar k, const CurvePoint& p, const CurveParams& params) {
  CurvePoint acc = CurvePoint::identity();
  if (k == 0 || p.is_identity()) return acc;
  for (int bit = 63 - __builtin_clzll(k); bit >= 0; --bit) {
    acc = point_double(acc, params);
    if ((k >> bit) & 1U) acc = point_add(acc, p, params);
  }
  return acc;
}

PointEnumeration enumerate_points(std::uint64_t q, std::uint64_t a, std::uint64_t b) {
  using K = CurveError::Kind;
  if (q >= kScanLimit) {
    throw CurveError(K::CurveTooLarge, "q = " + std::to_string(q) + " exceeds the enumeration limit");
  }
  if (q <= 3 || !is_prime(q)) throw CurveError(K::InvalidParams, "q must be a prime > 3");
  if (is_singular(q, a % q, b % q)) throw CurveError(K::SingularCurve, "4a^3 + 27b^2 = 0 (mod q)");

  // smallest_root[s] = smallest y with y^2 = s, if any.
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> smallest_root(q, kNone);
  for (std::uint64_t y = 0; y < q; ++y) {
    auto& slot = smallest_root[mul_mod(y, y, q)];
    if (slot == kNone) slot = static_cast<std::uint32_t>(y);
  }

  PointEnumeration out;
  out.points.push_back(CurvePoint::identity());
  const FieldElement fa{a, q}, fb{b, q};
  for (std::uint64_t xv = 0; xv < q; ++xv) {
    const FieldElement x{xv, q};
    const std::uint64_t rhs = (x * x * x + fa * x + fb).value();
    const std::uint32_t y0 = smallest_root[rhs];
    if (y0 == kNone) continue;
    out.points.push_back(CurvePoint::affine(xv, y0));
    if (y0 != 0) out.points.push_back(CurvePoint::affine(xv, q - y0));
  }
  out.group_order = out.points.size();
  return out;
}

std::uint64_t point_order(const CurvePoint& p, std::uint64_t group_order, const CurveParams& params) {
  std::uint64_t order = group_order;
  for (std::uint64_t f : prime_factors(group_order)) {
    while (order % f == 0 && scalar_mul(order / f, p, params).is_identity()) order /= f;
  }
  return order;
}

CurveParams derive_curve(std::string name, std::uint64_t q, std::uint64_t a, std::uint64_t b) {
  const PointEnumeration all = enumerate_points(q, a, b);
  CurveParams params{std::move(name), q, a % q, b % q, CurvePoint::identity(), 0};
  for (std::size_t i = 1; i < all.points.size(); ++i) {
    const std::uint64_t ord = point_order(all.points[i], all.group_order, params);
    if (ord > params.order) {
      params.order = ord;
      params.generator = all.points[i];
      if (ord == all.group_order) break;
    }
  }
  return params;
}

CurveParams make_curve(std::string name, std::uint64_t q, std::uint64_t a, std::uint64_t b,
                       std::optional<CurvePoint> generator, std::optional<std::uint64_t> order) {
  CurveParams params;
  if (!generator) {
    params = derive_curve(std::move(name), q, a, b);
    if (order && *order != params.order) {
      throw CurveError(CurveError::Kind::InvalidParams, "given order does not match the derived generator");
    }
  } else {
    params = CurveParams{std::move(name), q, a, b, *generator, 0};
    if (order) {
      params.order = *order;
    } else {
      if (!is_on_curve(*generator, params)) {
        throw CurveError(CurveError::Kind::InvalidParams, "generator is not on the curve");
      }
      params.order = point_order(*generator, enumerate_points(q, a, b).group_order, params);
    }
  }
  params.validate();
  return params;
}

const CurveParams& tiny23() {
  static const CurveParams params{"tiny23", 23, 1, 1, CurvePoint::affine(0, 1), 28};
  return params;
}

const CurveParams& desk() {
  static const CurveParams params{"desk", 1048583, 3, 6, CurvePoint::affine(0, 405977), 1047667};
  return params;
}

const CurveParams& builtin_curve(std::string_view name) {
  if (name == "tiny23") return tiny23();
  if (name == "desk") return desk();
  throw CurveError(CurveError::Kind::InvalidParams, "unknown curve '" + std::string(name) + "'");
}

} // namespace vtsim::ec
