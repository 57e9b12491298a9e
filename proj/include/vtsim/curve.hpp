#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vtsim::ec {

using Scalar = std::uint64_t;

/// Largest modulus enumerate_points will scan.
inline constexpr std::uint64_t kScanLimit = std::uint64_t{1} << 24;

class CurveError : public std::runtime_error {
public:
  enum class Kind { ZeroInverse, CurveTooLarge, SingularCurve, InvalidParams, ParseError };

  CurveError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

// Raw modular helpers. Operands must already be reduced mod q.
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) noexcept;
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q) noexcept;
bool is_prime(std::uint64_t n) noexcept;
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// An element of GF(q), always reduced.
class FieldElement {
public:
  FieldElement(std::uint64_t value, std::uint64_t modulus)
      : value_(value % modulus), modulus_(modulus) {}

  std::uint64_t value() const noexcept { return value_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  bool is_zero() const noexcept { return value_ == 0; }

  FieldElement operator+(const FieldElement& o) const noexcept;
  FieldElement operator-(const FieldElement& o) const noexcept;
  FieldElement operator*(const FieldElement& o) const noexcept;
  FieldElement operator-() const noexcept;
  bool operator==(const FieldElement& o) const noexcept = default;

private:
  std::uint64_t value_;
  std::uint64_t modulus_;
};

/// Multiplicative inverse via the extended Euclidean algorithm.
/// Throws CurveError(ZeroInverse) for x = 0.
FieldElement field_inv(const FieldElement& x);

/// Euler's criterion; zero counts as a residue.
bool is_quadratic_residue(const FieldElement& x);

/// Smaller of the two square roots (Tonelli-Shanks), or nullopt for a
/// non-residue.
std::optional<FieldElement> field_sqrt(const FieldElement& x);

/// Identity (point at infinity) or an affine point.
class CurvePoint {
public:
  static CurvePoint identity() noexcept { return CurvePoint{}; }
  static CurvePoint affine(std::uint64_t x, std::uint64_t y) noexcept { return CurvePoint{x, y}; }

  bool is_identity() const noexcept { return infinity_; }
  std::uint64_t x() const noexcept { return x_; }
  std::uint64_t y() const noexcept { return y_; }

  bool operator==(const CurvePoint& o) const noexcept {
    return infinity_ == o.infinity_ && (infinity_ || (x_ == o.x_ && y_ == o.y_));
  }
  /// Identity sorts first, then (x, y) lexicographically.
  bool operator<(const CurvePoint& o) const noexcept;

  /// "x,y" or "INF".
  std::string to_string() const;
  static CurvePoint parse(std::string_view text);

private:
  CurvePoint() noexcept = default;
  CurvePoint(std::uint64_t x, std::uint64_t y) noexcept : infinity_(false), x_(x), y_(y) {}

  bool infinity_ = true;
  std::uint64_t x_ = 0;
  std::uint64_t y_ = 0;
};

/// Short Weierstrass curve y^2 = x^3 + ax + b over GF(q) with a generator of
/// order n.
struct CurveParams {
  std::string name;
  std::uint64_t q = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  CurvePoint generator = CurvePoint::identity();
  std::uint64_t order = 0;

  FieldElement fe(std::uint64_t v) const { return FieldElement{v, q}; }

  /// Checks every invariant (prime q > 3, non-singular, G on curve, n exact
  /// order of G). Throws CurveError.
  void validate() const;
};

bool is_singular(std::uint64_t q, std::uint64_t a, std::uint64_t b) noexcept;

bool is_on_curve(const CurvePoint& p, const CurveParams& params) noexcept;
CurvePoint point_negate(const CurvePoint& p, const CurveParams& params) noexcept;
CurvePoint point_add(const CurvePoint& p, const CurvePoint& r, const CurveParams& params);
CurvePoint point_double(const CurvePoint& p, const CurveParams& params);
/// Left-to-right double-and-add.
CurvePoint scalar_mul(Scalar k, const CurvePoint& p, const CurveParams& params);

struct PointEnumeration {
  std::vector<CurvePoint> points; // identity first, then sorted by (x, y)
  std::uint64_t group_order = 0;
};

/// Exhaustive scan of GF(q) x GF(q) via a table of squares. Rejects singular
/// curves and q >= kScanLimit.
PointEnumeration enumerate_points(std::uint64_t q, std::uint64_t a, std::uint64_t b);

/// Order of p given the order of the whole group.
std::uint64_t point_order(const CurvePoint& p, std::uint64_t group_order,
                          const CurveParams& params);

/// Builds params from (q, a, b) by enumeration: generator is the point of
/// maximal order with the smallest (x, y).
CurveParams derive_curve(std::string name, std::uint64_t q, std::uint64_t a, std::uint64_t b);

/// Custom curve: missing generator/order are recomputed (requires q within
/// the scan limit). Result is validated.
CurveParams make_curve(std::string name, std::uint64_t q, std::uint64_t a, std::uint64_t b,
                       std::optional<CurvePoint> generator, std::optional<std::uint64_t> order);

/// q = 23, a = 1, b = 1; group of order 28, cyclic.
const CurveParams& tiny23();
/// q = 1048583, a = 3, b = 6; group of prime order 1047667.
const CurveParams& desk();

/// "tiny23" or "desk"; throws CurveError(InvalidParams) otherwise.
const CurveParams& builtin_curve(std::string_view name);

} // namespace vtsim::ec
