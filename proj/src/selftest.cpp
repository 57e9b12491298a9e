#include "vtsim/selftest.hpp"

#include <cstdio>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "vtsim/crypto.hpp"

namespace vtsim {

namespace {

using ec::CurveParams;
using ec::CurvePoint;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Checker {
public:
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) throw Failure(what);
  }
  std::uint64_t checks = 0;
};

SuiteResult suite(const std::string& name, const std::function<void(Checker&)>& body) {
  Checker c;
  SuiteResult r{name, true, 0, ""};
  try {
    body(c);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  r.checks = c.checks;
  return r;
}

} // namespace

std::vector<SuiteResult> run_selftest(const CurveParams& curve) {
  std::vector<SuiteResult> out;

  out.push_back(suite("curve_params", [&](Checker& c) {
    curve.validate();
    const auto all = ec::enumerate_points(curve.q, curve.a, curve.b);
    c.expect(all.group_order % curve.order == 0, "order of G does not divide the group order");
    c.expect(ec::point_order(curve.generator, all.group_order, curve) == curve.order, "n is not the order of G");
  }));

  out.push_back(suite("field_inverse", [&](Checker& c) {
    for (std::uint64_t x = 1; x < curve.q; ++x) {
      const ec::FieldElement fx = curve.fe(x);
      const ec::FieldElement inv = ec::field_inv(fx);
      c.expect((fx * inv).value() == 1, "x * inv(x) != 1 for x = " + std::to_string(x));
      c.expect(ec::field_inv(inv) == fx, "inv(inv(x)) != x for x = " + std::to_string(x));
    }
  }));

  out.push_back(suite("group_laws", [&](Checker& c) {
    const auto pts = ec::enumerate_points(curve.q, curve.a, curve.b).points;
    const CurvePoint id = CurvePoint::identity();
    for (const auto& p : pts) {
      c.expect(ec::point_add(p, id, curve) == p, "identity is not neutral for " + p.to_string());
      c.expect(ec::point_add(p, ec::point_negate(p, curve), curve).is_identity(),
               "p + (-p) != identity for " + p.to_string());
      for (const auto& r : pts) {
        const CurvePoint s = ec::point_add(p, r, curve);
        c.expect(ec::is_on_curve(s, curve), "sum leaves the curve");
        c.expect(s == ec::point_add(r, p, curve), "addition is not commutative");
        for (const auto& t : pts) {
          c.expect(ec::point_add(s, t, curve) == ec::point_add(p, ec::point_add(r, t, curve), curve),
                   "addition is not associative");
        }
      }
    }
  }));

  out.push_back(suite("scalar_mul", [&](Checker& c) {
    CurvePoint acc = CurvePoint::identity();
    for (std::uint64_t k = 0; k <= curve.order; ++k) {
      c.expect(ec::scalar_mul(k, curve.generator, curve) == acc, "k*G differs from repeated addition at k = " +
                                                                     std::to_string(k));
      acc = ec::point_add(acc, curve.generator, curve);
    }
    c.expect(ec::scalar_mul(curve.order, curve.generator, curve).is_identity(), "n*G != identity");
  }));

  out.push_back(suite("elgamal_roundtrip", [&](Checker& c) {
    const auto pts = ec::enumerate_points(curve.q, curve.a, curve.b).points;
    const crypto::KeyPair receiver = crypto::keypair_from_private(curve.order / 2 + 1, curve);
    for (const auto& pm : pts) {
      for (ec::Scalar k = 1; k < curve.order; ++k) {
        const crypto::CipherPair ct = crypto::elgamal_encrypt(pm, receiver.public_key, k, curve);
        c.expect(crypto::elgamal_decrypt(ct, receiver.private_key, curve) == pm,
                 "round trip failed for " + pm.to_string() + " with k = " + std::to_string(k));
      }
    }
  }));

  out.push_back(suite("ecdh_agreement", [&](Checker& c) {
    for (ec::Scalar a = 1; a < curve.order; ++a) {
      const CurvePoint pa = ec::scalar_mul(a, curve.generator, curve);
      for (ec::Scalar b = 1; b < curve.order; ++b) {
        const CurvePoint pb = ec::scalar_mul(b, curve.generator, curve);
        c.expect(ec::scalar_mul(a, pb, curve) == ec::scalar_mul(b, pa, curve),
                 "a*(bG) != b*(aG) for a = " + std::to_string(a) + ", b = " + std::to_string(b));
      }
    }
  }));

  out.push_back(suite("auth_soundness", [&](Checker& c) {
    const crypto::KeyPair vehicle = crypto::keypair_from_private(curve.order > 3 ? 3 : 1, curve);
    for (ec::Scalar challenge = 1; challenge < curve.order; ++challenge) {
      if (std::gcd(challenge, curve.order) != 1) continue;
      const CurvePoint point = ec::scalar_mul(challenge, curve.generator, curve);
      for (ec::Scalar guess = 1; guess < curve.order; ++guess) {
        const bool accepted =
            crypto::auth_verify(crypto::auth_respond(guess, point, curve), challenge, vehicle.public_key, curve);
        c.expect(accepted == (guess == vehicle.private_key),
                 "scalar " + std::to_string(guess) + " misjudged under challenge " + std::to_string(challenge));
      }
    }
  }));

  return out;
}

void print_selftest(const std::vector<SuiteResult>& results, std::ostream& out) {
  char buf[160];
  for (const SuiteResult& r : results) {
    std::snprintf(buf, sizeof buf, "%-18s %s  (%llu checks)", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                  static_cast<unsigned long long>(r.checks));
    out << buf;
    if (!r.passed) out << "  " << r.detail;
    out << "\n";
  }
}

} // namespace vtsim
