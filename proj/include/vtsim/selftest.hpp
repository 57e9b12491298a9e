#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "vtsim/curve.hpp"

namespace vtsim {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::uint64_t checks = 0;
  std::string detail; // first failure, if any
};

/// Exhaustive checks over a small curve: parameter sanity, field inverses,
/// group laws over all pairs and triples, scalar multiplication against
/// repeated addition, ElGamal round trips, ECDH agreement and challenge
/// response soundness.
std::vector<SuiteResult> run_selftest(const ec::CurveParams& curve);

void print_selftest(const std::vector<SuiteResult>& results, std::ostream& out);

} // namespace vtsim
