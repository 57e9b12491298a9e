#pragma once

#include <cstdint>

namespace vtsim {

using NodeId = std::uint32_t;

/// Simulation clock in integer microseconds; converts to seconds only at the
/// edges (trace output, trust timestamps).
using SimTime = std::int64_t;

inline constexpr SimTime kMicrosPerSecond = 1'000'000;

constexpr SimTime from_seconds(double s) noexcept {
  return static_cast<SimTime>(s * static_cast<double>(kMicrosPerSecond) + (s >= 0 ? 0.5 : -0.5));
}
constexpr double to_seconds(SimTime t) noexcept {
  return static_cast<double>(t) / static_cast<double>(kMicrosPerSecond);
}

} // namespace vtsim
