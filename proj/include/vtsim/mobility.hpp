#pragma once

#include "vtsim/rng.hpp"

namespace vtsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Vec2&) const = default;
};

double distance(const Vec2& a, const Vec2& b) noexcept;

/// Unit-disk connectivity; a link at exactly radio_range is up.
bool radio_in_range(const Vec2& a, const Vec2& b, double radio_range) noexcept;

struct Area {
  double width = 1000.0;
  double height = 1000.0;
};

struct SpeedRange {
  double min = 0.0;
  double max = 0.0;
};

/// Random-waypoint state of one vehicle.
struct MobilityState {
  Vec2 position;
  Vec2 waypoint;
  double speed = 0.0; // m/s
};

/// Uniform position and waypoint, uniform speed.
MobilityState random_start(const Area& area, const SpeedRange& speeds, Rng& rng);

/// Moves toward the waypoint by at most speed * dt. On arrival the vehicle
/// stops at the waypoint for the rest of the step and draws the next waypoint
/// and speed.
MobilityState step_mobility(const MobilityState& state, double dt, const Area& area,
                            const SpeedRange& speeds, Rng& rng);

} // namespace vtsim
