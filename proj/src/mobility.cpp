#include "vtsim/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace vtsim {

double distance(const Vec2& a, const Vec2& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

bool radio_in_range(const Vec2& a, const Vec2& b, double radio_range) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy <= radio_range * radio_range;
}

namespace {

Vec2 random_point(const Area& area, Rng& rng) {
  const double x = rng.uniform(0.0, area.width);
  const double y = rng.uniform(0.0, area.height);
  return {x, y};
}

Vec2 clamp_to(const Vec2& p, const Area& area) {
  return {std::clamp(p.x, 0.0, area.width), std::clamp(p.y, 0.0, area.height)};
}

} // namespace

MobilityState random_start(const Area& area, const SpeedRange& speeds, Rng& rng) {
  MobilityState s;
  s.position = random_point(area, rng);
  s.waypoint = random_point(area, rng);
  s.speed = rng.uniform(speeds.min, speeds.max);
  return s;
}

MobilityState step_mobility(const MobilityState& state, double dt, const Area& area,
                            const SpeedRange& speeds, Rng& rng) {
  MobilityState next = state;
  if (state.speed <= 0.0) return next;
  const double remaining = distance(state.position, state.waypoint);
  const double reach = state.speed * dt;
  if (reach >= remaining) {
    next.position = clamp_to(state.waypoint, area);
    next.waypoint = random_point(area, rng);
    next.speed = rng.uniform(speeds.min, speeds.max);
  } else {
    const double f = reach / remaining;
    next.position = clamp_to({state.position.x + f * (state.waypoint.x - state.position.x),
                              state.position.y + f * (state.waypoint.y - state.position.y)},
                             area);
  }
  return next;
}

} // namespace vtsim
