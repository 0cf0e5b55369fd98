#include "mnsim/mobility.hpp"

#include <cmath>
#include <numbers>

namespace mnsim {

Flight sample_flight(RandomStream& rng, const MobilityParams& params) {
  Flight f;
  f.length_m = rng.truncated_pareto(params.flight_exponent, params.flight_min_m,
                                    params.flight_max_m);
  f.direction_rad = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return f;
}

namespace {
double fold(double v, double lo, double hi) {
  const double w = hi - lo;
  double t = std::fmod(v - lo, 2.0 * w);
  if (t < 0.0) t += 2.0 * w;
  return lo + (t <= w ? t : 2.0 * w - t);
}
}  // namespace

Vec2 reflect_into(Vec2 p, const Rect& r) {
  return {fold(p.x, r.min_x, r.max_x), fold(p.y, r.min_y, r.max_y)};
}

MobilityState initial_mobility_state(RandomStream& rng, const Rect& movement,
                                     const MobilityParams& params) {
  MobilityState s;
  s.position = {rng.uniform(movement.min_x, movement.max_x),
                rng.uniform(movement.min_y, movement.max_y)};
  s.phase = MobilityState::Phase::Paused;
  s.pause_remaining_s = rng.uniform(0.0, params.pause_s);
  return s;
}

double mobility_step(MobilityState& state, const Geometry& geom, const MobilityParams& params,
                     RandomStream& rng) {
  if (state.phase == MobilityState::Phase::Paused) {
    state.pause_remaining_s -= 1.0;
    if (state.pause_remaining_s <= 0.0) {
      const Flight f = sample_flight(rng, params);
      const Vec2 raw = state.position + Vec2{std::cos(f.direction_rad) * f.length_m,
                                             std::sin(f.direction_rad) * f.length_m};
      state.target = reflect_into(raw, geom.movement);
      state.phase = MobilityState::Phase::Flying;
    }
    return 0.0;
  }

  const double speed = geom.is_indoor(state.position) ? params.speed_indoor_mps
                                                      : params.speed_outdoor_mps;
  const Vec2 delta = state.target - state.position;
  const double remaining = delta.norm();
  if (remaining <= speed) {
    state.position = state.target;
    state.phase = MobilityState::Phase::Paused;
    state.pause_remaining_s = params.pause_s;
    return remaining;
  }
  state.position = state.position + delta * (speed / remaining);
  return speed;
}

}  // namespace mnsim
