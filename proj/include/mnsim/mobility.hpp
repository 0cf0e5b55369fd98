#pragma once

#include "mnsim/geometry.hpp"
#include "mnsim/rng.hpp"

namespace mnsim {

struct MobilityParams {
  double flight_exponent = 1.6;   // power-law density exponent
  double flight_min_m = 1.0;
  double flight_max_m = 300.0;
  double pause_s = 5.0;
  double speed_outdoor_mps = 2.0;
  double speed_indoor_mps = 0.2;

  friend bool operator==(const MobilityParams&, const MobilityParams&) = default;
};

struct Flight {
  double length_m = 0.0;
  double direction_rad = 0.0;
};

/// Truncated power-law flight length plus a uniform direction.
Flight sample_flight(RandomStream& rng, const MobilityParams& params);

/// Mirrors a point into the rectangle by folding across its edges.
Vec2 reflect_into(Vec2 p, const Rect& r);

struct MobilityState {
  enum class Phase { Paused, Flying };
  Vec2 position;
  Phase phase = Phase::Paused;
  double pause_remaining_s = 0.0;  // meaningful while paused
  Vec2 target;                     // meaningful while flying
};

/// Uniform position in the movement area, paused with a uniform residual so
/// the population does not start in lockstep.
MobilityState initial_mobility_state(RandomStream& rng, const Rect& movement,
                                     const MobilityParams& params);

/// Advances one 1 s tick of the walk: paused states count down and sample the
/// next flight on expiry (movement starts the following tick); flying states
/// advance toward the target at the speed of the current environment,
/// re-evaluated every tick. Returns the distance moved this tick.
double mobility_step(MobilityState& state, const Geometry& geom, const MobilityParams& params,
                     RandomStream& rng);

}  // namespace mnsim
