#pragma once

#include <limits>
#include <span>

#include "mnsim/geometry.hpp"
#include "mnsim/rng.hpp"
#include "mnsim/types.hpp"

namespace mnsim {

/// Physical-layer constants. The wall/floor penetration values and the
/// Shannon-curve bounds are modelling assumptions and can be overridden in
/// the scenario config.
struct RadioParams {
  double shadowing_sigma_db = 6.0;
  double shadowing_decorrelation_m = 20.0;
  double noise_density_dbm_hz = -174.0;
  double ue_noise_figure_db = 9.0;
  double sinr_min_db = -10.0;
  double max_spectral_eff_bps_hz = 4.8;
  double shannon_attenuation = 0.75;
  double exterior_wall_loss_db = 10.0;
  double interior_wall_loss_db = 5.0;
  double floor_loss_db = 15.0;
  double ue_height_m = 1.5;
  double bs_height_outdoor_m = 30.0;
  double bs_height_indoor_m = 3.0;
  double cost231_metro_correction_db = 3.0;
  double outdoor_distance_floor_m = 20.0;
  double itu_power_loss_coefficient = 30.0;
  double itu_wall_interval_m = 5.0;
  double itu_wall_free_m = 10.0;
  double itu_wall_loss_db = 5.0;
  double indoor_distance_floor_m = 1.0;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

/// COST-231 Hata, urban, with the small/medium-city mobile antenna
/// correction and a metropolitan-area constant. Distances below the floor
/// clamp to it to keep the formula out of its near-field singularity.
double path_loss_cost231_urban(double freq_mhz, double dist_km, double bs_height_m,
                               double ue_height_m, double metro_correction_db = 3.0,
                               double distance_floor_km = 0.02);

/// ITU indoor propagation with a distance-driven internal wall count: one
/// wall per wall_interval_m beyond wall_free_m.
double path_loss_itu_indoor(double freq_mhz, double dist_m, double power_loss_coefficient = 30.0,
                            double wall_loss_db = 5.0, double wall_interval_m = 5.0,
                            double wall_free_m = 10.0, double distance_floor_m = 1.0);

/// Selects the propagation model from the user/BS indoor-outdoor matrix and
/// adds the corresponding wall and floor penetration losses. The BS side is
/// classified by its tier, the user side by position.
double dispatch_path_loss(Vec2 user_pos, const BaseStationSpec& bs, const Geometry& geom,
                          const RadioParams& params);

/// Per (user, BS) link: the correlated shadowing sample plus the most recent
/// path-loss/SINR evaluation.
struct LinkState {
  double shadowing_db = 0.0;
  double path_loss_db = std::numeric_limits<double>::quiet_NaN();
  double sinr_db = std::numeric_limits<double>::quiet_NaN();
  bool initialized = false;
};

/// First-order distance-decorrelated shadowing process:
///   new = rho * old + sqrt(1 - rho^2) * N(0, sigma),  rho = exp(-d / d_corr).
/// The marginal stays N(0, sigma^2) for any update sequence. The first call
/// on a link draws a fresh sample.
void update_shadowing(LinkState& link, double distance_moved_m, const RadioParams& params,
                      RandomStream& rng);

double thermal_noise_dbm(double bandwidth_hz, const RadioParams& params);

/// Received power with shadowing applied as extra loss.
inline double received_power_dbm(const BaseStationSpec& bs, const LinkState& link) {
  return bs.tx_power_dbm - link.path_loss_db - link.shadowing_db;
}

/// Downlink SINR in dB for one user against the serving BS. Interference
/// comes from every other BS of the same operator and tier (the co-channel
/// set); other operators and the other tier are on different carriers.
/// `links` holds the user's link state per BS id and must be current for the
/// serving BS and all its co-channel cells.
double sinr_db(std::size_t serving_bs, std::span<const BaseStationSpec> base_stations,
               std::span<const LinkState> links, const RadioParams& params);

/// Bounded and truncated Shannon curve: zero below the SINR floor, capped at
/// the maximum spectral efficiency above.
double spectral_efficiency(double sinr_db, const RadioParams& params);

double throughput_bps(double bandwidth_hz, double sinr_db, const RadioParams& params);

}  // namespace mnsim
