#include "mnsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mnsim {

double path_loss_cost231_urban(double freq_mhz, double dist_km, double bs_height_m,
                               double ue_height_m, double metro_correction_db,
                               double distance_floor_km) {
  if (freq_mhz <= 0.0 || dist_km <= 0.0 || bs_height_m <= 0.0 || ue_height_m <= 0.0)
    throw std::invalid_argument("path_loss_cost231_urban: inputs must be positive");
  const double d = std::max(dist_km, distance_floor_km);
  const double log_f = std::log10(freq_mhz);
  const double log_hb = std::log10(bs_height_m);
  // small/medium-city mobile antenna correction
  const double a_hm = (1.1 * log_f - 0.7) * ue_height_m - (1.56 * log_f - 0.8);
  return 46.3 + 33.9 * log_f - 13.82 * log_hb - a_hm +
         (44.9 - 6.55 * log_hb) * std::log10(d) + metro_correction_db;
}

double path_loss_itu_indoor(double freq_mhz, double dist_m, double power_loss_coefficient,
                            double wall_loss_db, double wall_interval_m, double wall_free_m,
                            double distance_floor_m) {
  if (freq_mhz <= 0.0 || dist_m <= 0.0)
    throw std::invalid_argument("path_loss_itu_indoor: inputs must be positive");
  const double d = std::max(dist_m, distance_floor_m);
  const double walls = std::max(0.0, std::floor((d - wall_free_m) / wall_interval_m));
  return 20.0 * std::log10(freq_mhz) + power_loss_coefficient * std::log10(d) - 28.0 +
         walls * wall_loss_db;
}

double dispatch_path_loss(Vec2 user_pos, const BaseStationSpec& bs, const Geometry& geom,
                          const RadioParams& params) {
  const bool user_indoor = geom.is_indoor(user_pos);
  const bool bs_indoor = bs.tier == Tier::IndoorSmall;
  const double dist_m = distance(user_pos, bs.position);
  const double freq_mhz = bs.carrier_center_ghz * 1000.0;

  if (user_indoor && bs_indoor) {
    return path_loss_itu_indoor(freq_mhz, std::max(dist_m, params.indoor_distance_floor_m),
                                params.itu_power_loss_coefficient, params.itu_wall_loss_db,
                                params.itu_wall_interval_m, params.itu_wall_free_m,
                                params.indoor_distance_floor_m);
  }

  const double hata = path_loss_cost231_urban(
      freq_mhz, std::max(dist_m, params.outdoor_distance_floor_m) / 1000.0, bs.height_m,
      params.ue_height_m, params.cost231_metro_correction_db,
      params.outdoor_distance_floor_m / 1000.0);

  if (user_indoor) {
    // outdoor BS into the building: one external wall and one floor
    return hata + params.exterior_wall_loss_db + params.floor_loss_db;
  }
  if (bs_indoor) {
    // indoor BS out of the building: one external and one internal wall
    return hata + params.exterior_wall_loss_db + params.interior_wall_loss_db;
  }
  return hata;
}

void update_shadowing(LinkState& link, double distance_moved_m, const RadioParams& params,
                      RandomStream& rng) {
  if (distance_moved_m < 0.0)
    throw std::invalid_argument("update_shadowing: negative distance");
  if (!link.initialized) {
    link.shadowing_db = rng.normal(0.0, params.shadowing_sigma_db);
    link.initialized = true;
    return;
  }
  const double rho = std::exp(-distance_moved_m / params.shadowing_decorrelation_m);
  const double innovation = rng.normal(0.0, params.shadowing_sigma_db);
  link.shadowing_db = rho * link.shadowing_db + std::sqrt(1.0 - rho * rho) * innovation;
}

double thermal_noise_dbm(double bandwidth_hz, const RadioParams& params) {
  return params.noise_density_dbm_hz + 10.0 * std::log10(bandwidth_hz) +
         params.ue_noise_figure_db;
}

namespace {
double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
}  // namespace

double sinr_db(std::size_t serving_bs, std::span<const BaseStationSpec> base_stations,
               std::span<const LinkState> links, const RadioParams& params) {
  const BaseStationSpec& serving = base_stations[serving_bs];
  const double signal_mw = dbm_to_mw(received_power_dbm(serving, links[serving_bs]));
  double interference_mw = 0.0;
  for (std::size_t j = 0; j < base_stations.size(); ++j) {
    if (j == serving_bs) continue;
    const BaseStationSpec& other = base_stations[j];
    if (other.operator_id != serving.operator_id || other.tier != serving.tier) continue;
    interference_mw += dbm_to_mw(received_power_dbm(other, links[j]));
  }
  const double noise_mw = dbm_to_mw(thermal_noise_dbm(serving.carrier_bandwidth_hz, params));
  return 10.0 * std::log10(signal_mw / (interference_mw + noise_mw));
}

double spectral_efficiency(double sinr_db, const RadioParams& params) {
  if (sinr_db < params.sinr_min_db) return 0.0;
  const double eff =
      params.shannon_attenuation * std::log2(1.0 + std::pow(10.0, sinr_db / 10.0));
  return std::min(eff, params.max_spectral_eff_bps_hz);
}

double throughput_bps(double bandwidth_hz, double sinr_db, const RadioParams& params) {
  if (bandwidth_hz < 0.0) throw std::invalid_argument("throughput_bps: negative bandwidth");
  return bandwidth_hz * spectral_efficiency(sinr_db, params);
}

}  // namespace mnsim
