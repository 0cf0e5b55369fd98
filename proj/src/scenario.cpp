#include "mnsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace mnsim {

using Json = nlohmann::ordered_json;

UserType user_type_from_name(const std::string& name) {
  for (UserType t : kAllUserTypes)
    if (name == user_type_name(t)) return t;
  throw std::invalid_argument("unknown user type: " + name);
}

// ---------------------------------------------------------------------------
// builtin layouts

namespace {

constexpr double kWorldSide = 1600.0;     // 2.56 km^2
constexpr double kMovementSide = 300.0;   // 0.09 km^2
constexpr double kIndoorSide = 60.0;      // 3600 m^2
constexpr double kOutdoorRingRadius = 400.0;
constexpr double kIndoorRingRadius = 20.0;
constexpr int kNumOperators = 3;

Vec2 on_ring(Vec2 center, double radius, double angle_deg) {
  const double a = angle_deg * std::numbers::pi / 180.0;
  return {center.x + radius * std::cos(a), center.y + radius * std::sin(a)};
}

BaseStationSpec outdoor_bs(int op, Vec2 pos, const RadioParams& radio) {
  BaseStationSpec bs;
  bs.operator_id = op;
  bs.position = pos;
  bs.tier = Tier::OutdoorMacro;
  bs.tx_power_dbm = 37.0;
  bs.carrier_center_ghz = 2.1;
  bs.carrier_bandwidth_hz = 10e6;
  bs.height_m = radio.bs_height_outdoor_m;
  return bs;
}

BaseStationSpec indoor_bs(int op, Vec2 pos, const RadioParams& radio) {
  BaseStationSpec bs;
  bs.operator_id = op;
  bs.position = pos;
  bs.tier = Tier::IndoorSmall;
  bs.tx_power_dbm = 21.0;
  bs.carrier_center_ghz = 3.5;
  bs.carrier_bandwidth_hz = 10e6;
  bs.height_m = radio.bs_height_indoor_m;
  return bs;
}

// Outdoor BSs sit on a ring around the movement area, indoor BSs on a small
// ring inside the indoor area. Each entry is the pair of ring angles (in
// degrees) for one operator's two BSs.
using OperatorAngles = std::array<std::array<double, 2>, kNumOperators>;

std::vector<BaseStationSpec> ring_layout(const Geometry& geom, const RadioParams& radio,
                                         const OperatorAngles& outdoor,
                                         const OperatorAngles& indoor) {
  std::vector<BaseStationSpec> out;
  const Vec2 c = geom.world.center();
  for (int op = 0; op < kNumOperators; ++op)
    for (double angle : outdoor[op])
      out.push_back(outdoor_bs(op, on_ring(c, kOutdoorRingRadius, angle), radio));
  for (int op = 0; op < kNumOperators; ++op)
    for (double angle : indoor[op])
      out.push_back(indoor_bs(op, on_ring(c, kIndoorRingRadius, angle), radio));
  return out;
}

}  // namespace

ScenarioConfig builtin_scenario(int id) {
  if (id < 1 || id > 4) throw ConfigError("scenario", "unknown builtin scenario id");

  ScenarioConfig cfg;
  cfg.scenario_id = id;
  cfg.geometry = Geometry::squares(kWorldSide, kMovementSide, kIndoorSide);
  cfg.num_operators = kNumOperators;
  cfg.population.total_users = 300;
  cfg.population.type_fractions = {1.0, 0.0, 0.0, 0.0, 0.0};
  cfg.scheme = Scheme::EqualResource;
  cfg.duration_s = 50'000.0;
  cfg.seeds.resize(10);
  for (int i = 0; i < 10; ++i) cfg.seeds[i] = static_cast<std::uint64_t>(i + 1);
  cfg.mos_curves = MosCurveSet::defaults();

  // opposite-sides placement for the symmetric layouts
  const OperatorAngles opposite_outdoor = {{{0.0, 180.0}, {60.0, 240.0}, {120.0, 300.0}}};
  const OperatorAngles opposite_indoor = {{{30.0, 210.0}, {90.0, 270.0}, {150.0, 330.0}}};

  switch (id) {
    case 1:
      cfg.name = "baseline";
      cfg.base_stations = ring_layout(cfg.geometry, cfg.radio, opposite_outdoor, opposite_indoor);
      break;
    case 2: {
      cfg.name = "asymmetric";
      // each operator clustered on one side of the area instead of spread out
      const OperatorAngles clustered_outdoor = {{{0.0, 60.0}, {120.0, 180.0}, {240.0, 300.0}}};
      const OperatorAngles clustered_indoor = {{{30.0, 90.0}, {150.0, 210.0}, {270.0, 330.0}}};
      cfg.base_stations = ring_layout(cfg.geometry, cfg.radio, clustered_outdoor, clustered_indoor);
      break;
    }
    case 3: {
      cfg.name = "co-located";
      // two outdoor sites, every operator present at both
      const OperatorAngles colocated_outdoor = {{{90.0, 270.0}, {90.0, 270.0}, {90.0, 270.0}}};
      cfg.base_stations = ring_layout(cfg.geometry, cfg.radio, colocated_outdoor, opposite_indoor);
      break;
    }
    case 4: {
      cfg.name = "indoor-only-operator";
      // operator 2 keeps only its indoor BSs
      cfg.base_stations = ring_layout(cfg.geometry, cfg.radio, opposite_outdoor, opposite_indoor);
      std::erase_if(cfg.base_stations, [](const BaseStationSpec& bs) {
        return bs.operator_id == 2 && bs.tier == Tier::OutdoorMacro;
      });
      break;
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// population helpers

std::array<int, kNumUserTypes> type_counts(const UserPopulationSpec& population) {
  std::array<int, kNumUserTypes> counts{};
  std::array<double, kNumUserTypes> remainder{};
  int assigned = 0;
  for (int i = 0; i < kNumUserTypes; ++i) {
    const double exact = population.type_fractions[i] * population.total_users;
    counts[i] = static_cast<int>(std::floor(exact));
    remainder[i] = exact - counts[i];
    assigned += counts[i];
  }
  // largest-remainder rounding, ties by type order
  std::array<int, kNumUserTypes> order = {0, 1, 2, 3, 4};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (int k = 0; assigned < population.total_users; ++k, ++assigned)
    counts[order[k % kNumUserTypes]] += 1;
  return counts;
}

std::vector<UserSpec> build_user_roster(const ScenarioConfig& config) {
  std::vector<UserSpec> roster;
  roster.reserve(config.population.total_users);
  const auto counts = type_counts(config.population);
  for (int t = 0; t < kNumUserTypes; ++t) {
    for (int i = 0; i < counts[t]; ++i) {
      roster.push_back({kAllUserTypes[t], i % config.num_operators});
    }
  }
  return roster;
}

// ---------------------------------------------------------------------------
// validation

namespace {

void check(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

}  // namespace

void validate_scenario(const ScenarioConfig& config) {
  check(config.num_operators >= 1, "operators", "need at least one operator");
  check(config.geometry.valid(), "geometry",
        "areas must nest: indoor inside movement inside world, all with positive sides");
  check(config.duration_s >= 1.0, "duration_s", "duration must be at least one second");
  check(!config.seeds.empty(), "seeds", "need at least one seed");

  const auto& fr = config.population.type_fractions;
  check(config.population.total_users >= 0, "users.total", "negative user count");
  double sum = 0.0;
  for (int i = 0; i < kNumUserTypes; ++i) {
    check(fr[i] >= 0.0, "users.type_fractions", "fractions must be nonnegative");
    sum += fr[i];
  }
  check(std::abs(sum - 1.0) <= 1e-9, "users.type_fractions", "fractions must sum to 1");
  for (int i = 0; i < kNumUserTypes; ++i) {
    if (fr[i] > 0.0)
      check(contract_count(kAllUserTypes[i]) <= config.num_operators, "users.type_fractions",
            std::string(user_type_name(kAllUserTypes[i])) + " needs more operators than exist");
  }

  check(!config.base_stations.empty(), "base_stations", "need at least one base station");
  std::vector<int> per_operator(config.num_operators, 0);
  for (std::size_t i = 0; i < config.base_stations.size(); ++i) {
    const auto& bs = config.base_stations[i];
    const std::string field = "base_stations[" + std::to_string(i) + "]";
    check(bs.operator_id >= 0 && bs.operator_id < config.num_operators, field,
          "operator id out of range");
    check(bs.carrier_bandwidth_hz > 0.0, field, "carrier bandwidth must be positive");
    check(bs.carrier_center_ghz > 0.0, field, "carrier center must be positive");
    check(bs.height_m > 0.0, field, "height must be positive");
    if (bs.tier == Tier::OutdoorMacro) {
      check(config.geometry.world.contains(bs.position), field,
            "outdoor BS must sit inside the world extent");
    } else {
      check(config.geometry.indoor.contains(bs.position), field,
            "indoor BS must sit inside the indoor area");
    }
    per_operator[bs.operator_id] += 1;
  }
  for (int op = 0; op < config.num_operators; ++op)
    check(per_operator[op] > 0, "base_stations",
          "operator " + std::to_string(op) + " owns no base station");
  // same-tier cells share one carrier; the co-channel interference model
  // depends on it
  for (Tier tier : {Tier::OutdoorMacro, Tier::IndoorSmall}) {
    const BaseStationSpec* first = nullptr;
    for (const auto& bs : config.base_stations) {
      if (bs.tier != tier) continue;
      if (!first) {
        first = &bs;
        continue;
      }
      check(bs.carrier_center_ghz == first->carrier_center_ghz &&
                bs.carrier_bandwidth_hz == first->carrier_bandwidth_hz,
            "base_stations", std::string("all ") + tier_name(tier) +
                                 " cells must share one carrier and bandwidth");
    }
  }

  const auto& r = config.radio;
  check(r.shadowing_sigma_db >= 0.0, "radio.shadowing_sigma_db", "must be nonnegative");
  check(r.shadowing_decorrelation_m > 0.0, "radio.shadowing_decorrelation_m", "must be positive");
  check(r.exterior_wall_loss_db >= 0.0 && r.interior_wall_loss_db >= 0.0 &&
            r.floor_loss_db >= 0.0 && r.itu_wall_loss_db >= 0.0,
        "radio", "penetration losses must be nonnegative");
  check(r.max_spectral_eff_bps_hz > 0.0 && r.shannon_attenuation > 0.0, "radio",
        "spectral efficiency bounds must be positive");
  const double cap_sinr_db =
      10.0 * std::log10(std::pow(2.0, r.max_spectral_eff_bps_hz / r.shannon_attenuation) - 1.0);
  check(r.sinr_min_db < cap_sinr_db, "radio.sinr_min_db",
        "SINR floor must lie below the point where the efficiency cap binds");

  const auto& m = config.mobility;
  check(m.flight_exponent > 1.0, "mobility.flight_exponent", "must exceed 1");
  check(m.flight_min_m > 0.0 && m.flight_max_m > m.flight_min_m, "mobility",
        "flight length bounds must satisfy 0 < min < max");
  check(m.pause_s >= 0.0, "mobility.pause_s", "must be nonnegative");
  check(m.speed_outdoor_mps > 0.0 && m.speed_indoor_mps > 0.0, "mobility",
        "speeds must be positive");

  const auto& b = config.behavior;
  check(b.gap_shape > 0.0 && b.gap_scale_s > 0.0, "behavior", "gap distribution needs positive parameters");
  for (const WeibullSpec* w : {&b.web_duration, &b.video_duration, &b.facebook_duration})
    check(w->shape > 0.0 && w->scale > 0.0, "behavior", "Weibull parameters must be positive");
  double psum = 0.0;
  for (double p : b.video_resolution_probs) {
    check(p >= 0.0, "behavior.video_resolution_probs", "must be nonnegative");
    psum += p;
  }
  check(std::abs(psum - 1.0) <= 1e-9, "behavior.video_resolution_probs", "must sum to 1");
  check(b.grace_period_s >= 0, "behavior.grace_period_s", "must be nonnegative");

  try {
    config.mos_curves.validate();
    for (int res : config.behavior.video_resolutions) config.mos_curves.curve(AppType::Video, res);
  } catch (const std::exception& e) {
    throw ConfigError("mos_curves", e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON plumbing

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw ConfigError(field, msg);
}

void expect_keys(const Json& obj, const std::string& where,
                 std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }))
      fail(where.empty() ? key : where + "." + key, "unknown key");
  }
}

template <class T>
void read(const Json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    fail(where.empty() ? key : where + "." + std::string(key), e.what());
  }
}

void read_normal(const Json& obj, const std::string& where, const char* key, NormalSpec& out) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  const std::string path = where + "." + key;
  expect_keys(j, path, {"mean", "sigma"});
  read(j, path, "mean", out.mean);
  read(j, path, "sigma", out.sigma);
}

Json normal_json(const NormalSpec& n) { return Json{{"mean", n.mean}, {"sigma", n.sigma}}; }

MosCurve curve_from_json(const Json& j, const std::string& where) {
  MosCurve c;
  if (!j.is_array()) fail(where, "expected an array of [throughput_bps, mos] pairs");
  for (const auto& knot : j) {
    if (!knot.is_array() || knot.size() != 2) fail(where, "knots must be [throughput_bps, mos]");
    c.knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
  }
  if (!c.valid())
    fail(where, "knots must be strictly increasing in throughput with MOS in [1,5], non-decreasing");
  return c;
}

Json curve_to_json(const MosCurve& c) {
  Json j = Json::array();
  for (const auto& [thr, mos] : c.knots) j.push_back(Json::array({thr, mos}));
  return j;
}

void apply_mos_curves(const Json& j, const std::string& where, MosCurveSet& curves) {
  expect_keys(j, where, {"web", "facebook", "messaging", "maps", "video"});
  for (AppType t : {AppType::Web, AppType::Facebook, AppType::Messaging, AppType::Maps}) {
    if (j.contains(app_type_name(t)))
      curves.set_curve(t, 0, curve_from_json(j.at(app_type_name(t)),
                                             where + "." + app_type_name(t)));
  }
  if (j.contains("video")) {
    for (const auto& [res, curve] : j.at("video").items()) {
      int resolution = 0;
      try {
        resolution = std::stoi(res);
      } catch (...) {
        fail(where + ".video." + res, "resolution keys must be integers");
      }
      curves.set_curve(AppType::Video, resolution,
                       curve_from_json(curve, where + ".video." + res));
    }
  }
}

Json mos_curves_json(const MosCurveSet& curves) {
  Json j;
  Json video;
  for (const auto& [key, curve] : curves.curves()) {
    if (key.first == AppType::Video)
      video[std::to_string(key.second)] = curve_to_json(curve);
    else
      j[app_type_name(key.first)] = curve_to_json(curve);
  }
  j["video"] = video;
  return j;
}

void apply_radio(const Json& j, RadioParams& r) {
  const std::string w = "radio";
  expect_keys(j, w,
              {"shadowing_sigma_db", "shadowing_decorrelation_m", "noise_density_dbm_hz",
               "ue_noise_figure_db", "sinr_min_db", "max_spectral_eff_bps_hz",
               "shannon_attenuation", "exterior_wall_loss_db", "interior_wall_loss_db",
               "floor_loss_db", "ue_height_m", "bs_height_outdoor_m", "bs_height_indoor_m",
               "cost231_metro_correction_db", "outdoor_distance_floor_m",
               "itu_power_loss_coefficient", "itu_wall_interval_m", "itu_wall_free_m",
               "itu_wall_loss_db", "indoor_distance_floor_m"});
  read(j, w, "shadowing_sigma_db", r.shadowing_sigma_db);
  read(j, w, "shadowing_decorrelation_m", r.shadowing_decorrelation_m);
  read(j, w, "noise_density_dbm_hz", r.noise_density_dbm_hz);
  read(j, w, "ue_noise_figure_db", r.ue_noise_figure_db);
  read(j, w, "sinr_min_db", r.sinr_min_db);
  read(j, w, "max_spectral_eff_bps_hz", r.max_spectral_eff_bps_hz);
  read(j, w, "shannon_attenuation", r.shannon_attenuation);
  read(j, w, "exterior_wall_loss_db", r.exterior_wall_loss_db);
  read(j, w, "interior_wall_loss_db", r.interior_wall_loss_db);
  read(j, w, "floor_loss_db", r.floor_loss_db);
  read(j, w, "ue_height_m", r.ue_height_m);
  read(j, w, "bs_height_outdoor_m", r.bs_height_outdoor_m);
  read(j, w, "bs_height_indoor_m", r.bs_height_indoor_m);
  read(j, w, "cost231_metro_correction_db", r.cost231_metro_correction_db);
  read(j, w, "outdoor_distance_floor_m", r.outdoor_distance_floor_m);
  read(j, w, "itu_power_loss_coefficient", r.itu_power_loss_coefficient);
  read(j, w, "itu_wall_interval_m", r.itu_wall_interval_m);
  read(j, w, "itu_wall_free_m", r.itu_wall_free_m);
  read(j, w, "itu_wall_loss_db", r.itu_wall_loss_db);
  read(j, w, "indoor_distance_floor_m", r.indoor_distance_floor_m);
}

Json radio_json(const RadioParams& r) {
  return Json{{"shadowing_sigma_db", r.shadowing_sigma_db},
              {"shadowing_decorrelation_m", r.shadowing_decorrelation_m},
              {"noise_density_dbm_hz", r.noise_density_dbm_hz},
              {"ue_noise_figure_db", r.ue_noise_figure_db},
              {"sinr_min_db", r.sinr_min_db},
              {"max_spectral_eff_bps_hz", r.max_spectral_eff_bps_hz},
              {"shannon_attenuation", r.shannon_attenuation},
              {"exterior_wall_loss_db", r.exterior_wall_loss_db},
              {"interior_wall_loss_db", r.interior_wall_loss_db},
              {"floor_loss_db", r.floor_loss_db},
              {"ue_height_m", r.ue_height_m},
              {"bs_height_outdoor_m", r.bs_height_outdoor_m},
              {"bs_height_indoor_m", r.bs_height_indoor_m},
              {"cost231_metro_correction_db", r.cost231_metro_correction_db},
              {"outdoor_distance_floor_m", r.outdoor_distance_floor_m},
              {"itu_power_loss_coefficient", r.itu_power_loss_coefficient},
              {"itu_wall_interval_m", r.itu_wall_interval_m},
              {"itu_wall_free_m", r.itu_wall_free_m},
              {"itu_wall_loss_db", r.itu_wall_loss_db},
              {"indoor_distance_floor_m", r.indoor_distance_floor_m}};
}

void apply_mobility(const Json& j, MobilityParams& m) {
  const std::string w = "mobility";
  expect_keys(j, w, {"flight_exponent", "flight_min_m", "flight_max_m", "pause_s",
                     "speed_outdoor_mps", "speed_indoor_mps"});
  read(j, w, "flight_exponent", m.flight_exponent);
  read(j, w, "flight_min_m", m.flight_min_m);
  read(j, w, "flight_max_m", m.flight_max_m);
  read(j, w, "pause_s", m.pause_s);
  read(j, w, "speed_outdoor_mps", m.speed_outdoor_mps);
  read(j, w, "speed_indoor_mps", m.speed_indoor_mps);
}

Json mobility_json(const MobilityParams& m) {
  return Json{{"flight_exponent", m.flight_exponent}, {"flight_min_m", m.flight_min_m},
              {"flight_max_m", m.flight_max_m},       {"pause_s", m.pause_s},
              {"speed_outdoor_mps", m.speed_outdoor_mps},
              {"speed_indoor_mps", m.speed_indoor_mps}};
}

void apply_behavior(const Json& j, BehaviorParams& b) {
  const std::string w = "behavior";
  expect_keys(j, w,
              {"activity_rate_success", "activity_rate_failure", "continue_prob_completed",
               "continue_prob_abandoned", "type_weights", "gap_shape", "gap_scale_s",
               "web_duration", "video_duration", "facebook_duration", "messaging_duration",
               "maps_duration", "video_resolutions", "video_resolution_probs",
               "abandon_intercept", "abandon_mos_slope", "abandon_mos_threshold",
               "grace_period_s", "mos_curves_file"});
  read_normal(j, w, "activity_rate_success", b.activity_rate_success);
  read_normal(j, w, "activity_rate_failure", b.activity_rate_failure);
  read_normal(j, w, "continue_prob_completed", b.continue_prob_completed);
  read_normal(j, w, "continue_prob_abandoned", b.continue_prob_abandoned);
  if (j.contains("type_weights")) {
    const Json& tw = j.at("type_weights");
    expect_keys(tw, w + ".type_weights", {"web", "video", "facebook", "messaging", "maps"});
    for (int i = 0; i < kNumAppTypes; ++i)
      read_normal(tw, w + ".type_weights", app_type_name(kAllAppTypes[i]), b.type_weights[i]);
  }
  read(j, w, "gap_shape", b.gap_shape);
  read(j, w, "gap_scale_s", b.gap_scale_s);
  auto read_weibull = [&](const char* key, WeibullSpec& spec) {
    if (!j.contains(key)) return;
    const Json& d = j.at(key);
    expect_keys(d, w + "." + key, {"shape", "scale"});
    read(d, w + "." + key, "shape", spec.shape);
    read(d, w + "." + key, "scale", spec.scale);
  };
  auto read_lognormal = [&](const char* key, LogNormalSpec& spec) {
    if (!j.contains(key)) return;
    const Json& d = j.at(key);
    expect_keys(d, w + "." + key, {"mu", "sigma"});
    read(d, w + "." + key, "mu", spec.mu);
    read(d, w + "." + key, "sigma", spec.sigma);
  };
  read_weibull("web_duration", b.web_duration);
  read_weibull("video_duration", b.video_duration);
  read_weibull("facebook_duration", b.facebook_duration);
  read_lognormal("messaging_duration", b.messaging_duration);
  read_lognormal("maps_duration", b.maps_duration);
  read(j, w, "video_resolutions", b.video_resolutions);
  read(j, w, "video_resolution_probs", b.video_resolution_probs);
  read(j, w, "abandon_intercept", b.abandon_intercept);
  read(j, w, "abandon_mos_slope", b.abandon_mos_slope);
  read(j, w, "abandon_mos_threshold", b.abandon_mos_threshold);
  read(j, w, "grace_period_s", b.grace_period_s);
  read(j, w, "mos_curves_file", b.mos_curves_file);
}

Json behavior_json(const BehaviorParams& b) {
  Json tw;
  for (int i = 0; i < kNumAppTypes; ++i)
    tw[app_type_name(kAllAppTypes[i])] = normal_json(b.type_weights[i]);
  return Json{{"activity_rate_success", normal_json(b.activity_rate_success)},
              {"activity_rate_failure", normal_json(b.activity_rate_failure)},
              {"continue_prob_completed", normal_json(b.continue_prob_completed)},
              {"continue_prob_abandoned", normal_json(b.continue_prob_abandoned)},
              {"type_weights", tw},
              {"gap_shape", b.gap_shape},
              {"gap_scale_s", b.gap_scale_s},
              {"web_duration", Json{{"shape", b.web_duration.shape}, {"scale", b.web_duration.scale}}},
              {"video_duration",
               Json{{"shape", b.video_duration.shape}, {"scale", b.video_duration.scale}}},
              {"facebook_duration",
               Json{{"shape", b.facebook_duration.shape}, {"scale", b.facebook_duration.scale}}},
              {"messaging_duration",
               Json{{"mu", b.messaging_duration.mu}, {"sigma", b.messaging_duration.sigma}}},
              {"maps_duration", Json{{"mu", b.maps_duration.mu}, {"sigma", b.maps_duration.sigma}}},
              {"video_resolutions", b.video_resolutions},
              {"video_resolution_probs", b.video_resolution_probs},
              {"abandon_intercept", b.abandon_intercept},
              {"abandon_mos_slope", b.abandon_mos_slope},
              {"abandon_mos_threshold", b.abandon_mos_threshold},
              {"grace_period_s", b.grace_period_s}};
}

Tier tier_from_name(const std::string& name, const std::string& where) {
  if (name == "outdoor-macro") return Tier::OutdoorMacro;
  if (name == "indoor-small") return Tier::IndoorSmall;
  fail(where, "tier must be outdoor-macro or indoor-small");
}

std::vector<BaseStationSpec> base_stations_from_json(const Json& arr) {
  std::vector<BaseStationSpec> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const Json& j = arr[i];
    const std::string w = "base_stations[" + std::to_string(i) + "]";
    expect_keys(j, w, {"operator", "x", "y", "tier", "tx_power_dbm", "carrier_center_ghz",
                       "carrier_bandwidth_hz", "height_m"});
    BaseStationSpec bs;
    if (!j.contains("operator") || !j.contains("x") || !j.contains("y") || !j.contains("tier"))
      fail(w, "operator, x, y and tier are required");
    read(j, w, "operator", bs.operator_id);
    read(j, w, "x", bs.position.x);
    read(j, w, "y", bs.position.y);
    bs.tier = tier_from_name(j.at("tier").get<std::string>(), w + ".tier");
    if (bs.tier == Tier::IndoorSmall) {
      // tier defaults per the parameter table
      bs.tx_power_dbm = 21.0;
      bs.carrier_center_ghz = 3.5;
      bs.height_m = 3.0;
    }
    read(j, w, "tx_power_dbm", bs.tx_power_dbm);
    read(j, w, "carrier_center_ghz", bs.carrier_center_ghz);
    read(j, w, "carrier_bandwidth_hz", bs.carrier_bandwidth_hz);
    read(j, w, "height_m", bs.height_m);
    out.push_back(bs);
  }
  return out;
}

Json base_stations_json(const std::vector<BaseStationSpec>& bss) {
  Json arr = Json::array();
  for (const auto& bs : bss) {
    arr.push_back(Json{{"operator", bs.operator_id},
                       {"x", bs.position.x},
                       {"y", bs.position.y},
                       {"tier", tier_name(bs.tier)},
                       {"tx_power_dbm", bs.tx_power_dbm},
                       {"carrier_center_ghz", bs.carrier_center_ghz},
                       {"carrier_bandwidth_hz", bs.carrier_bandwidth_hz},
                       {"height_m", bs.height_m}});
  }
  return arr;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ConfigError("", std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "scenario document must be a JSON object");

  expect_keys(doc, "",
              {"scenario", "name", "scheme", "duration_s", "seeds", "geometry", "operators",
               "users", "base_stations", "radio", "mobility", "behavior", "access",
               "mos_curves"});

  int scenario_id = 1;
  read(doc, "", "scenario", scenario_id);
  ScenarioConfig cfg = builtin_scenario(scenario_id);

  read(doc, "", "name", cfg.name);
  if (doc.contains("scheme")) {
    const std::string s = doc.at("scheme").get<std::string>();
    if (s == "er")
      cfg.scheme = Scheme::EqualResource;
    else if (s == "te")
      cfg.scheme = Scheme::ThroughputEqualization;
    else
      fail("scheme", "must be er or te");
  }
  read(doc, "", "duration_s", cfg.duration_s);
  if (doc.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : doc.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
  }
  if (doc.contains("geometry")) {
    const Json& g = doc.at("geometry");
    expect_keys(g, "geometry", {"world_side_m", "movement_side_m", "indoor_side_m"});
    double world = cfg.geometry.world.width();
    double movement = cfg.geometry.movement.width();
    double indoor = cfg.geometry.indoor.width();
    read(g, "geometry", "world_side_m", world);
    read(g, "geometry", "movement_side_m", movement);
    read(g, "geometry", "indoor_side_m", indoor);
    cfg.geometry = Geometry::squares(world, movement, indoor);
  }
  read(doc, "", "operators", cfg.num_operators);
  if (doc.contains("users")) {
    const Json& u = doc.at("users");
    expect_keys(u, "users", {"total", "type_fractions"});
    read(u, "users", "total", cfg.population.total_users);
    if (u.contains("type_fractions")) {
      cfg.population.type_fractions = {0.0, 0.0, 0.0, 0.0, 0.0};
      for (const auto& [key, value] : u.at("type_fractions").items()) {
        UserType t;
        try {
          t = user_type_from_name(key);
        } catch (const std::exception&) {
          fail("users.type_fractions", "unknown user type " + key);
        }
        cfg.population.type_fractions[static_cast<int>(t)] = value.get<double>();
      }
    }
  }
  if (doc.contains("base_stations"))
    cfg.base_stations = base_stations_from_json(doc.at("base_stations"));
  if (doc.contains("radio")) apply_radio(doc.at("radio"), cfg.radio);
  if (doc.contains("mobility")) apply_mobility(doc.at("mobility"), cfg.mobility);
  if (doc.contains("behavior")) apply_behavior(doc.at("behavior"), cfg.behavior);
  if (doc.contains("access")) {
    const Json& a = doc.at("access");
    expect_keys(a, "access", {"mh_require_distinct_operators"});
    read(a, "access", "mh_require_distinct_operators", cfg.access.mh_require_distinct_operators);
  }

  // MOS knot resolution order: defaults, then a knot file, then inline knots.
  // The file is consumed at load time so the config is self-contained.
  if (!cfg.behavior.mos_curves_file.empty()) {
    std::ifstream in(cfg.behavior.mos_curves_file);
    if (!in) fail("behavior.mos_curves_file", "cannot open " + cfg.behavior.mos_curves_file);
    Json file_doc;
    try {
      file_doc = Json::parse(in);
    } catch (const Json::exception& e) {
      fail("behavior.mos_curves_file", std::string("parse error: ") + e.what());
    }
    apply_mos_curves(file_doc, "behavior.mos_curves_file", cfg.mos_curves);
    cfg.behavior.mos_curves_file.clear();
  }
  if (doc.contains("mos_curves")) apply_mos_curves(doc.at("mos_curves"), "mos_curves", cfg.mos_curves);

  validate_scenario(cfg);
  return cfg;
}

std::string serialize_scenario(const ScenarioConfig& config) {
  Json seeds = Json::array();
  for (auto s : config.seeds) seeds.push_back(s);
  Json fractions;
  for (int i = 0; i < kNumUserTypes; ++i)
    fractions[user_type_name(kAllUserTypes[i])] = config.population.type_fractions[i];

  Json doc{{"scenario", config.scenario_id},
           {"name", config.name},
           {"scheme", scheme_name(config.scheme)},
           {"duration_s", config.duration_s},
           {"seeds", seeds},
           {"geometry",
            Json{{"world_side_m", config.geometry.world.width()},
                 {"movement_side_m", config.geometry.movement.width()},
                 {"indoor_side_m", config.geometry.indoor.width()}}},
           {"operators", config.num_operators},
           {"users", Json{{"total", config.population.total_users}, {"type_fractions", fractions}}},
           {"base_stations", base_stations_json(config.base_stations)},
           {"radio", radio_json(config.radio)},
           {"mobility", mobility_json(config.mobility)},
           {"behavior", behavior_json(config.behavior)},
           {"access", Json{{"mh_require_distinct_operators", config.access.mh_require_distinct_operators}}},
           {"mos_curves", mos_curves_json(config.mos_curves)}};
  return doc.dump(2);
}

}  // namespace mnsim
