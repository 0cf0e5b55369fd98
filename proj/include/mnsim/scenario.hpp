#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mnsim/behavior.hpp"
#include "mnsim/geometry.hpp"
#include "mnsim/mobility.hpp"
#include "mnsim/radio.hpp"
#include "mnsim/types.hpp"

namespace mnsim {

/// Raised for malformed or invalid scenario documents. `field()` names the
/// offending config entry when the problem is a failed invariant.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct AccessParams {
  bool mh_require_distinct_operators = false;
  friend bool operator==(const AccessParams&, const AccessParams&) = default;
};

/// A complete, validated simulation scenario. After load_scenario or
/// builtin_scenario the config is self-contained (all defaults resolved,
/// including the MOS knot tables) and immutable by convention: runs share it
/// read-only.
struct ScenarioConfig {
  int scenario_id = 1;  // builtin layout this config started from
  std::string name = "baseline";
  Geometry geometry;
  int num_operators = 3;
  std::vector<BaseStationSpec> base_stations;
  UserPopulationSpec population;
  Scheme scheme = Scheme::EqualResource;
  double duration_s = 50'000.0;  // tick = 1 s
  std::vector<std::uint64_t> seeds;
  RadioParams radio;
  MobilityParams mobility;
  BehaviorParams behavior;
  AccessParams access;
  MosCurveSet mos_curves;

  long ticks() const { return static_cast<long>(duration_s); }
};

/// Canonical layouts:
///   1 - three operators with outdoor/indoor BS pairs on opposite sides
///   2 - asymmetric layout (each operator clustered on one side)
///   3 - two outdoor sites, all three operators co-located at each
///   4 - operator 2 is indoor-only (its outdoor BSs removed)
ScenarioConfig builtin_scenario(int id);

/// Parses a JSON scenario document: starts from the builtin layout named by
/// its "scenario" key (default 1), applies overrides, validates everything.
ScenarioConfig load_scenario(const std::string& json_text);

/// Full-fidelity JSON form; load_scenario(serialize_scenario(c)) reproduces
/// the config exactly.
std::string serialize_scenario(const ScenarioConfig& config);

/// Throws ConfigError naming the failed field.
void validate_scenario(const ScenarioConfig& config);

/// Users per type from the population fractions (largest-remainder rounding).
std::array<int, kNumUserTypes> type_counts(const UserPopulationSpec& population);

/// The full user roster: type blocks in kAllUserTypes order, each split
/// round-robin over the operators so per-operator counts differ by at most
/// one within a type.
std::vector<UserSpec> build_user_roster(const ScenarioConfig& config);

}  // namespace mnsim
