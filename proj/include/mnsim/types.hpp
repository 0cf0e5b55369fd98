#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mnsim/geometry.hpp"

namespace mnsim {

enum class Tier { OutdoorMacro, IndoorSmall };

enum class Scheme { EqualResource, ThroughputEqualization };

/// User types by contract count and multihoming capability.
enum class UserType { OneC, TwoC, TwoCMh, ThreeC, ThreeCMh };

inline constexpr int kNumUserTypes = 5;
inline constexpr std::array<UserType, kNumUserTypes> kAllUserTypes = {
    UserType::OneC, UserType::TwoC, UserType::TwoCMh, UserType::ThreeC, UserType::ThreeCMh};

inline int contract_count(UserType t) {
  switch (t) {
    case UserType::OneC: return 1;
    case UserType::TwoC:
    case UserType::TwoCMh: return 2;
    case UserType::ThreeC:
    case UserType::ThreeCMh: return 3;
  }
  throw std::logic_error("contract_count: bad user type");
}

inline bool is_multihoming(UserType t) {
  return t == UserType::TwoCMh || t == UserType::ThreeCMh;
}

inline const char* user_type_name(UserType t) {
  switch (t) {
    case UserType::OneC: return "1C";
    case UserType::TwoC: return "2C-NMH";
    case UserType::TwoCMh: return "2C-MH";
    case UserType::ThreeC: return "3C-NMH";
    case UserType::ThreeCMh: return "3C-MH";
  }
  throw std::logic_error("user_type_name: bad user type");
}

UserType user_type_from_name(const std::string& name);

inline const char* tier_name(Tier t) {
  return t == Tier::OutdoorMacro ? "outdoor-macro" : "indoor-small";
}

inline const char* scheme_name(Scheme s) {
  return s == Scheme::EqualResource ? "er" : "te";
}

struct BaseStationSpec {
  int operator_id = 0;
  Vec2 position;
  Tier tier = Tier::OutdoorMacro;
  double tx_power_dbm = 37.0;
  double carrier_center_ghz = 2.1;
  double carrier_bandwidth_hz = 10e6;
  double height_m = 30.0;

  friend bool operator==(const BaseStationSpec&, const BaseStationSpec&) = default;
};

struct UserPopulationSpec {
  int total_users = 300;
  /// Fraction of the population per user type, in kAllUserTypes order.
  std::array<double, kNumUserTypes> type_fractions = {1.0, 0.0, 0.0, 0.0, 0.0};

  friend bool operator==(const UserPopulationSpec&, const UserPopulationSpec&) = default;
};

/// One user's identity within a run: its type and home operator. Contracts
/// are the home operator plus the next contract_count-1 operators cyclically.
struct UserSpec {
  UserType type = UserType::OneC;
  int home_operator = 0;
};

inline std::uint32_t contract_mask(const UserSpec& u, int num_operators) {
  std::uint32_t mask = 0;
  const int n = contract_count(u.type);
  for (int k = 0; k < n; ++k) mask |= 1u << ((u.home_operator + k) % num_operators);
  return mask;
}

}  // namespace mnsim
