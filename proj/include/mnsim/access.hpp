#pragma once

#include <span>
#include <vector>

#include "mnsim/rng.hpp"
#include "mnsim/types.hpp"

namespace mnsim {

/// One user-to-BS attachment with its allocated bandwidth for this tick.
struct Attachment {
  int bs_index = -1;
  double bandwidth_hz = 0.0;
  double sinr_db = 0.0;
  double efficiency_bps_hz = 0.0;
  double throughput_bps = 0.0;
};

/// Per-tick mapping of active users to serving base stations. `serving` is
/// indexed by global user id; inactive or unattachable users have an empty
/// serving set. Multihoming users may hold two attachments.
struct Assignment {
  std::vector<std::vector<int>> attached_users;     // per BS, in attach order
  std::vector<std::vector<Attachment>> serving;     // per user id

  double user_throughput(int user_id) const {
    double sum = 0.0;
    for (const Attachment& a : serving[user_id]) sum += a.throughput_bps;
    return sum;
  }
};

/// Equal-resource share for one BS: every attached user gets B/n.
double allocate_er(int user_count, double bandwidth_hz);

/// Throughput-equalizing split: bandwidth inversely proportional to each
/// user's spectral efficiency, so all allocated users see the same
/// throughput. Zero-efficiency entries are excluded and receive 0.
std::vector<double> allocate_te(std::span<const double> efficiencies, double bandwidth_hz);

/// Load a BS accumulates while users pick it during sequential selection.
struct BsLoad {
  int count = 0;
  double inverse_eff_sum = 0.0;
};

/// The throughput a candidate would get by joining this BS now, under the
/// given scheme, accounting for the users already attached.
double estimate_throughput(const BsLoad& load, double bandwidth_hz, double efficiency_bps_hz,
                           Scheme scheme);

/// What the selector needs to know about one active user.
struct SelectionUser {
  int user_id = 0;
  bool multihoming = false;
  /// Per BS id: candidate SINR and efficiency. efficiency <= 0 marks the BS
  /// as unusable for this user (not under contract or below the SINR floor).
  std::vector<double> sinr_db;
  std::vector<double> efficiency;
};

/// Runs the per-tick randomized sequential selection: users are visited in a
/// fresh uniform permutation; each picks the accessible BS (or, for
/// multihoming users, the pair of distinct BSs, enumerated exhaustively)
/// with the best estimated throughput given all earlier picks. Final
/// bandwidths are then computed per scheme over the actual attached sets.
Assignment select_attachments(std::span<const SelectionUser> users,
                              std::span<const BaseStationSpec> base_stations,
                              Scheme scheme, bool mh_require_distinct_operators,
                              int total_users, RandomStream& order_rng);

}  // namespace mnsim
