#include "mnsim/access.hpp"

#include <numeric>
#include <stdexcept>

namespace mnsim {

double allocate_er(int user_count, double bandwidth_hz) {
  if (user_count <= 0) throw std::invalid_argument("allocate_er: no users to allocate");
  if (bandwidth_hz < 0.0) throw std::invalid_argument("allocate_er: negative bandwidth");
  return bandwidth_hz / user_count;
}

std::vector<double> allocate_te(std::span<const double> efficiencies, double bandwidth_hz) {
  if (bandwidth_hz < 0.0) throw std::invalid_argument("allocate_te: negative bandwidth");
  std::vector<double> shares(efficiencies.size(), 0.0);
  double inverse_sum = 0.0;
  for (double e : efficiencies)
    if (e > 0.0) inverse_sum += 1.0 / e;
  if (inverse_sum <= 0.0) return shares;  // nobody allocatable
  for (std::size_t i = 0; i < efficiencies.size(); ++i) {
    if (efficiencies[i] > 0.0)
      shares[i] = bandwidth_hz * (1.0 / efficiencies[i]) / inverse_sum;
  }
  return shares;
}

double estimate_throughput(const BsLoad& load, double bandwidth_hz, double efficiency_bps_hz,
                           Scheme scheme) {
  if (efficiency_bps_hz <= 0.0) return 0.0;
  if (scheme == Scheme::EqualResource)
    return bandwidth_hz / (load.count + 1) * efficiency_bps_hz;
  // TE: everyone at the BS ends up with the same throughput
  return bandwidth_hz / (load.inverse_eff_sum + 1.0 / efficiency_bps_hz);
}

namespace {

struct PairChoice {
  int first = -1;
  int second = -1;  // -1 when only a single BS is usable
  double estimate = -1.0;
};

}  // namespace

Assignment select_attachments(std::span<const SelectionUser> users,
                              std::span<const BaseStationSpec> base_stations,
                              Scheme scheme, bool mh_require_distinct_operators,
                              int total_users, RandomStream& order_rng) {
  const std::size_t num_bs = base_stations.size();
  Assignment out;
  out.attached_users.resize(num_bs);
  out.serving.resize(total_users);

  std::vector<std::size_t> order(users.size());
  std::iota(order.begin(), order.end(), 0);
  order_rng.shuffle(order);

  std::vector<BsLoad> load(num_bs);
  // (user index, bs) picks, committed in selection order
  std::vector<std::vector<int>> picks(users.size());

  auto commit = [&](std::size_t user_idx, int bs) {
    const SelectionUser& u = users[user_idx];
    load[bs].count += 1;
    load[bs].inverse_eff_sum += 1.0 / u.efficiency[bs];
    out.attached_users[bs].push_back(u.user_id);
    picks[user_idx].push_back(bs);
  };

  for (std::size_t idx : order) {
    const SelectionUser& u = users[idx];
    if (!u.multihoming) {
      int best = -1;
      double best_est = 0.0;
      for (std::size_t b = 0; b < num_bs; ++b) {
        if (u.efficiency[b] <= 0.0) continue;
        const double est = estimate_throughput(load[b], base_stations[b].carrier_bandwidth_hz,
                                               u.efficiency[b], scheme);
        if (est > best_est || best < 0) {
          best = static_cast<int>(b);
          best_est = est;
        }
      }
      if (best >= 0) commit(idx, best);
      continue;
    }

    // multihoming: exhaustive search over single BSs and distinct pairs
    std::vector<double> est(num_bs, 0.0);
    PairChoice choice;
    for (std::size_t b = 0; b < num_bs; ++b) {
      if (u.efficiency[b] <= 0.0) continue;
      est[b] = estimate_throughput(load[b], base_stations[b].carrier_bandwidth_hz,
                                   u.efficiency[b], scheme);
      if (choice.second < 0 && est[b] > choice.estimate) {
        choice.first = static_cast<int>(b);
        choice.estimate = est[b];
      }
    }
    for (std::size_t b1 = 0; b1 < num_bs; ++b1) {
      if (u.efficiency[b1] <= 0.0) continue;
      for (std::size_t b2 = b1 + 1; b2 < num_bs; ++b2) {
        if (u.efficiency[b2] <= 0.0) continue;
        if (mh_require_distinct_operators &&
            base_stations[b1].operator_id == base_stations[b2].operator_id)
          continue;
        const double sum = est[b1] + est[b2];
        if (sum > choice.estimate) {
          choice = {static_cast<int>(b1), static_cast<int>(b2), sum};
        }
      }
    }
    if (choice.first >= 0) commit(idx, choice.first);
    if (choice.second >= 0) commit(idx, choice.second);
  }

  // final per-BS allocation over the attached sets
  std::vector<std::size_t> user_index_by_id(total_users, SIZE_MAX);
  for (std::size_t i = 0; i < users.size(); ++i)
    user_index_by_id[users[i].user_id] = i;

  for (std::size_t b = 0; b < num_bs; ++b) {
    const auto& ids = out.attached_users[b];
    if (ids.empty()) continue;
    const double bandwidth = base_stations[b].carrier_bandwidth_hz;
    std::vector<double> effs(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k)
      effs[k] = users[user_index_by_id[ids[k]]].efficiency[b];

    std::vector<double> shares;
    if (scheme == Scheme::EqualResource) {
      shares.assign(ids.size(), allocate_er(static_cast<int>(ids.size()), bandwidth));
    } else {
      shares = allocate_te(effs, bandwidth);
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const SelectionUser& u = users[user_index_by_id[ids[k]]];
      Attachment a;
      a.bs_index = static_cast<int>(b);
      a.bandwidth_hz = shares[k];
      a.sinr_db = u.sinr_db[b];
      a.efficiency_bps_hz = effs[k];
      a.throughput_bps = shares[k] * effs[k];
      out.serving[ids[k]].push_back(a);
    }
  }
  return out;
}

}  // namespace mnsim
