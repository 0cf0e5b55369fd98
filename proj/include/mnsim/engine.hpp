#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mnsim/access.hpp"
#include "mnsim/behavior.hpp"
#include "mnsim/mobility.hpp"
#include "mnsim/scenario.hpp"

namespace mnsim {

/// Running per-user accumulators for one replication. Throughput and SINR
/// samples cover active-session seconds only; SINR additionally only while
/// single-homed users are attached (SINR of a multihoming user is undefined).
struct UserRecord {
  UserType type = UserType::OneC;
  int home_operator = 0;
  double throughput_sum_bps = 0.0;
  long active_seconds = 0;
  double sinr_sum_db = 0.0;
  long sinr_samples = 0;
  double score_sum = 0.0;
  long finished_sessions = 0;
  long completed_sessions = 0;
  long abandoned_sessions = 0;

  std::optional<double> mean_throughput_bps() const {
    if (active_seconds == 0) return std::nullopt;
    return throughput_sum_bps / active_seconds;
  }
  std::optional<double> mean_sinr_db() const {
    if (is_multihoming(type) || sinr_samples == 0) return std::nullopt;
    return sinr_sum_db / sinr_samples;
  }
  std::optional<double> mean_mos() const {
    if (finished_sessions == 0) return std::nullopt;
    return score_sum / finished_sessions;
  }
};

struct SessionLogEntry {
  int user_id = 0;
  long start_tick = 0;
  AppType app = AppType::Web;
  int resolution = 0;
  int planned_duration_s = 0;
  int elapsed_s = 0;
  bool abandoned = false;
  double score = 0.0;
};

struct RunResult {
  std::uint64_t seed = 0;
  long ticks = 0;
  std::vector<UserRecord> users;
  std::vector<SessionLogEntry> sessions;  // only when RunOptions::log_sessions
};

struct RunOptions {
  bool log_sessions = false;
  /// Cheap per-tick sanity checks (bandwidth conservation, containment).
  bool validate_invariants = true;
  /// Called after every tick for every user when set.
  std::function<void(long tick, int user_id, Vec2 position)> mobility_trace;
};

/// One replication's live state. Deterministic in (config, seed): every
/// random decision draws from a stream derived from the master seed, the
/// subsystem lane, and the entity id.
class Simulation {
 public:
  Simulation(const ScenarioConfig& config, std::uint64_t seed, RunOptions options = {});

  /// Advances one second: mobility, link updates for active users, BS
  /// selection and allocation, behavior, metrics.
  void step();

  long tick() const { return tick_; }
  RunResult take_result();

  // introspection (tests, tracing)
  const Assignment& assignment() const { return assignment_; }
  const MobilityState& mobility_state(int user_id) const { return mobility_[user_id]; }
  const UserProfile& profile(int user_id) const { return behavior_[user_id].profile(); }
  bool user_in_session(int user_id) const { return behavior_[user_id].in_session(); }
  const std::vector<UserSpec>& roster() const { return roster_; }

 private:
  void update_links(int user_id);
  void validate_tick() const;

  const ScenarioConfig& config_;
  RunOptions options_;
  std::uint64_t seed_;
  long tick_ = 0;
  int num_bs_ = 0;

  std::vector<UserSpec> roster_;
  std::vector<std::vector<int>> contracted_bs_;  // per user: usable BS indices
  std::vector<MobilityState> mobility_;
  std::vector<UserBehavior> behavior_;
  std::vector<double> pending_move_m_;
  std::vector<LinkState> links_;             // row-major [user][bs]
  std::vector<RandomStream> mobility_rng_;
  std::vector<RandomStream> behavior_rng_;
  std::vector<RandomStream> shadowing_rng_;  // row-major [user][bs]
  RandomStream selection_rng_;

  std::vector<SelectionUser> selection_buffer_;
  Assignment assignment_;
  std::vector<UserRecord> records_;
  std::vector<SessionLogEntry> session_log_;
};

RunResult run(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& options = {});

/// One result per configured seed. Replications are independent and execute
/// on a small thread pool; results arrive in seed order regardless of
/// scheduling. `on_seed_done` fires from worker threads.
std::vector<RunResult> run_replications(
    const ScenarioConfig& config, const RunOptions& options = {}, unsigned max_threads = 0,
    const std::function<void(std::uint64_t seed)>& on_seed_done = nullptr);

}  // namespace mnsim
