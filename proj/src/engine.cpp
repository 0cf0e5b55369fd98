#include "mnsim/engine.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mnsim {

Simulation::Simulation(const ScenarioConfig& config, std::uint64_t seed, RunOptions options)
    : config_(config),
      options_(std::move(options)),
      seed_(seed),
      num_bs_(static_cast<int>(config.base_stations.size())),
      selection_rng_(derive_stream(seed, StreamLane::Selection)) {
  roster_ = build_user_roster(config_);
  const int n = static_cast<int>(roster_.size());

  contracted_bs_.resize(n);
  pending_move_m_.assign(n, 0.0);
  links_.assign(static_cast<std::size_t>(n) * num_bs_, LinkState{});
  records_.resize(n);
  assignment_.serving.resize(n);
  assignment_.attached_users.resize(num_bs_);

  mobility_rng_.reserve(n);
  behavior_rng_.reserve(n);
  shadowing_rng_.reserve(static_cast<std::size_t>(n) * num_bs_);
  mobility_.reserve(n);
  behavior_.reserve(n);

  for (int u = 0; u < n; ++u) {
    const std::uint32_t mask = contract_mask(roster_[u], config_.num_operators);
    for (int b = 0; b < num_bs_; ++b) {
      if (mask & (1u << config_.base_stations[b].operator_id))
        contracted_bs_[u].push_back(b);
      shadowing_rng_.push_back(derive_stream(seed, StreamLane::Shadowing, u, b));
    }

    RandomStream placement = derive_stream(seed, StreamLane::Placement, u);
    mobility_.push_back(initial_mobility_state(placement, config_.geometry.movement,
                                               config_.mobility));
    mobility_rng_.push_back(derive_stream(seed, StreamLane::Mobility, u));
    behavior_rng_.push_back(derive_stream(seed, StreamLane::Behavior, u));

    RandomStream profile_rng = derive_stream(seed, StreamLane::Profile, u);
    behavior_.emplace_back(sample_user_profile(profile_rng, config_.behavior), config_.behavior,
                           behavior_rng_[u], 0);

    records_[u].type = roster_[u].type;
    records_[u].home_operator = roster_[u].home_operator;
  }
}

void Simulation::update_links(int u) {
  const Vec2 pos = mobility_[u].position;
  LinkState* row = links_.data() + static_cast<std::size_t>(u) * num_bs_;
  for (int b : contracted_bs_[u]) {
    update_shadowing(row[b], pending_move_m_[u], config_.radio,
                     shadowing_rng_[static_cast<std::size_t>(u) * num_bs_ + b]);
    row[b].path_loss_db = dispatch_path_loss(pos, config_.base_stations[b], config_.geometry,
                                             config_.radio);
  }
  for (int b : contracted_bs_[u]) {
    row[b].sinr_db = sinr_db(static_cast<std::size_t>(b), config_.base_stations,
                             {row, static_cast<std::size_t>(num_bs_)}, config_.radio);
  }
  pending_move_m_[u] = 0.0;
}

void Simulation::step() {
  const int n = static_cast<int>(roster_.size());

  // 1. move everyone; shadowing decorrelation distance accrues until the
  // user's links are next refreshed
  for (int u = 0; u < n; ++u) {
    pending_move_m_[u] += mobility_step(mobility_[u], config_.geometry, config_.mobility,
                                        mobility_rng_[u]);
    if (options_.mobility_trace) options_.mobility_trace(tick_, u, mobility_[u].position);
  }

  // 2./3. refresh links for users in a running session, then rebuild the
  // assignment from scratch
  selection_buffer_.clear();
  for (int u = 0; u < n; ++u) {
    if (!behavior_[u].in_session()) continue;
    update_links(u);
    SelectionUser su;
    su.user_id = u;
    su.multihoming = is_multihoming(roster_[u].type);
    su.sinr_db.assign(num_bs_, 0.0);
    su.efficiency.assign(num_bs_, 0.0);
    const LinkState* row = links_.data() + static_cast<std::size_t>(u) * num_bs_;
    for (int b : contracted_bs_[u]) {
      su.sinr_db[b] = row[b].sinr_db;
      su.efficiency[b] = spectral_efficiency(row[b].sinr_db, config_.radio);
    }
    selection_buffer_.push_back(std::move(su));
  }
  assignment_ = select_attachments(selection_buffer_, config_.base_stations, config_.scheme,
                                   config_.access.mh_require_distinct_operators, n,
                                   selection_rng_);
  if (options_.validate_invariants) validate_tick();

  // 4./5. deliver throughput to the behavior machines and record metrics
  for (int u = 0; u < n; ++u) {
    const bool was_active = behavior_[u].in_session();
    double throughput = 0.0;
    if (was_active) {
      throughput = assignment_.user_throughput(u);
      UserRecord& rec = records_[u];
      rec.throughput_sum_bps += throughput;
      rec.active_seconds += 1;
      if (!is_multihoming(roster_[u].type) && assignment_.serving[u].size() == 1) {
        rec.sinr_sum_db += assignment_.serving[u][0].sinr_db;
        rec.sinr_samples += 1;
      }
    }
    const auto finished = behavior_[u].advance(tick_, throughput, config_.mos_curves,
                                               config_.behavior, behavior_rng_[u]);
    if (finished) {
      UserRecord& rec = records_[u];
      rec.score_sum += finished->score;
      rec.finished_sessions += 1;
      if (finished->abandoned)
        rec.abandoned_sessions += 1;
      else
        rec.completed_sessions += 1;
      if (options_.log_sessions) {
        session_log_.push_back({u, finished->start_tick, finished->app, finished->resolution,
                                finished->planned_duration_s, finished->elapsed_s,
                                finished->abandoned, finished->score});
      }
    }
  }
  ++tick_;
}

void Simulation::validate_tick() const {
  std::vector<double> allocated(num_bs_, 0.0);
  for (const auto& serving : assignment_.serving)
    for (const Attachment& a : serving) allocated[a.bs_index] += a.bandwidth_hz;
  for (int b = 0; b < num_bs_; ++b) {
    const double bandwidth = config_.base_stations[b].carrier_bandwidth_hz;
    const bool occupied = !assignment_.attached_users[b].empty();
    const double expected = occupied ? bandwidth : 0.0;
    if (std::abs(allocated[b] - expected) > 1e-6 * bandwidth)
      throw std::logic_error("bandwidth conservation violated at BS " + std::to_string(b));
  }
  for (const MobilityState& m : mobility_) {
    if (!config_.geometry.movement.contains(m.position))
      throw std::logic_error("user escaped the movement area");
  }
}

RunResult Simulation::take_result() {
  RunResult out;
  out.seed = seed_;
  out.ticks = tick_;
  out.users = std::move(records_);
  out.sessions = std::move(session_log_);
  return out;
}

RunResult run(const ScenarioConfig& config, std::uint64_t seed, const RunOptions& options) {
  Simulation sim(config, seed, options);
  const long ticks = config.ticks();
  for (long t = 0; t < ticks; ++t) sim.step();
  return sim.take_result();
}

std::vector<RunResult> run_replications(const ScenarioConfig& config, const RunOptions& options,
                                        unsigned max_threads,
                                        const std::function<void(std::uint64_t)>& on_seed_done) {
  const std::size_t count = config.seeds.size();
  std::vector<RunResult> results(count);
  std::vector<std::exception_ptr> errors(count);

  unsigned workers = max_threads ? max_threads : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[i] = run(config, config.seeds[i], options);
        if (on_seed_done) on_seed_done(config.seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const std::exception& e) {
        throw std::runtime_error("replication with seed " + std::to_string(config.seeds[i]) +
                                 " failed: " + e.what());
      }
    }
  }
  return results;
}

}  // namespace mnsim
