#include "mnsim/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mnsim {

const char* app_type_name(AppType t) {
  switch (t) {
    case AppType::Web: return "web";
    case AppType::Video: return "video";
    case AppType::Facebook: return "facebook";
    case AppType::Messaging: return "messaging";
    case AppType::Maps: return "maps";
  }
  throw std::logic_error("app_type_name: bad app type");
}

AppType app_type_from_name(const std::string& name) {
  for (AppType t : kAllAppTypes)
    if (name == app_type_name(t)) return t;
  throw std::invalid_argument("unknown app type: " + name);
}

double MosCurve::eval(double throughput_bps) const {
  if (knots.empty()) throw std::logic_error("MosCurve::eval: empty curve");
  if (throughput_bps <= knots.front().first) return knots.front().second;
  if (throughput_bps >= knots.back().first) return knots.back().second;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (throughput_bps <= knots[i].first) {
      const auto& [x0, y0] = knots[i - 1];
      const auto& [x1, y1] = knots[i];
      return y0 + (y1 - y0) * (throughput_bps - x0) / (x1 - x0);
    }
  }
  return knots.back().second;
}

bool MosCurve::valid() const {
  if (knots.size() < 2) return false;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].second < 1.0 || knots[i].second > 5.0) return false;
    if (i > 0 && (knots[i].first <= knots[i - 1].first ||
                  knots[i].second < knots[i - 1].second))
      return false;
  }
  return true;
}

namespace {

MosCurve curve_mbps(std::initializer_list<std::pair<double, double>> knots_mbps) {
  MosCurve c;
  for (const auto& [mbps, mos] : knots_mbps) c.knots.emplace_back(mbps * 1e6, mos);
  return c;
}

// Rising piecewise-linear curve that reaches its plateau MOS exactly at the
// smooth-playback throughput.
MosCurve beta_rule_curve(double smooth_playback_mbps) {
  const double t = smooth_playback_mbps;
  return curve_mbps({{0.0, 1.0}, {0.25 * t, 2.0}, {0.5 * t, 3.0}, {0.75 * t, 3.9}, {t, 4.5}});
}

}  // namespace

MosCurveSet MosCurveSet::defaults() {
  MosCurveSet s;
  s.set_curve(AppType::Web, 0,
              curve_mbps({{0.0, 1.0}, {0.3, 1.8}, {1.0, 2.8}, {3.0, 3.8}, {6.0, 4.3}, {10.0, 4.5}}));
  s.set_curve(AppType::Messaging, 0,
              curve_mbps({{0.0, 1.0}, {0.05, 2.0}, {0.2, 3.0}, {0.5, 3.8}, {1.0, 4.3}, {2.0, 4.5}}));
  s.set_curve(AppType::Facebook, 0,
              curve_mbps({{0.0, 1.0}, {0.2, 1.8}, {0.8, 2.8}, {2.5, 3.8}, {5.0, 4.3}, {8.0, 4.5}}));
  s.set_curve(AppType::Maps, 0,
              curve_mbps({{0.0, 1.0}, {0.1, 1.8}, {0.5, 2.8}, {1.5, 3.8}, {3.0, 4.3}, {5.0, 4.5}}));
  s.set_curve(AppType::Video, 360,
              curve_mbps({{0.0, 1.0}, {0.2, 1.8}, {0.5, 3.0}, {0.8, 4.0}, {1.2, 4.5}}));
  s.set_curve(AppType::Video, 480,
              curve_mbps({{0.0, 1.0}, {0.3, 1.8}, {0.8, 3.0}, {1.3, 4.0}, {2.0, 4.5}}));
  s.set_curve(AppType::Video, 720,
              curve_mbps({{0.0, 1.0}, {0.5, 1.8}, {1.5, 3.0}, {2.5, 4.0}, {4.0, 4.5}}));
  s.set_curve(AppType::Video, 1080, beta_rule_curve(8.0));
  s.set_curve(AppType::Video, 2000, beta_rule_curve(15.0));
  s.set_curve(AppType::Video, 4000, beta_rule_curve(20.0));
  return s;
}

const MosCurve& MosCurveSet::curve(AppType app, int resolution) const {
  const auto it = curves_.find({app, app == AppType::Video ? resolution : 0});
  if (it == curves_.end())
    throw std::invalid_argument(std::string("no MOS curve for ") + app_type_name(app) + "/" +
                                std::to_string(resolution));
  return it->second;
}

void MosCurveSet::set_curve(AppType app, int resolution, MosCurve curve) {
  curves_[{app, app == AppType::Video ? resolution : 0}] = std::move(curve);
}

void MosCurveSet::validate() const {
  for (AppType t : {AppType::Web, AppType::Facebook, AppType::Messaging, AppType::Maps}) {
    if (!curves_.count({t, 0}))
      throw std::invalid_argument(std::string("missing MOS curve for ") + app_type_name(t));
  }
  for (const auto& [key, curve] : curves_) {
    if (!curve.valid())
      throw std::invalid_argument(std::string("invalid MOS curve for ") +
                                  app_type_name(key.first) + "/" + std::to_string(key.second));
  }
}

UserProfile sample_user_profile(RandomStream& rng, const BehaviorParams& params) {
  UserProfile p;
  constexpr double kInf = 1e300;
  p.activity_rate_success = rng.truncated_normal(params.activity_rate_success.mean,
                                                 params.activity_rate_success.sigma,
                                                 std::nextafter(0.0, 1.0), kInf);
  p.activity_rate_failure = rng.truncated_normal(params.activity_rate_failure.mean,
                                                 params.activity_rate_failure.sigma,
                                                 std::nextafter(0.0, 1.0), kInf);
  p.continue_prob_completed = rng.truncated_normal(params.continue_prob_completed.mean,
                                                   params.continue_prob_completed.sigma, 0.0, 1.0);
  p.continue_prob_abandoned = rng.truncated_normal(params.continue_prob_abandoned.mean,
                                                   params.continue_prob_abandoned.sigma, 0.0, 1.0);
  for (;;) {
    double sum = 0.0;
    for (int i = 0; i < kNumAppTypes; ++i) {
      p.type_weights[i] = rng.truncated_normal(params.type_weights[i].mean,
                                               params.type_weights[i].sigma, 0.0, kInf);
      sum += p.type_weights[i];
    }
    if (sum <= 0.0) continue;  // all-zero draw; resample
    double partial = 0.0;
    for (int i = 0; i < kNumAppTypes - 1; ++i) {
      p.type_weights[i] /= sum;
      partial += p.type_weights[i];
    }
    p.type_weights[kNumAppTypes - 1] = 1.0 - partial;
    return p;
  }
}

double next_activity_delay_s(const UserProfile& profile, ActivityOutcome last,
                             RandomStream& rng) {
  const double rate_per_min = last == ActivityOutcome::Failure ? profile.activity_rate_failure
                                                               : profile.activity_rate_success;
  return rng.exponential(rate_per_min) * 60.0;
}

double inter_session_gap_s(const BehaviorParams& params, RandomStream& rng) {
  return rng.generalized_pareto(params.gap_shape, params.gap_scale_s);
}

double sample_session_duration_s(AppType app, const BehaviorParams& params, RandomStream& rng) {
  switch (app) {
    case AppType::Web: return rng.weibull(params.web_duration.shape, params.web_duration.scale);
    case AppType::Video:
      return rng.weibull(params.video_duration.shape, params.video_duration.scale);
    case AppType::Facebook:
      return rng.weibull(params.facebook_duration.shape, params.facebook_duration.scale);
    case AppType::Messaging:
      return rng.lognormal(params.messaging_duration.mu, params.messaging_duration.sigma);
    case AppType::Maps:
      return rng.lognormal(params.maps_duration.mu, params.maps_duration.sigma);
  }
  throw std::logic_error("sample_session_duration_s: bad app type");
}

SessionState sample_session(const UserProfile& profile, const BehaviorParams& params,
                            RandomStream& rng) {
  SessionState s;
  s.app = kAllAppTypes[rng.categorical(profile.type_weights)];
  if (s.app == AppType::Video)
    s.resolution = params.video_resolutions[rng.categorical(params.video_resolution_probs)];
  const double duration = sample_session_duration_s(s.app, params, rng);
  s.planned_duration_s = std::max(1, static_cast<int>(std::ceil(duration)));
  return s;
}

double mos_from_throughput(const MosCurveSet& curves, AppType app, int resolution,
                           double throughput_bps) {
  if (throughput_bps < 0.0)
    throw std::invalid_argument("mos_from_throughput: negative throughput");
  return curves.curve(app, resolution).eval(throughput_bps);
}

double abandonment_probability(double cumulative_mean_mos, int elapsed_s,
                               const BehaviorParams& params) {
  if (elapsed_s <= params.grace_period_s) return 0.0;
  if (cumulative_mean_mos > params.abandon_mos_threshold) return 0.0;
  const double p = params.abandon_intercept - params.abandon_mos_slope * cumulative_mean_mos;
  return std::clamp(p, 0.0, 1.0);
}

SessionEvent step_session(SessionState& session, double throughput_bps,
                          const MosCurveSet& curves, const BehaviorParams& params,
                          RandomStream& rng) {
  if (session.outcome != SessionOutcome::Running)
    throw std::logic_error("step_session: session already finished");
  session.elapsed_s += 1;
  session.mos_sum += mos_from_throughput(curves, session.app, session.resolution, throughput_bps);
  if (session.elapsed_s >= session.planned_duration_s) {
    session.outcome = SessionOutcome::Completed;
    return SessionEvent::Completed;
  }
  const double p = abandonment_probability(session.cumulative_mean_mos(), session.elapsed_s, params);
  if (p > 0.0 && rng.bernoulli(p)) {
    session.outcome = SessionOutcome::Abandoned;
    return SessionEvent::Abandoned;
  }
  return SessionEvent::Continue;
}

double session_score(const SessionState& session) {
  if (session.outcome == SessionOutcome::Running)
    throw std::logic_error("session_score: session still running");
  if (session.outcome == SessionOutcome::Completed) return session.mos_sum / session.elapsed_s;
  const double penalized = session.planned_duration_s - session.elapsed_s;
  return (session.mos_sum + 1.0 * penalized) / session.planned_duration_s;
}

bool continue_activity(const UserProfile& profile, SessionOutcome last, RandomStream& rng) {
  const double p = last == SessionOutcome::Completed ? profile.continue_prob_completed
                                                     : profile.continue_prob_abandoned;
  return rng.bernoulli(p);
}

long UserBehavior::delay_to_ticks(double seconds) {
  // heavy-tailed gap draws can exceed any run length; cap to keep the tick
  // arithmetic inside long range
  const double capped = std::min(seconds, 1e15);
  return std::max<long>(1, static_cast<long>(std::ceil(capped)));
}

UserBehavior::UserBehavior(UserProfile profile, const BehaviorParams& params, RandomStream& rng,
                           long start_tick)
    : profile_(profile) {
  (void)params;
  phase_ = Phase::Idle;
  wake_tick_ = start_tick + delay_to_ticks(next_activity_delay_s(profile_, ActivityOutcome::None, rng));
}

std::optional<FinishedSession> UserBehavior::advance(long tick, double throughput_bps,
                                                     const MosCurveSet& curves,
                                                     const BehaviorParams& params,
                                                     RandomStream& rng) {
  if (phase_ == Phase::InSession) {
    const SessionEvent ev = step_session(*session_, throughput_bps, curves, params, rng);
    if (ev == SessionEvent::Continue) return std::nullopt;

    FinishedSession finished;
    finished.app = session_->app;
    finished.resolution = session_->resolution;
    finished.planned_duration_s = session_->planned_duration_s;
    finished.elapsed_s = session_->elapsed_s;
    finished.abandoned = ev == SessionEvent::Abandoned;
    finished.score = session_score(*session_);
    finished.start_tick = session_start_tick_;
    session_.reset();

    if (continue_activity(profile_, finished.abandoned ? SessionOutcome::Abandoned
                                                       : SessionOutcome::Completed,
                          rng)) {
      phase_ = Phase::Gap;
      wake_tick_ = tick + delay_to_ticks(inter_session_gap_s(params, rng));
    } else {
      // the activity ends; it failed iff its last session was abandoned
      const ActivityOutcome outcome =
          finished.abandoned ? ActivityOutcome::Failure : ActivityOutcome::Success;
      phase_ = Phase::Idle;
      wake_tick_ = tick + delay_to_ticks(next_activity_delay_s(profile_, outcome, rng));
    }
    return finished;
  }

  if (tick >= wake_tick_) {
    session_ = sample_session(profile_, params, rng);
    session_start_tick_ = tick + 1;
    phase_ = Phase::InSession;
  }
  return std::nullopt;
}

}  // namespace mnsim
