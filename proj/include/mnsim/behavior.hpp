#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mnsim/rng.hpp"
#include "mnsim/types.hpp"

namespace mnsim {

enum class AppType { Web, Video, Facebook, Messaging, Maps };
inline constexpr int kNumAppTypes = 5;
inline constexpr std::array<AppType, kNumAppTypes> kAllAppTypes = {
    AppType::Web, AppType::Video, AppType::Facebook, AppType::Messaging, AppType::Maps};

const char* app_type_name(AppType t);
AppType app_type_from_name(const std::string& name);

struct NormalSpec {
  double mean = 0.0;
  double sigma = 0.0;
  friend bool operator==(const NormalSpec&, const NormalSpec&) = default;
};
struct WeibullSpec {
  double shape = 1.0;
  double scale = 1.0;
  friend bool operator==(const WeibullSpec&, const WeibullSpec&) = default;
};
struct LogNormalSpec {
  double mu = 0.0;
  double sigma = 1.0;
  friend bool operator==(const LogNormalSpec&, const LogNormalSpec&) = default;
};

/// Population-level behavioral distributions. Per-user parameters are drawn
/// from these, which is what makes users heterogeneous.
struct BehaviorParams {
  NormalSpec activity_rate_success{0.10, 0.03};  // per minute
  NormalSpec activity_rate_failure{0.05, 0.03};  // per minute
  NormalSpec continue_prob_completed{0.50, 0.05};
  NormalSpec continue_prob_abandoned{0.20, 0.05};
  /// Session-type selection weight distributions, kAllAppTypes order.
  std::array<NormalSpec, kNumAppTypes> type_weights{{
      {0.20, 0.10},  // web
      {0.20, 0.10},  // video
      {0.30, 0.10},  // facebook
      {0.30, 0.10},  // messaging
      {0.05, 0.10},  // maps
  }};
  double gap_shape = 1.31;     // generalized Pareto, location 0
  double gap_scale_s = 11.48;
  WeibullSpec web_duration{0.46, 34.40};
  WeibullSpec video_duration{0.39, 88.21};
  WeibullSpec facebook_duration{0.37, 18.15};
  LogNormalSpec messaging_duration{2.49, 1.70};
  LogNormalSpec maps_duration{2.91, 1.94};
  std::array<int, 6> video_resolutions{360, 480, 720, 1080, 2000, 4000};
  std::array<double, 6> video_resolution_probs{0.10, 0.10, 0.10, 0.20, 0.30, 0.20};
  double abandon_intercept = 0.083;
  double abandon_mos_slope = 0.033;
  double abandon_mos_threshold = 2.5;
  int grace_period_s = 5;
  /// Optional path to a MOS knot-table file; empty means built-in defaults.
  std::string mos_curves_file;

  friend bool operator==(const BehaviorParams&, const BehaviorParams&) = default;
};

/// Piecewise-linear throughput-to-MOS mapping, clamped at the end knots.
struct MosCurve {
  std::vector<std::pair<double, double>> knots;  // (throughput bps, MOS), ascending

  double eval(double throughput_bps) const;
  bool valid() const;

  friend bool operator==(const MosCurve&, const MosCurve&) = default;
};

/// One curve per application type; video keyed additionally by resolution.
class MosCurveSet {
 public:
  /// Built-in knot tables: every curve anchors at MOS 1.0 for zero throughput
  /// and plateaus at 4.5. High-resolution video plateaus sit at the smooth
  /// playback rates of 8, 15, and 20 Mbps for 1080/2000/4000.
  static MosCurveSet defaults();

  const MosCurve& curve(AppType app, int resolution = 0) const;
  void set_curve(AppType app, int resolution, MosCurve curve);
  void validate() const;  // throws std::invalid_argument

  const std::map<std::pair<AppType, int>, MosCurve>& curves() const { return curves_; }

  friend bool operator==(const MosCurveSet&, const MosCurveSet&) = default;

 private:
  std::map<std::pair<AppType, int>, MosCurve> curves_;
};

/// Per-user behavioral parameters, sampled once per user.
struct UserProfile {
  double activity_rate_success = 0.10;  // per minute, > 0
  double activity_rate_failure = 0.05;  // per minute, > 0
  double continue_prob_completed = 0.50;
  double continue_prob_abandoned = 0.20;
  std::array<double, kNumAppTypes> type_weights{};  // nonnegative, sum 1
};

UserProfile sample_user_profile(RandomStream& rng, const BehaviorParams& params);

enum class ActivityOutcome { None, Success, Failure };

/// Seconds until the next activity: exponential with the success or failure
/// rate depending on how the last activity ended (minutes converted to s).
double next_activity_delay_s(const UserProfile& profile, ActivityOutcome last,
                             RandomStream& rng);

/// Generalized-Pareto inter-session gap within an activity, in seconds.
double inter_session_gap_s(const BehaviorParams& params, RandomStream& rng);

enum class SessionOutcome { Running, Completed, Abandoned };

struct SessionState {
  AppType app = AppType::Web;
  int resolution = 0;  // video only
  int planned_duration_s = 1;
  int elapsed_s = 0;
  double mos_sum = 0.0;
  SessionOutcome outcome = SessionOutcome::Running;

  double cumulative_mean_mos() const { return elapsed_s > 0 ? mos_sum / elapsed_s : 0.0; }
};

/// Fresh session: type from the profile weights, resolution for video, and a
/// planned duration from the per-type distribution, rounded up to whole
/// seconds (at least 1).
SessionState sample_session(const UserProfile& profile, const BehaviorParams& params,
                            RandomStream& rng);

/// Continuous (un-rounded) duration sample for a given app type, in seconds.
double sample_session_duration_s(AppType app, const BehaviorParams& params, RandomStream& rng);

double mos_from_throughput(const MosCurveSet& curves, AppType app, int resolution,
                           double throughput_bps);

/// Per-second abandonment probability: zero inside the grace period or above
/// the MOS threshold, otherwise the linear-in-MOS hazard clamped to [0, 1].
double abandonment_probability(double cumulative_mean_mos, int elapsed_s,
                               const BehaviorParams& params);

enum class SessionEvent { Continue, Completed, Abandoned };

/// Consumes one second of the session at the given throughput: appends the
/// per-second MOS, completes on reaching the planned duration, otherwise
/// draws the abandonment Bernoulli.
SessionEvent step_session(SessionState& session, double throughput_bps,
                          const MosCurveSet& curves, const BehaviorParams& params,
                          RandomStream& rng);

/// Mean per-second MOS, with abandoned sessions scored as if they had run the
/// full planned duration at MOS 1.0 for the abandoned remainder.
double session_score(const SessionState& session);

bool continue_activity(const UserProfile& profile, SessionOutcome last, RandomStream& rng);

struct FinishedSession {
  AppType app = AppType::Web;
  int resolution = 0;
  int planned_duration_s = 0;
  int elapsed_s = 0;
  bool abandoned = false;
  double score = 0.0;
  long start_tick = 0;
};

/// The per-user activity/session state machine. A user is idle between
/// activities, in a gap between an activity's sessions, or in a session; it
/// consumes radio resources exactly while in a session.
class UserBehavior {
 public:
  UserBehavior(UserProfile profile, const BehaviorParams& params, RandomStream& rng,
               long start_tick = 0);

  bool in_session() const { return phase_ == Phase::InSession; }
  const UserProfile& profile() const { return profile_; }
  const SessionState* session() const { return session_ ? &*session_ : nullptr; }

  /// Advances one tick. `throughput_bps` is consumed only when a session was
  /// running when the tick began. Returns the finished session, if any ended
  /// this tick. A session sampled on timer expiry starts consuming on the
  /// following tick.
  std::optional<FinishedSession> advance(long tick, double throughput_bps,
                                         const MosCurveSet& curves,
                                         const BehaviorParams& params, RandomStream& rng);

 private:
  enum class Phase { Idle, Gap, InSession };

  static long delay_to_ticks(double seconds);

  Phase phase_ = Phase::Idle;
  long wake_tick_ = 0;
  UserProfile profile_;
  std::optional<SessionState> session_;
  long session_start_tick_ = 0;
};

}  // namespace mnsim
