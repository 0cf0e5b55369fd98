#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mnsim/engine.hpp"

namespace mnsim {

/// Cross-seed normal 90% confidence interval: mean +/- 1.645 * s / sqrt(n),
/// with s the sample standard deviation over per-seed values. A single seed
/// yields the point value flagged degenerate.
struct CiValue {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double stddev = 0.0;
  int n = 0;
  bool degenerate = false;
};

CiValue normal_ci90(std::span<const double> per_seed_values);

enum class Metric { Throughput, Sinr, Mos, ThroughputStd };
inline constexpr std::array<Metric, 4> kAllMetrics = {Metric::Throughput, Metric::Sinr,
                                                      Metric::Mos, Metric::ThroughputStd};

const char* metric_name(Metric m);

using UserFilter = std::function<bool(const UserRecord&)>;

/// The per-seed scalar for one metric over the users passing the filter:
/// across-user mean for throughput/SINR/MOS, across-user standard deviation
/// of per-user mean throughput for ThroughputStd. Users lacking data for a
/// metric (no sessions; multihoming users for SINR) are left out. Returns
/// nothing when no user qualifies.
std::optional<double> seed_metric(const RunResult& result, Metric metric,
                                  const UserFilter& filter = nullptr);

/// Cross-seed CI of seed_metric over all results that have a value.
std::optional<CiValue> metric_ci(std::span<const RunResult> results, Metric metric,
                                 const UserFilter& filter = nullptr);

struct SummaryRow {
  std::string group;  // "all" or a user type name
  Metric metric = Metric::Throughput;
  bool null_value = false;  // SINR of an all-multihoming group
  CiValue value;
};

/// Rows for the whole population and for each user type present: one row per
/// (group, metric). SINR rows for multihoming groups carry an explicit null.
std::vector<SummaryRow> summarize(std::span<const RunResult> results);

void write_summary_csv(std::ostream& out, const std::string& scenario, const std::string& scheme,
                       std::span<const SummaryRow> rows);
void write_summary_json(std::ostream& out, const std::string& scenario, const std::string& scheme,
                        std::span<const SummaryRow> rows);
void write_sessions_csv(std::ostream& out, std::span<const RunResult> results);

}  // namespace mnsim
