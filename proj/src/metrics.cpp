#include "mnsim/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace mnsim {

CiValue normal_ci90(std::span<const double> per_seed_values) {
  if (per_seed_values.empty()) throw std::invalid_argument("normal_ci90: no values");
  CiValue ci;
  ci.n = static_cast<int>(per_seed_values.size());
  double sum = 0.0;
  for (double v : per_seed_values) sum += v;
  ci.mean = sum / ci.n;
  if (ci.n == 1) {
    ci.lo = ci.hi = ci.mean;
    ci.degenerate = true;
    return ci;
  }
  double ss = 0.0;
  for (double v : per_seed_values) ss += (v - ci.mean) * (v - ci.mean);
  ci.stddev = std::sqrt(ss / (ci.n - 1));
  const double half = 1.645 * ci.stddev / std::sqrt(static_cast<double>(ci.n));
  ci.lo = ci.mean - half;
  ci.hi = ci.mean + half;
  return ci;
}

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Throughput: return "throughput_bps";
    case Metric::Sinr: return "sinr_db";
    case Metric::Mos: return "mos";
    case Metric::ThroughputStd: return "throughput_std_bps";
  }
  throw std::logic_error("metric_name: bad metric");
}

std::optional<double> seed_metric(const RunResult& result, Metric metric,
                                  const UserFilter& filter) {
  std::vector<double> values;
  for (const UserRecord& rec : result.users) {
    if (filter && !filter(rec)) continue;
    std::optional<double> v;
    switch (metric) {
      case Metric::Throughput:
      case Metric::ThroughputStd: v = rec.mean_throughput_bps(); break;
      case Metric::Sinr: v = rec.mean_sinr_db(); break;
      case Metric::Mos: v = rec.mean_mos(); break;
    }
    if (v) values.push_back(*v);
  }
  if (values.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= values.size();
  if (metric != Metric::ThroughputStd) return mean;
  if (values.size() < 2) return std::nullopt;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (values.size() - 1));
}

std::optional<CiValue> metric_ci(std::span<const RunResult> results, Metric metric,
                                 const UserFilter& filter) {
  if (results.empty()) throw std::invalid_argument("metric_ci: no results");
  std::vector<double> per_seed;
  for (const RunResult& r : results) {
    if (auto v = seed_metric(r, metric, filter)) per_seed.push_back(*v);
  }
  if (per_seed.empty()) return std::nullopt;
  return normal_ci90(per_seed);
}

std::vector<SummaryRow> summarize(std::span<const RunResult> results) {
  if (results.empty()) throw std::invalid_argument("summarize: no results");

  std::set<UserType> present;
  for (const UserRecord& rec : results.front().users) present.insert(rec.type);

  std::vector<std::pair<std::string, UserFilter>> groups;
  groups.emplace_back("all", nullptr);
  for (UserType t : present)
    groups.emplace_back(user_type_name(t),
                        [t](const UserRecord& rec) { return rec.type == t; });

  std::vector<SummaryRow> rows;
  for (const auto& [name, filter] : groups) {
    for (Metric metric : kAllMetrics) {
      SummaryRow row;
      row.group = name;
      row.metric = metric;
      const auto ci = metric_ci(results, metric, filter);
      if (ci) {
        row.value = *ci;
      } else {
        row.null_value = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_summary_csv(std::ostream& out, const std::string& scenario, const std::string& scheme,
                       std::span<const SummaryRow> rows) {
  out << "# mnsim summary schema v1\n";
  out << "scenario,scheme,group,metric,mean,ci_low,ci_high,std,seeds,degenerate\n";
  for (const SummaryRow& row : rows) {
    out << scenario << ',' << scheme << ',' << row.group << ',' << metric_name(row.metric) << ',';
    if (row.null_value) {
      out << ",,,," << 0 << ',' << 0 << '\n';
      continue;
    }
    out << fmt(row.value.mean) << ',' << fmt(row.value.lo) << ',' << fmt(row.value.hi) << ','
        << fmt(row.value.stddev) << ',' << row.value.n << ',' << (row.value.degenerate ? 1 : 0)
        << '\n';
  }
}

void write_summary_json(std::ostream& out, const std::string& scenario, const std::string& scheme,
                        std::span<const SummaryRow> rows) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["scenario"] = scenario;
  doc["scheme"] = scheme;
  auto arr = nlohmann::ordered_json::array();
  for (const SummaryRow& row : rows) {
    nlohmann::ordered_json j;
    j["group"] = row.group;
    j["metric"] = metric_name(row.metric);
    if (row.null_value) {
      j["mean"] = nullptr;
      j["ci_low"] = nullptr;
      j["ci_high"] = nullptr;
      j["std"] = nullptr;
      j["seeds"] = 0;
      j["degenerate"] = false;
    } else {
      j["mean"] = row.value.mean;
      j["ci_low"] = row.value.lo;
      j["ci_high"] = row.value.hi;
      j["std"] = row.value.stddev;
      j["seeds"] = row.value.n;
      j["degenerate"] = row.value.degenerate;
    }
    arr.push_back(j);
  }
  doc["rows"] = arr;
  out << doc.dump(2) << '\n';
}

void write_sessions_csv(std::ostream& out, std::span<const RunResult> results) {
  out << "seed,user,start_tick,app,resolution,planned_s,elapsed_s,outcome,score\n";
  for (const RunResult& r : results) {
    for (const SessionLogEntry& s : r.sessions) {
      out << r.seed << ',' << s.user_id << ',' << s.start_tick << ',' << app_type_name(s.app)
          << ',' << s.resolution << ',' << s.planned_duration_s << ',' << s.elapsed_s << ','
          << (s.abandoned ? "abandoned" : "completed") << ',' << fmt(s.score) << '\n';
    }
  }
}

}  // namespace mnsim
