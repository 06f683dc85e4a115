#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gridsim/analysis.hpp"
#include "gridsim/error.hpp"
#include "gridsim/metrics.hpp"
#include "gridsim/simulator.hpp"
#include "gridsim/topology.hpp"

namespace gridsim::io {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double parse_double(std::string_view s, std::size_t line = 0) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t line = 0) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "bad integer '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class Range>
std::string join(const Range& items, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& it : items) {
    if (!first) out += sep;
    out += to_string(it);
    first = false;
  }
  return out;
}

// Reads a headed CSV (no quoting; fields never contain commas) and checks the
// header matches `expected`.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in, std::string_view expected) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing CSV header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw ParseError(1, "unexpected CSV header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = split(expected, ',').size();
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line, ',');
    if (f.size() != width) throw ParseError(n, "expected " + std::to_string(width) + " fields");
    rows.push_back(std::move(f));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Metrics

inline constexpr std::string_view kNodeMetricsHeader = "node_id,role,betweenness,eccentricity,eigenvector";
inline constexpr std::string_view kEdgeMetricsHeader = "u,v,edge_betweenness";
inline constexpr std::string_view kRankingsHeader = "metric,rank,members,value";

struct NodeMetricRow {
  NodeId id;
  NodeRole role;
  double betweenness;
  std::optional<double> eccentricity;  // nullopt renders as "X"
  double eigenvector;
  friend bool operator==(const NodeMetricRow&, const NodeMetricRow&) = default;
};

inline std::vector<NodeMetricRow> node_metric_rows(const Topology& t, const NodeCentrality& betweenness,
                                                   const std::optional<NodeCentrality>& eccentricity,
                                                   const NodeCentrality& eigenvector) {
  std::vector<NodeMetricRow> rows;
  for (NodeIndex i = 0; i < t.size(); ++i) {
    rows.push_back({t.id(i), t.role(i), betweenness.values[i],
                    eccentricity ? std::optional<double>(eccentricity->values[i]) : std::nullopt,
                    eigenvector.values[i]});
  }
  return rows;
}

inline void write_node_metrics(std::ostream& out, const std::vector<NodeMetricRow>& rows) {
  out << kNodeMetricsHeader << "\n";
  for (const auto& r : rows)
    out << r.id << "," << to_string(r.role) << "," << format_double(r.betweenness) << ","
        << (r.eccentricity ? format_double(*r.eccentricity) : "X") << "," << format_double(r.eigenvector)
        << "\n";
}

inline std::vector<NodeMetricRow> read_node_metrics(std::istream& in) {
  std::vector<NodeMetricRow> out;
  std::size_t n = 1;
  for (auto& f : read_csv(in, kNodeMetricsHeader)) {
    ++n;
    auto role = parse_role(f[1]);
    if (!role) throw ParseError(n, "unknown role '" + f[1] + "'");
    out.push_back({f[0], *role, parse_double(f[2], n),
                   f[3] == "X" ? std::nullopt : std::optional<double>(parse_double(f[3], n)),
                   parse_double(f[4], n)});
  }
  return out;
}

inline void write_edge_metrics(std::ostream& out, const EdgeCentrality& c) {
  out << kEdgeMetricsHeader << "\n";
  for (std::size_t e = 0; e < c.size(); ++e)
    out << c.keys[e].u << "," << c.keys[e].v << "," << format_double(c.values[e]) << "\n";
}

inline EdgeCentrality read_edge_metrics(std::istream& in) {
  EdgeCentrality c;
  std::size_t n = 1;
  for (auto& f : read_csv(in, kEdgeMetricsHeader)) {
    c.keys.emplace_back(f[0], f[1]);
    c.values.push_back(parse_double(f[2], ++n));
  }
  return c;
}

struct RankingRow {
  std::string metric;
  int rank;
  std::vector<std::string> members;
  double value;
  friend bool operator==(const RankingRow&, const RankingRow&) = default;
};

template <class Key>
void append_ranking_rows(std::vector<RankingRow>& rows, const std::string& metric,
                         const RankedClusters<Key>& r) {
  for (const auto& c : r.clusters) {
    RankingRow row{metric, c.rank, {}, c.value};
    for (const auto& m : c.members) row.members.push_back(to_string(m));
    rows.push_back(std::move(row));
  }
}

inline void write_rankings(std::ostream& out, const std::vector<RankingRow>& rows) {
  out << kRankingsHeader << "\n";
  for (const auto& r : rows)
    out << r.metric << "," << r.rank << "," << join(r.members, " ") << "," << format_double(r.value)
        << "\n";
}

inline std::vector<RankingRow> read_rankings(std::istream& in) {
  std::vector<RankingRow> out;
  std::size_t n = 1;
  for (auto& f : read_csv(in, kRankingsHeader)) {
    ++n;
    std::vector<std::string> members;
    for (auto& m : split(f[2], ' '))
      if (!m.empty()) members.push_back(std::move(m));
    out.push_back({f[0], static_cast<int>(parse_uint(f[1], n)), std::move(members), parse_double(f[3], n)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simulation

inline constexpr std::string_view kTimeseriesHeader = "router_id,time_s,delay_s";
inline constexpr std::string_view kSummaryHeader =
    "router_id,final_delay_s,forwarded,dropped_attack,attacked,sink_adjacent,arrivals";
inline constexpr std::string_view kAccountingHeader = "generated,delivered,dropped_attack,dropped_ttl,in_flight";

struct TimeseriesRow {
  NodeId router;
  DelaySample sample;
  friend bool operator==(const TimeseriesRow&, const TimeseriesRow&) = default;
};

inline void write_timeseries(std::ostream& out, const SimResult& r) {
  out << kTimeseriesHeader << "\n";
  for (const auto& rr : r.routers)
    for (const auto& s : rr.series)
      out << rr.id << "," << format_double(s.time) << "," << format_double(s.delay) << "\n";
}

inline std::vector<TimeseriesRow> read_timeseries(std::istream& in) {
  std::vector<TimeseriesRow> out;
  std::size_t n = 1;
  for (auto& f : read_csv(in, kTimeseriesHeader)) {
    ++n;
    out.push_back({f[0], {parse_double(f[1], n), parse_double(f[2], n)}});
  }
  return out;
}

struct SummaryRow {
  NodeId router;
  double final_delay;
  std::uint64_t forwarded;
  std::uint64_t dropped_attack;
  bool attacked;
  bool sink_adjacent;
  std::uint64_t arrivals;
  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

inline std::vector<SummaryRow> summary_rows(const SimResult& r) {
  std::vector<SummaryRow> rows;
  for (const auto& rr : r.routers)
    rows.push_back({rr.id, rr.final_delay, rr.forwarded, rr.dropped_attack, rr.attacked, rr.sink_adjacent,
                    rr.arrivals});
  return rows;
}

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << "\n";
  for (const auto& r : rows)
    out << r.router << "," << format_double(r.final_delay) << "," << r.forwarded << "," << r.dropped_attack
        << "," << (r.attacked ? 1 : 0) << "," << (r.sink_adjacent ? 1 : 0) << "," << r.arrivals << "\n";
}

inline std::vector<SummaryRow> read_summary(std::istream& in) {
  std::vector<SummaryRow> out;
  std::size_t n = 1;
  for (auto& f : read_csv(in, kSummaryHeader)) {
    ++n;
    out.push_back({f[0], parse_double(f[1], n), parse_uint(f[2], n), parse_uint(f[3], n),
                   parse_uint(f[4], n) != 0, parse_uint(f[5], n) != 0, parse_uint(f[6], n)});
  }
  return out;
}

inline void write_accounting(std::ostream& out, const Accounting& a) {
  out << kAccountingHeader << "\n"
      << a.generated << "," << a.delivered << "," << a.dropped_attack << "," << a.dropped_ttl << ","
      << a.in_flight << "\n";
}

inline Accounting read_accounting(std::istream& in) {
  auto rows = read_csv(in, kAccountingHeader);
  if (rows.size() != 1) throw ParseError(0, "accounting file must hold exactly one row");
  const auto& f = rows.front();
  return {parse_uint(f[0], 2), parse_uint(f[1], 2), parse_uint(f[2], 2), parse_uint(f[3], 2),
          parse_uint(f[4], 2)};
}

// ---------------------------------------------------------------------------
// Comparison

inline constexpr std::string_view kComparisonHeader = "metric,k,overlap,spearman,metric_topk,delay_topk";

inline void write_comparison(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kComparisonHeader << "\n";
  for (const auto& r : rows)
    out << r.metric << "," << r.k << "," << format_double(r.overlap) << ","
        << (r.spearman ? format_double(*r.spearman) : "NA") << "," << join(r.metric_topk, " ") << ","
        << join(r.delay_topk, " ") << "\n";
}

inline std::vector<ComparisonRow> read_comparison(std::istream& in) {
  std::vector<ComparisonRow> out;
  std::size_t n = 1;
  auto members = [](const std::string& s) {
    std::vector<NodeId> v;
    for (auto& m : split(s, ' '))
      if (!m.empty()) v.push_back(std::move(m));
    return v;
  };
  for (auto& f : read_csv(in, kComparisonHeader)) {
    ++n;
    out.push_back({f[0], parse_uint(f[1], n), parse_double(f[2], n),
                   f[3] == "NA" ? std::nullopt : std::optional<double>(parse_double(f[3], n)),
                   members(f[4]), members(f[5])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text reports

struct MetricRankings {
  RankedClusters<NodeId> betweenness;
  std::optional<RankedClusters<NodeId>> eccentricity;
  RankedClusters<NodeId> eigenvector;
  RankedClusters<EdgeKey> edge_betweenness;
};

namespace detail {

inline std::string fixed2(double v) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

template <class Key>
std::string cell(const std::optional<RankedClusters<Key>>& r, std::size_t i, bool value) {
  if (!r) return "X";
  if (i >= r->clusters.size()) return "NA";
  const auto& c = r->clusters[i];
  return value ? fixed2(c.value) : "(" + join(c.members, ", ") + ")";
}

}  // namespace detail

/// Criticality table: one line per rank with the cluster of each metric and
/// its value; "X" marks a metric that cannot be computed and "NA" a rank the
/// metric does not reach.
inline void write_rank_table(std::ostream& out, const MetricRankings& m) {
  std::size_t depth = std::max({m.betweenness.clusters.size(), m.eigenvector.clusters.size(),
                                m.edge_betweenness.clusters.size(),
                                m.eccentricity ? m.eccentricity->clusters.size() : std::size_t{0}});
  const std::optional<RankedClusters<NodeId>> bet = m.betweenness, eig = m.eigenvector;
  const std::optional<RankedClusters<EdgeKey>> edge = m.edge_betweenness;
  out << "rank | betweenness | value | eccentricity | value | eigenvector | value | edge betweenness | value\n";
  for (std::size_t i = 0; i < depth; ++i) {
    out << (i + 1) << " | " << detail::cell(bet, i, false) << " | " << detail::cell(bet, i, true) << " | "
        << detail::cell(m.eccentricity, i, false) << " | " << detail::cell(m.eccentricity, i, true) << " | "
        << detail::cell(eig, i, false) << " | " << detail::cell(eig, i, true) << " | "
        << detail::cell(edge, i, false) << " | " << detail::cell(edge, i, true) << "\n";
  }
}

inline void write_comparison_text(std::ostream& out, const ComparisonReport& report,
                                  const DelayRanking& delay) {
  out << "delay ranking (final delay, s):\n";
  for (const auto& c : delay.ranking.clusters)
    out << "  " << c.rank << ". (" << join(c.members, ", ") << ") " << detail::fixed2(c.value) << "\n";
  out << "excluded:";
  for (const auto& e : report.excluded) out << " " << e.id << " (" << e.reason << ")";
  out << "\n";
  for (const auto& r : report.rows) {
    out << r.metric << ": overlap@" << r.k << " = " << detail::fixed2(r.overlap)
        << ", spearman = " << (r.spearman ? detail::fixed2(*r.spearman) : "NA") << ", metric top-k ("
        << join(r.metric_topk, ", ") << "), delay top-k (" << join(r.delay_topk, ", ") << ")\n";
  }
}

}  // namespace gridsim::io
