#pragma once

// Command-line front end: metrics | simulate | compare | cases.
//
// Output layout under --out DIR:
//   metrics/node_metrics.csv, metrics/edge_metrics.csv, metrics/rankings.csv
//   runs/<scenario>/<seed>/timeseries.csv, summary.csv, accounting.csv
//   compare/comparison.csv, compare/delay_ranking.csv, compare/report.txt
// <scenario> is the scenario string with ':' and ',' replaced by '-'.

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "gridsim/analysis.hpp"
#include "gridsim/cases.hpp"
#include "gridsim/io.hpp"
#include "gridsim/metrics.hpp"
#include "gridsim/simulator.hpp"
#include "gridsim/topology.hpp"

namespace gridsim::cli {

namespace fs = std::filesystem;

/// "1..10" is inclusive; lists are comma-separated and may mix both forms.
inline std::vector<std::uint64_t> parse_seeds(std::string_view s) {
  std::vector<std::uint64_t> out;
  for (const auto& part : io::split(s, ',')) {
    if (part.empty()) throw ParseError(0, "empty seed in '" + std::string(s) + "'");
    if (auto dots = part.find(".."); dots != std::string::npos) {
      auto lo = io::parse_uint(std::string_view(part).substr(0, dots));
      auto hi = io::parse_uint(std::string_view(part).substr(dots + 2));
      if (hi < lo) throw ParseError(0, "empty seed range '" + part + "'");
      if (hi - lo >= 1'000'000) throw ParseError(0, "seed range '" + part + "' too large");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(io::parse_uint(part));
    }
  }
  std::set<std::uint64_t> distinct(out.begin(), out.end());
  if (distinct.size() != out.size()) throw ParseError(0, "duplicate seeds in '" + std::string(s) + "'");
  return out;
}

struct RunManifest {
  std::string topology_file;
  int builtin = 0;
  std::vector<std::string> scenarios{"stable"};
  std::string seeds = "1";
  SimConfig config;
  std::string out_dir = "out";
  unsigned jobs = 1;
};

inline Topology load(const RunManifest& m) {
  if (!m.topology_file.empty()) return load_topology_file(m.topology_file);
  if (m.builtin == 0) throw Error("no topology given: use --topology FILE or --case N");
  return builtin_case(m.builtin);
}

inline fs::path run_dir(const fs::path& out, const Scenario& sc, std::uint64_t seed) {
  return out / "runs" / scenario_slug(sc) / std::to_string(seed);
}

inline std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot write '" + p.string() + "'");
  return f;
}

/// Runs every seed of one scenario, optionally on several worker threads.
/// Each run writes only under its own directory.
inline std::vector<SimResult> run_seeds(const Topology& t, const SimConfig& base, const Scenario& sc,
                                        const std::vector<std::uint64_t>& seeds, unsigned jobs,
                                        const std::optional<fs::path>& write_to) {
  std::vector<std::optional<SimResult>> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < seeds.size();) {
      try {
        SimConfig cfg = base;
        cfg.seed = seeds[i];
        SimResult r = run(t, cfg, sc);
        if (write_to) {
          const auto dir = run_dir(*write_to, sc, seeds[i]);
          auto ts = open_out(dir / "timeseries.csv");
          io::write_timeseries(ts, r);
          auto sum = open_out(dir / "summary.csv");
          io::write_summary(sum, io::summary_rows(r));
          auto acc = open_out(dir / "accounting.csv");
          io::write_accounting(acc, r.accounting);
        }
        results[i] = std::move(r);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<SimResult> out;
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

// Rebuilds minimal results from previously written summary files.
inline std::vector<SimResult> load_runs(const Topology& t, const fs::path& out, const Scenario& sc,
                                        const std::vector<std::uint64_t>& seeds) {
  const auto routers = t.ids_with_role(NodeRole::Router);
  std::vector<SimResult> results;
  for (auto seed : seeds) {
    const auto path = run_dir(out, sc, seed) / "summary.csv";
    std::ifstream in(path);
    if (!in) throw Error("missing run output '" + path.string() + "'");
    auto rows = io::read_summary(in);
    std::vector<NodeId> ids;
    for (const auto& r : rows) ids.push_back(r.router);
    if (ids != routers)
      throw Error("run output '" + path.string() + "' is incompatible with topology '" + t.name() + "'");
    SimResult r;
    r.topology_name = t.name();
    r.scenario = to_string(sc);
    r.seed = seed;
    for (const auto& row : rows)
      r.routers.push_back({row.router, row.final_delay, row.arrivals, row.forwarded, row.dropped_attack,
                           row.attacked, row.sink_adjacent, {}});
    results.push_back(std::move(r));
  }
  return results;
}

struct MetricsBundle {
  NodeCentrality betweenness;
  std::optional<NodeCentrality> eccentricity;
  NodeCentrality eigenvector;
  EdgeCentrality edge_betweenness;
  io::MetricRankings rankings;
};

inline MetricsBundle compute_metrics(const Topology& t, bool directed, double tie_epsilon, bool routers_only) {
  MetricsBundle m;
  m.betweenness = betweenness_centrality(t);
  m.eccentricity = eccentricity_centrality(t, directed);
  m.eigenvector = eigenvector_centrality(t);
  m.edge_betweenness = edge_betweenness(t);

  const auto nodes = routers_only ? router_nodes(t) : infrastructure_nodes(t);
  std::set<EdgeKey> edges;
  for (const auto& e : infrastructure_edges(t))
    if (nodes.contains(e.u) && nodes.contains(e.v)) edges.insert(e);
  m.rankings.betweenness = rank_with_ties(m.betweenness, Direction::HigherIsCritical, tie_epsilon,
                                          std::optional(nodes));
  if (m.eccentricity)
    m.rankings.eccentricity = rank_with_ties(*m.eccentricity, Direction::LowerIsCritical, tie_epsilon,
                                             std::optional(nodes));
  m.rankings.eigenvector = rank_with_ties(m.eigenvector, Direction::HigherIsCritical, tie_epsilon,
                                          std::optional(nodes));
  m.rankings.edge_betweenness = rank_with_ties(m.edge_betweenness, Direction::HigherIsCritical,
                                               tie_epsilon, std::optional(edges));
  return m;
}

inline void write_metrics(const Topology& t, const MetricsBundle& m, const fs::path& dir) {
  auto nodes = open_out(dir / "node_metrics.csv");
  io::write_node_metrics(nodes, io::node_metric_rows(t, m.betweenness, m.eccentricity, m.eigenvector));
  auto edges = open_out(dir / "edge_metrics.csv");
  io::write_edge_metrics(edges, m.edge_betweenness);
  std::vector<io::RankingRow> rows;
  io::append_ranking_rows(rows, "betweenness", m.rankings.betweenness);
  if (m.rankings.eccentricity) io::append_ranking_rows(rows, "eccentricity", *m.rankings.eccentricity);
  io::append_ranking_rows(rows, "eigenvector", m.rankings.eigenvector);
  io::append_ranking_rows(rows, "edge_betweenness", m.rankings.edge_betweenness);
  auto rankings = open_out(dir / "rankings.csv");
  io::write_rankings(rankings, rows);
}

inline void add_topology_options(CLI::App* cmd, RunManifest& m) {
  auto* file = cmd->add_option("--topology", m.topology_file, "Topology file");
  auto* builtin = cmd->add_option("--case", m.builtin, "Built-in case study (1, 2 or 3)")
                      ->check(CLI::Range(1, 3));
  file->excludes(builtin);
  cmd->add_option("--out", m.out_dir, "Output directory")->capture_default_str();
}

inline void add_sim_options(CLI::App* cmd, RunManifest& m) {
  auto* seeds = cmd->add_option("--seeds", m.seeds, "Seeds: list '1,2,3' or range '1..10'");
  auto* seed = cmd->add_option_function<std::uint64_t>(
      "--seed", [&m](std::uint64_t s) { m.seeds = std::to_string(s); }, "Single seed");
  seeds->excludes(seed);
  cmd->add_option("--duration", m.config.duration, "Simulated seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--mean-interarrival", m.config.mean_interarrival, "Mean generator inter-arrival (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-interarrival", m.config.max_interarrival, "Truncate inter-arrival draws (0 = off)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--mean-packet-size", m.config.mean_packet_size, "Mean packet size (bytes)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--service-rate", m.config.router_service_rate, "Router service rate (packets/s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--monitor-interval", m.config.monitor_interval, "Delay sampling interval (s)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--ttl", m.config.ttl, "Forwarding-hop budget (0 = unlimited)");
  cmd->add_option("--event-cap", m.config.event_cap, "Abort after this many events")->check(CLI::PositiveNumber);
  cmd->add_option("--monitor-mode", m.config.monitor_mode, "periodic | exponential")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, MonitorMode>{{"periodic", MonitorMode::Periodic},
                                             {"exponential", MonitorMode::Exponential}}));
  cmd->add_option("--drop-point", m.config.drop_point, "Attack drop point: arrival | service")
      ->transform(CLI::CheckedTransformer(std::map<std::string, DropPoint>{
          {"arrival", DropPoint::OnArrival}, {"service", DropPoint::OnServiceCompletion}}));
  cmd->add_option("--jobs", m.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
}

/// Entry point shared by the executable and the tests. Returns the exit status.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"Communication-network criticality: graph metrics vs. discrete-event simulation", "gridsim"};
  app.require_subcommand(1);

  RunManifest m;
  bool directed = false;
  bool routers_only = false;
  double tie_epsilon = kDefaultTieEpsilon;
  double attack_probability = 0.01;
  std::size_t k = kDefaultTopK;
  std::string aggregation = "mean";
  bool reuse_runs = false;

  auto* cases = app.add_subcommand("cases", "List built-in case studies");

  auto* metrics = app.add_subcommand("metrics", "Compute centrality metrics and criticality rankings");
  add_topology_options(metrics, m);
  metrics->add_flag("--directed", directed, "Eccentricity over one-way generator and sink links");
  metrics->add_flag("--routers-only", routers_only, "Rank routers only (default: routers and sink)");
  metrics->add_option("--tie-epsilon", tie_epsilon, "Tie tolerance for rank clusters")
      ->check(CLI::NonNegativeNumber);

  auto* simulate = app.add_subcommand("simulate", "Run seeded packet simulations");
  add_topology_options(simulate, m);
  add_sim_options(simulate, m);
  simulate->add_option("--scenario", m.scenarios, "stable | dos:<id> | ddos:<id>,<id>[,...] (repeatable)")
      ->take_all();
  simulate->add_option("--attack-probability", attack_probability, "Forwarding probability under attack")
      ->check(CLI::Range(0.0, 1.0));

  auto* compare = app.add_subcommand("compare", "Compare delay ranking against metric rankings");
  add_topology_options(compare, m);
  add_sim_options(compare, m);
  std::string compare_scenario = "stable";
  compare->add_option("--scenario", compare_scenario, "Scenario to rank by delay")->capture_default_str();
  compare->add_option("--attack-probability", attack_probability, "Forwarding probability under attack")
      ->check(CLI::Range(0.0, 1.0));
  compare->add_option("--k", k, "Top-k size")->check(CLI::PositiveNumber)->capture_default_str();
  compare->add_option("--tie-epsilon", tie_epsilon, "Tie tolerance for rank clusters")
      ->check(CLI::NonNegativeNumber);
  compare->add_flag("--directed", directed, "Eccentricity over one-way generator and sink links");
  compare->add_option("--aggregation", aggregation, "Cross-seed aggregation: mean | median")
      ->check(CLI::IsMember({"mean", "median"}));
  compare->add_flag("--reuse-runs", reuse_runs, "Read runs/<scenario>/<seed>/summary.csv instead of simulating");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const fs::path out_dir = m.out_dir;
    if (cases->parsed()) {
      for (int id = 1; id <= 3; ++id) {
        auto t = builtin_case(id);
        out << "case " << id << ": " << t.nodes_with_role(NodeRole::Router).size() << " routers, "
            << t.nodes_with_role(NodeRole::Generator).size() << " generators, sink " << t.id(t.sink()) << ", "
            << t.graph().edge_count() << " links" << (builtin_case_is_exact(id) ? "" : " (approximate)")
            << "\n";
      }
      return 0;
    }

    const Topology t = load(m);

    if (metrics->parsed()) {
      auto bundle = compute_metrics(t, directed, tie_epsilon, routers_only);
      write_metrics(t, bundle, out_dir / "metrics");
      io::write_rank_table(out, bundle.rankings);
      return 0;
    }

    const auto seeds = parse_seeds(m.seeds);

    if (simulate->parsed()) {
      if (m.scenarios.empty()) throw Error("at least one --scenario is required");
      std::vector<Scenario> scenarios;
      for (const auto& s : m.scenarios) {
        Scenario sc = parse_scenario(s);
        sc.attack_forwarding_probability = attack_probability;
        validate_scenario(sc, t);
        scenarios.push_back(std::move(sc));
      }
      for (const auto& sc : scenarios) {
        auto results = run_seeds(t, m.config, sc, seeds, m.jobs, out_dir);
        for (const auto& r : results) {
          const auto& a = r.accounting;
          out << to_string(sc) << " seed " << r.seed << ": generated " << a.generated << ", delivered "
              << a.delivered << ", dropped_attack " << a.dropped_attack << ", dropped_ttl " << a.dropped_ttl
              << ", in_flight " << a.in_flight << "\n";
        }
      }
      return 0;
    }

    if (compare->parsed()) {
      Scenario sc = parse_scenario(compare_scenario);
      sc.attack_forwarding_probability = attack_probability;
      validate_scenario(sc, t);
      auto results = reuse_runs ? load_runs(t, out_dir, sc, seeds)
                                : run_seeds(t, m.config, sc, seeds, m.jobs, out_dir);
      auto delay = rank_by_delay(results, t, k, tie_epsilon,
                                 aggregation == "median" ? Aggregation::Median : Aggregation::Mean);
      auto bundle = compute_metrics(t, directed, tie_epsilon, true);

      ComparisonReport report;
      report.excluded = delay.excluded;
      report.rows.push_back(compare_rankings(bundle.rankings.betweenness, delay, k, "betweenness"));
      if (bundle.rankings.eccentricity)
        report.rows.push_back(compare_rankings(*bundle.rankings.eccentricity, delay, k, "eccentricity"));
      report.rows.push_back(compare_rankings(bundle.rankings.eigenvector, delay, k, "eigenvector"));
      auto edge_scores = router_scores_from_edges(bundle.edge_betweenness, t);
      report.rows.push_back(compare_rankings(
          rank_with_ties(edge_scores, Direction::HigherIsCritical, tie_epsilon), delay, k, "edge_betweenness"));

      auto csv = open_out(out_dir / "compare" / "comparison.csv");
      io::write_comparison(csv, report.rows);
      std::vector<io::RankingRow> rows;
      io::append_ranking_rows(rows, "delay", delay.ranking);
      auto dr = open_out(out_dir / "compare" / "delay_ranking.csv");
      io::write_rankings(dr, rows);
      std::ostringstream text;
      io::write_comparison_text(text, report, delay);
      if (!bundle.rankings.eccentricity) text << "eccentricity: X (graph not strongly connected)\n";
      auto txt = open_out(out_dir / "compare" / "report.txt");
      txt << text.str();
      out << text.str();
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gridsim::cli
