#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gridsim/error.hpp"
#include "gridsim/rng.hpp"
#include "gridsim/routing.hpp"
#include "gridsim/topology.hpp"

namespace gridsim {

enum class MonitorMode { Periodic, Exponential };

// Where an attacked router decides to drop a packet. OnArrival discards the
// packet before it joins the queue; OnServiceCompletion lets it consume
// server time first.
enum class DropPoint { OnArrival, OnServiceCompletion };

struct SimConfig {
  double mean_packet_size = 100.0;    // bytes
  double mean_interarrival = 2.0;     // seconds, per generator
  double router_service_rate = 2.2;   // packets per second
  double monitor_interval = 0.5;      // seconds
  double duration = 1000.0;           // seconds
  std::uint64_t seed = 1;
  std::size_t ttl = 0;                // forwarding-hop budget, 0 = unlimited
  double max_interarrival = 0.0;      // truncation of inter-arrival draws, 0 = none
  MonitorMode monitor_mode = MonitorMode::Periodic;
  DropPoint drop_point = DropPoint::OnArrival;
  std::uint64_t event_cap = 100'000'000;
  std::set<NodeId> disabled_generators;
  bool record_trace = false;

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0)) throw ValidationError(std::string(what) + " must be positive");
    };
    positive(mean_packet_size, "mean packet size");
    positive(mean_interarrival, "mean inter-arrival time");
    positive(router_service_rate, "router service rate");
    positive(monitor_interval, "monitor interval");
    positive(duration, "duration");
    if (max_interarrival < 0) throw ValidationError("inter-arrival truncation must be >= 0");
    if (event_cap == 0) throw ValidationError("event cap must be positive");
  }
};

// ---------------------------------------------------------------------------
// Scenarios

struct Scenario {
  enum class Kind { Stable, DoS, DDoS };

  Kind kind = Kind::Stable;
  std::vector<NodeId> targets;
  double attack_forwarding_probability = 0.01;

  static Scenario stable() { return {}; }
  static Scenario dos(NodeId target) { return {Kind::DoS, {std::move(target)}}; }
  static Scenario ddos(std::vector<NodeId> targets) { return {Kind::DDoS, std::move(targets)}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Grammar: "stable" | "dos:<id>" | "ddos:<id>,<id>[,...]".
inline Scenario parse_scenario(std::string_view s) {
  if (s == "stable") return Scenario::stable();
  auto colon = s.find(':');
  if (colon == std::string_view::npos) throw ParseError(0, "invalid scenario '" + std::string(s) + "'");
  auto head = s.substr(0, colon);
  auto rest = s.substr(colon + 1);
  std::vector<NodeId> ids;
  while (true) {
    auto comma = rest.find(',');
    auto tok = rest.substr(0, comma);
    if (tok.empty()) throw ParseError(0, "empty router id in scenario '" + std::string(s) + "'");
    ids.emplace_back(tok);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (head == "dos") {
    if (ids.size() != 1) throw ParseError(0, "dos takes exactly one router id");
    return Scenario::dos(ids.front());
  }
  if (head == "ddos") {
    if (ids.size() < 2) throw ParseError(0, "ddos takes two or more router ids");
    std::set<NodeId> distinct(ids.begin(), ids.end());
    if (distinct.size() != ids.size()) throw ParseError(0, "duplicate router id in ddos scenario");
    return Scenario::ddos(ids);
  }
  throw ParseError(0, "invalid scenario kind '" + std::string(head) + "'");
}

inline std::string to_string(const Scenario& sc) {
  switch (sc.kind) {
    case Scenario::Kind::Stable: return "stable";
    case Scenario::Kind::DoS: return "dos:" + sc.targets.at(0);
    case Scenario::Kind::DDoS: {
      std::string out = "ddos:";
      for (std::size_t i = 0; i < sc.targets.size(); ++i) out += (i ? "," : "") + sc.targets[i];
      return out;
    }
  }
  return "?";
}

// Filesystem-safe scenario label: "stable", "dos-5", "ddos-1-3".
inline std::string scenario_slug(const Scenario& sc) {
  std::string s = to_string(sc);
  std::replace(s.begin(), s.end(), ':', '-');
  std::replace(s.begin(), s.end(), ',', '-');
  return s;
}

inline void validate_scenario(const Scenario& sc, const Topology& t) {
  if (!(sc.attack_forwarding_probability > 0 && sc.attack_forwarding_probability <= 1))
    throw ValidationError("attack forwarding probability must lie in (0, 1]");
  if (sc.kind == Scenario::Kind::Stable) {
    if (!sc.targets.empty()) throw ValidationError("stable scenario takes no targets");
    return;
  }
  if (sc.targets.empty()) throw ValidationError("attack scenario without targets");
  if (sc.kind == Scenario::Kind::DoS && sc.targets.size() != 1)
    throw ValidationError("dos scenario takes exactly one target");
  for (const auto& id : sc.targets) {
    auto i = t.graph().find(id);
    if (!i) throw ValidationError("unknown router '" + id + "' in scenario");
    if (t.role(*i) != NodeRole::Router)
      throw ValidationError("scenario target '" + id + "' is not a router");
  }
}

// ---------------------------------------------------------------------------
// Simulation state and results

struct Packet {
  std::uint64_t id = 0;
  double size = 0.0;
  NodeIndex origin = 0;
  double created_at = 0.0;
  std::optional<NodeIndex> arrival_link;
  std::size_t hops = 0;
};

struct QueuedPacket {
  Packet packet;
  double entered_at;
};

struct RouterState {
  NodeId id;
  std::deque<QueuedPacket> queue;  // front is in service when busy
  bool busy = false;
  double busy_until = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t forwarded_count = 0;
  double cumulative_sojourn = 0.0;
  std::uint64_t dropped_count = 0;
  bool attacked = false;
  double forwarding_probability = 1.0;

  double delay() const {
    return forwarded_count ? cumulative_sojourn / static_cast<double>(forwarded_count) : 0.0;
  }
};

/// Marks the scenario's targets as attacked and records their forwarding
/// probability; every other field of every router is left as it was.
inline std::vector<RouterState> apply_scenario(const Scenario& sc, std::vector<RouterState> states) {
  for (const auto& target : sc.targets) {
    auto it = std::find_if(states.begin(), states.end(),
                           [&](const RouterState& s) { return s.id == target; });
    if (it == states.end()) throw ValidationError("unknown router '" + target + "' in scenario");
    it->attacked = true;
    it->forwarding_probability = sc.attack_forwarding_probability;
  }
  return states;
}

struct DelaySample {
  double time;
  double delay;
  friend bool operator==(const DelaySample&, const DelaySample&) = default;
};

struct RouterReport {
  NodeId id;
  double final_delay = 0.0;
  std::uint64_t arrivals = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t dropped_attack = 0;
  bool attacked = false;
  bool sink_adjacent = false;
  std::vector<DelaySample> series;
  friend bool operator==(const RouterReport&, const RouterReport&) = default;
};

struct Accounting {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_attack = 0;
  std::uint64_t dropped_ttl = 0;
  std::uint64_t in_flight = 0;

  bool conserved() const { return generated == delivered + dropped_attack + dropped_ttl + in_flight; }
  friend bool operator==(const Accounting&, const Accounting&) = default;
};

struct GenerationStats {
  std::uint64_t packets = 0;
  double size_sum = 0.0;
  std::uint64_t intervals = 0;
  double interarrival_sum = 0.0;

  double mean_size() const { return packets ? size_sum / static_cast<double>(packets) : 0.0; }
  double mean_interarrival() const {
    return intervals ? interarrival_sum / static_cast<double>(intervals) : 0.0;
  }
  friend bool operator==(const GenerationStats&, const GenerationStats&) = default;
};

enum class EventKind : std::uint8_t { Generate, Arrive, Depart, Monitor };

struct TraceEntry {
  double time;
  EventKind kind;
  NodeIndex node;
  std::uint64_t packet;  // 0 for generator/monitor events
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SimResult {
  std::string topology_name;
  std::string scenario;
  std::uint64_t seed = 0;
  double duration = 0.0;
  std::vector<RouterReport> routers;  // topology declaration order
  Accounting accounting;
  GenerationStats generation;
  std::uint64_t event_count = 0;
  std::vector<TraceEntry> trace;

  const RouterReport& router(std::string_view id) const {
    for (const auto& r : routers)
      if (r.id == id) return r;
    throw Error("no router '" + std::string(id) + "' in result");
  }

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

// ---------------------------------------------------------------------------
// Event loop

namespace detail {

struct Event {
  double time;
  std::uint64_t seq;
  EventKind kind;
  NodeIndex node;
  Packet packet;  // valid for Arrive
};

// Min-heap order on (time, insertion sequence).
struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  Simulation(const Topology& t, const SimConfig& cfg, const Scenario& sc)
      : topo_(t), cfg_(cfg), routing_(t) {
    cfg.validate();
    validate_scenario(sc, t);
    for (const auto& g : cfg.disabled_generators) {
      auto i = t.graph().find(g);
      if (!i || t.role(*i) != NodeRole::Generator)
        throw ValidationError("disabled generator '" + g + "' is not a generator");
    }

    router_slot_.assign(t.size(), kNone);
    std::vector<RouterState> states;
    for (NodeIndex r : t.nodes_with_role(NodeRole::Router)) {
      router_slot_[r] = router_nodes_.size();
      router_nodes_.push_back(r);
      states.emplace_back().id = t.id(r);
      router_rng_.push_back(Rng::stream(cfg.seed, StreamKind::Router, t.id(r)));
      monitor_rng_.push_back(Rng::stream(cfg.seed, StreamKind::Monitor, t.id(r)));
    }
    routers_ = apply_scenario(sc, std::move(states));

    generator_rng_.reserve(t.size());
    for (NodeIndex i = 0; i < t.size(); ++i)
      generator_rng_.push_back(Rng::stream(cfg.seed, StreamKind::Generator, t.id(i)));

    result_.topology_name = t.name();
    result_.scenario = to_string(sc);
    result_.seed = cfg.seed;
    result_.duration = cfg.duration;
    for (NodeIndex r : router_nodes_) {
      result_.routers.emplace_back().id = t.id(r);
      result_.routers.back().sink_adjacent = t.sink_adjacent(r);
    }
  }

  SimResult run() && {
    for (NodeIndex g : topo_.nodes_with_role(NodeRole::Generator)) {
      if (cfg_.disabled_generators.contains(topo_.id(g))) continue;
      schedule(interarrival(g), EventKind::Generate, g);
    }
    if (cfg_.monitor_mode == MonitorMode::Periodic) {
      schedule(cfg_.monitor_interval, EventKind::Monitor, kNone);
    } else {
      for (std::size_t k = 0; k < router_nodes_.size(); ++k)
        schedule(sample_exponential(monitor_rng_[k], cfg_.monitor_interval), EventKind::Monitor,
                 router_nodes_[k]);
    }

    while (!calendar_.empty() && calendar_.front().time <= cfg_.duration) {
      std::pop_heap(calendar_.begin(), calendar_.end(), EventAfter{});
      Event ev = std::move(calendar_.back());
      calendar_.pop_back();
      if (++result_.event_count > cfg_.event_cap)
        throw SimulationError("event cap of " + std::to_string(cfg_.event_cap) + " exceeded at t=" +
                              std::to_string(ev.time));
      now_ = ev.time;
      switch (ev.kind) {
        case EventKind::Generate: on_generate(ev.node); break;
        case EventKind::Arrive: on_arrive(ev.node, std::move(ev.packet)); break;
        case EventKind::Depart: on_depart(ev.node); break;
        case EventKind::Monitor: on_monitor(ev.node); break;
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void schedule(double time, EventKind kind, NodeIndex node, Packet packet = {}) {
    calendar_.push_back(Event{time, next_seq_++, kind, node, std::move(packet)});
    std::push_heap(calendar_.begin(), calendar_.end(), EventAfter{});
  }

  void trace(EventKind kind, NodeIndex node, std::uint64_t packet) {
    if (cfg_.record_trace) result_.trace.push_back({now_, kind, node, packet});
  }

  double interarrival(NodeIndex g) {
    double dt = sample_exponential(generator_rng_[g], cfg_.mean_interarrival);
    if (cfg_.max_interarrival > 0) dt = std::min(dt, cfg_.max_interarrival);
    return dt;
  }

  void on_generate(NodeIndex g) {
    trace(EventKind::Generate, g, 0);
    Rng& rng = generator_rng_[g];
    Packet p;
    p.id = ++packet_counter_;
    do {
      p.size = sample_exponential(rng, cfg_.mean_packet_size);
    } while (p.size <= 0.0);
    p.origin = g;
    p.created_at = now_;

    const auto& nbrs = topo_.graph().neighbors(g);
    NodeIndex router = nbrs.front();
    if (nbrs.size() > 1) {
      auto pick = static_cast<std::size_t>(rng.uniform() * static_cast<double>(nbrs.size()));
      router = nbrs[std::min(pick, nbrs.size() - 1)];
    }

    ++result_.accounting.generated;
    ++result_.generation.packets;
    result_.generation.size_sum += p.size;

    double dt = interarrival(g);
    ++result_.generation.intervals;
    result_.generation.interarrival_sum += dt;
    schedule(now_ + dt, EventKind::Generate, g);
    schedule(now_, EventKind::Arrive, router, std::move(p));
  }

  void on_arrive(NodeIndex node, Packet p) {
    const std::size_t k = router_slot_[node];
    RouterState& r = routers_[k];
    trace(EventKind::Arrive, node, p.id);
    ++r.arrivals;
    if (cfg_.drop_point == DropPoint::OnArrival && attack_drops(k)) return;
    r.queue.push_back({std::move(p), now_});
    if (!r.busy) start_service(k);
  }

  void start_service(std::size_t k) {
    RouterState& r = routers_[k];
    r.busy = true;
    r.busy_until = now_ + sample_exponential(router_rng_[k], 1.0 / cfg_.router_service_rate);
    schedule(r.busy_until, EventKind::Depart, router_nodes_[k]);
  }

  // Draws the forwarding decision of an attacked router; counts the drop.
  bool attack_drops(std::size_t k) {
    RouterState& r = routers_[k];
    if (!r.attacked || router_rng_[k].uniform() < r.forwarding_probability) return false;
    ++r.dropped_count;
    ++result_.accounting.dropped_attack;
    return true;
  }

  void on_depart(NodeIndex node) {
    const std::size_t k = router_slot_[node];
    RouterState& r = routers_[k];
    QueuedPacket qp = std::move(r.queue.front());
    r.queue.pop_front();
    r.busy = false;
    trace(EventKind::Depart, node, qp.packet.id);

    const bool dropped = cfg_.drop_point == DropPoint::OnServiceCompletion && attack_drops(k);
    if (!dropped) {
      r.cumulative_sojourn += now_ - qp.entered_at;
      ++r.forwarded_count;
      Packet p = std::move(qp.packet);
      NodeIndex next = next_hop(routing_, node, p.arrival_link, router_rng_[k]);
      p.arrival_link = node;
      ++p.hops;
      if (next == topo_.sink()) {
        ++result_.accounting.delivered;
      } else if (cfg_.ttl > 0 && p.hops >= cfg_.ttl) {
        ++result_.accounting.dropped_ttl;
      } else {
        schedule(now_, EventKind::Arrive, next, std::move(p));
      }
    }
    if (!r.queue.empty()) start_service(k);
  }

  void on_monitor(NodeIndex node) {
    trace(EventKind::Monitor, node, 0);
    if (node == kNone) {
      for (std::size_t k = 0; k < routers_.size(); ++k)
        result_.routers[k].series.push_back({now_, routers_[k].delay()});
      schedule(now_ + cfg_.monitor_interval, EventKind::Monitor, kNone);
    } else {
      const std::size_t k = router_slot_[node];
      result_.routers[k].series.push_back({now_, routers_[k].delay()});
      schedule(now_ + sample_exponential(monitor_rng_[k], cfg_.monitor_interval),
               EventKind::Monitor, node);
    }
  }

  void finish() {
    std::uint64_t in_flight = 0;
    for (const auto& r : routers_) in_flight += r.queue.size();
    for (const auto& ev : calendar_)
      if (ev.kind == EventKind::Arrive) ++in_flight;
    result_.accounting.in_flight = in_flight;
    for (std::size_t k = 0; k < routers_.size(); ++k) {
      auto& rep = result_.routers[k];
      const auto& st = routers_[k];
      rep.final_delay = st.delay();
      rep.arrivals = st.arrivals;
      rep.forwarded = st.forwarded_count;
      rep.dropped_attack = st.dropped_count;
      rep.attacked = st.attacked;
    }
  }

  const Topology& topo_;
  SimConfig cfg_;
  RoutingTable routing_;
  std::vector<RouterState> routers_;
  std::vector<NodeIndex> router_nodes_;
  std::vector<std::size_t> router_slot_;
  std::vector<Rng> router_rng_;
  std::vector<Rng> monitor_rng_;
  std::vector<Rng> generator_rng_;
  std::vector<Event> calendar_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t packet_counter_ = 0;
  double now_ = 0.0;
  SimResult result_;
};

}  // namespace detail

/// Runs one seeded simulation. Single-threaded and fully deterministic: the
/// same topology, configuration and scenario always produce the same result.
inline SimResult run(const Topology& t, const SimConfig& cfg, const Scenario& sc) {
  return detail::Simulation(t, cfg, sc).run();
}

}  // namespace gridsim
