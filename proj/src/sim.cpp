#include "tceer/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace tceer {

namespace {

// Residual at or below this is a dead battery; the remainder is folded
// into the consumed tally so the books stay exact.
constexpr double kDeathEps = 1e-12;

const SimConfig& validated(const SimConfig& cfg) {
  cfg.validate();
  return cfg;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw ConfigError("n", "need at least one node");
  if (field_width <= 0.0 || field_height <= 0.0)
    throw ConfigError("field_width/field_height", "field dimensions must be positive");
  if (bs.x < 0.0 || bs.x > field_width || bs.y < 0.0 || bs.y > field_height)
    throw ConfigError("bs_x/bs_y", "base station must lie inside the field");
  if (radio_range <= 0.0) throw ConfigError("radio_range", "must be positive");
  if (e_initial <= 0.0) throw ConfigError("e_initial", "must be positive");
  if (rounds < 1) throw ConfigError("rounds", "must be at least 1");
  if (sources_per_round < 0) throw ConfigError("sources_per_round", "must be >= 0");
  if (packet_size_bits <= 0.0) throw ConfigError("packet_size_bits", "must be positive");
  if (e_elec < 0.0) throw ConfigError("e_elec", "must be >= 0");
  if (eps_amp < 0.0) throw ConfigError("eps_amp", "must be >= 0");
  if (e_idle < 0.0) throw ConfigError("e_idle", "must be >= 0");
  if (buffer_capacity < 1) throw ConfigError("buffer_capacity", "must be >= 1");
  if (service_rate < 0) throw ConfigError("service_rate", "must be >= 0");
  if (!(congestion.c_th_min >= 0.0 && congestion.c_th_min < congestion.c_th_max &&
        congestion.c_th_max <= buffer_capacity))
    throw ConfigError("c_th_min/c_th_max",
                      "need 0 <= c_th_min < c_th_max <= buffer_capacity");
  if (!(congestion.epsilon > 0.0 && congestion.epsilon < 1.0))
    throw ConfigError("epsilon", "must lie strictly between 0 and 1");
  if (metric_weights.omega < 0.0 || metric_weights.omega > 1.0)
    throw ConfigError("omega", "must lie in [0,1]");
  if (metric_weights.k1 <= 0.0 || metric_weights.k2 <= 0.0)
    throw ConfigError("k1/k2", "must be positive");
  if (np_weights.alpha < 0.0 || np_weights.beta < 0.0 ||
      std::abs(np_weights.alpha + np_weights.beta - 1.0) > 1e-9)
    throw ConfigError("alpha/beta", "must be nonnegative and sum to 1");
  if (w_d < 0.0 || w_i < 0.0 || std::abs(w_d + w_i - 1.0) > 1e-9)
    throw ConfigError("w_d/w_i", "must be nonnegative and sum to 1");
  if (t_th < 0.0 || t_th > 1.0) throw ConfigError("t_th", "must lie in [0,1]");
  if (delta_t < 1) throw ConfigError("delta_t", "must be >= 1");

  if (!malicious.ids.empty()) {
    std::vector<int> ids = malicious.ids;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw ConfigError("malicious_ids", "duplicate node id");
    if (ids.front() < 0 || ids.back() >= n)
      throw ConfigError("malicious_ids", "node id out of range");
  } else {
    if (malicious.count < 0) throw ConfigError("malicious_count", "must be >= 0");
    if (malicious.fraction > 1.0)
      throw ConfigError("malicious_fraction", "must lie in [0,1]");
    const int k = malicious.fraction >= 0.0
                      ? static_cast<int>(std::lround(malicious.fraction * n))
                      : malicious.count;
    if (k > n) throw ConfigError("malicious_count", "exceeds node count");
  }
  if (malicious.p_drop < 0.0 || malicious.p_drop > 1.0)
    throw ConfigError("p_drop", "must lie in [0,1]");
  if (malicious.p_modify < 0.0 || malicious.p_modify > 1.0)
    throw ConfigError("p_modify", "must lie in [0,1]");

  try {
    apply_flc_overrides(make_tcm_controller(), flc);
    apply_flc_overrides(make_edm_controller(), flc);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("flc", e.what());
  }
}

void write_rounds_csv(std::ostream& out, std::span<const RoundStats> rounds) {
  out << "round,alive,dead_pct,delivered,dropped_void,dropped_malicious,energy_j,blocked\n";
  char buf[160];
  for (const RoundStats& r : rounds) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6g,%d,%d,%d,%.10f,%d\n", r.round,
                  r.alive, r.dead_pct, r.delivered, r.dropped_void,
                  r.dropped_malicious, r.energy_total_j, r.blocked);
    out << buf;
  }
}

void write_routes(std::ostream& out, std::span<const RouteTrace> traces) {
  for (const RouteTrace& t : traces) out << format_route_line(t) << '\n';
}

std::optional<int> lifetime_round(std::span<const RoundStats> rounds, double pct) {
  for (const RoundStats& r : rounds)
    if (r.dead_pct >= pct) return r.round;
  return std::nullopt;
}

Simulation::Simulation(const SimConfig& cfg, Router router)
    : cfg_(validated(cfg)),
      router_(router),
      rng_(cfg.seed),
      topo_(deploy(cfg.n, cfg.field_width, cfg.field_height, cfg.bs,
                   cfg.radio_range, rng_)),
      ledger_(cfg.n, cfg.w_d, cfg.w_i, cfg.t_th),
      tcm_(apply_flc_overrides(make_tcm_controller(), cfg.flc)),
      edm_(apply_flc_overrides(make_edm_controller(), cfg.flc)) {
  init_nodes();
  plant_malicious();
}

Simulation::Simulation(const SimConfig& cfg, Topology topo, Router router)
    : cfg_(validated(cfg)),
      router_(router),
      rng_(cfg.seed),
      topo_(std::move(topo)),
      ledger_(cfg.n, cfg.w_d, cfg.w_i, cfg.t_th),
      tcm_(apply_flc_overrides(make_tcm_controller(), cfg.flc)),
      edm_(apply_flc_overrides(make_edm_controller(), cfg.flc)) {
  if (topo_.size() != cfg_.n)
    throw ConfigError("n", "does not match the node count of the pinned topology");
  init_nodes();
  plant_malicious();
}

void Simulation::init_nodes() {
  nodes_.resize(static_cast<std::size_t>(cfg_.n));
  for (int i = 0; i < cfg_.n; ++i) {
    NodeState& nd = nodes_[static_cast<std::size_t>(i)];
    nd.id = i;
    nd.pos = topo_.nodes[static_cast<std::size_t>(i)];
    nd.residual_energy = cfg_.e_initial;
    nd.queue_len = 0;
    nd.capacity = cfg_.buffer_capacity;
    nd.alive = true;
    nd.behavior = Behavior{};
  }
  death_round_.assign(static_cast<std::size_t>(cfg_.n), -1);
}

void Simulation::plant_malicious() {
  const MaliciousSpec& m = cfg_.malicious;
  std::vector<int> chosen;
  if (!m.ids.empty()) {
    chosen = m.ids;
  } else {
    const int k = m.fraction >= 0.0
                      ? static_cast<int>(std::lround(m.fraction * cfg_.n))
                      : m.count;
    if (k > 0) {
      std::vector<int> pool;
      if (m.placement == MaliciousSpec::Placement::Relay) {
        // Nodes that carry transit traffic from the start (the initial
        // best-candidate target of at least one other node) and that can
        // forward onward themselves, so their behavior is observable.
        std::vector<char> is_target(static_cast<std::size_t>(cfg_.n), 0);
        const RoutingContext ctx = context();
        for (int i = 0; i < cfg_.n; ++i) {
          const NextHop nh = select_next_hop(ctx, i);
          if (nh.kind == NextHop::Kind::Relay)
            is_target[static_cast<std::size_t>(nh.node)] = 1;
        }
        for (int i = 0; i < cfg_.n; ++i) {
          if (!is_target[static_cast<std::size_t>(i)]) continue;
          if (select_next_hop(ctx, i).kind == NextHop::Kind::Void) continue;
          pool.push_back(i);
        }
      } else {
        for (int i = 0; i < cfg_.n; ++i) pool.push_back(i);
      }
      chosen = rng_.sample(pool, static_cast<std::size_t>(k));
      if (static_cast<int>(chosen.size()) < k) {
        // Relay pool too small; top up from the rest of the network.
        std::vector<int> rest;
        for (int i = 0; i < cfg_.n; ++i)
          if (std::find(chosen.begin(), chosen.end(), i) == chosen.end())
            rest.push_back(i);
        for (int id : rng_.sample(rest, static_cast<std::size_t>(k) - chosen.size()))
          chosen.push_back(id);
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  malicious_ids_ = chosen;
  for (int id : malicious_ids_) {
    Behavior b;
    b.kind = m.behavior;
    b.param = m.behavior == BehaviorKind::Modifier ? m.p_modify : m.p_drop;
    nodes_[static_cast<std::size_t>(id)].behavior = b;
  }
}

RoutingContext Simulation::context() const {
  return RoutingContext{topo_,
                        std::span<const NodeState>(nodes_),
                        ledger_,
                        tcm_,
                        edm_,
                        cfg_.congestion,
                        cfg_.metric_weights,
                        cfg_.np_weights,
                        cfg_.e_initial};
}

int Simulation::alive_count() const {
  int c = 0;
  for (const NodeState& nd : nodes_)
    if (nd.alive) ++c;
  return c;
}

std::vector<char> Simulation::alive_flags() const {
  std::vector<char> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].alive ? 1 : 0;
  return out;
}

void Simulation::debit(int id, double joules) {
  NodeState& nd = nodes_[static_cast<std::size_t>(id)];
  if (!nd.alive || joules <= 0.0) return;
  const double spend = std::min(nd.residual_energy, joules);
  nd.residual_energy -= spend;
  energy_consumed_ += spend;
  if (nd.residual_energy <= kDeathEps) {
    energy_consumed_ += nd.residual_energy;
    nd.residual_energy = 0.0;
    nd.alive = false;
    death_round_[static_cast<std::size_t>(id)] = round_;
  }
}

RouteTrace Simulation::route_packet(int source) {
  RouteTrace tr;
  tr.packet_id = next_packet_id_++;
  tr.source = source;
  tr.round = round_;
  tr.hops.push_back(source);

  int current = source;
  int upstream = -1;  // watchdog observing the current holder
  for (;;) {
    const RoutingContext ctx = context();
    const NextHop nh = router_ == Router::Tceer ? select_next_hop(ctx, current)
                                                : select_greedy_next_hop(ctx, current);
    if (nh.kind == NextHop::Kind::Void) {
      // Dead end; the holder had no forwarding opportunity, so its
      // watchdog window is left untouched.
      tr.outcome = RouteOutcome::DroppedVoid;
      ++rr_void_;
      return tr;
    }

    NodeState& cur = nodes_[static_cast<std::size_t>(current)];
    if (upstream >= 0 && cur.behavior.kind == BehaviorKind::Dropper &&
        rng_.bernoulli(cur.behavior.param)) {
      ledger_.record_drop(upstream, current);
      tr.outcome = RouteOutcome::DroppedMalicious;
      ++rr_malicious_;
      return tr;
    }
    bool corrupt = false;
    if (upstream >= 0 && cur.behavior.kind == BehaviorKind::Modifier &&
        rng_.bernoulli(cur.behavior.param))
      corrupt = true;

    const double tx_dist = nh.kind == NextHop::Kind::Deliver
                               ? topo_.bs_distance(current)
                               : distance(cur.pos, nodes_[static_cast<std::size_t>(nh.node)].pos);
    debit(current, cfg_.tx_energy(tx_dist));
    if (upstream >= 0) ledger_.record_forward(upstream, current, !corrupt);

    if (nh.kind == NextHop::Kind::Deliver) {
      if (corrupt) {
        // The BS rejects the mangled address.
        tr.outcome = RouteOutcome::DroppedMalicious;
        ++rr_malicious_;
        return tr;
      }
      tr.reached_bs = true;
      tr.outcome = RouteOutcome::Delivered;
      ++rr_delivered_;
      return tr;
    }

    const int v = nh.node;
    debit(v, cfg_.rx_energy());
    tr.hops.push_back(v);
    NodeState& relay = nodes_[static_cast<std::size_t>(v)];
    if (!relay.alive) {
      // Battery died on reception; the packet dies with it.
      tr.outcome = RouteOutcome::DroppedDeadNode;
      return tr;
    }
    if (corrupt) {
      // Downstream neighbor detects the corrupted address and discards.
      tr.outcome = RouteOutcome::DroppedMalicious;
      ++rr_malicious_;
      return tr;
    }
    if (relay.queue_len >= relay.capacity) {
      // Buffer overflow: nowhere to hold the packet.
      tr.outcome = RouteOutcome::DroppedVoid;
      ++rr_void_;
      return tr;
    }
    ++relay.queue_len;
    upstream = current;
    current = v;
  }
}

RouteTrace Simulation::route_packet_frozen(int source) const {
  RouteTrace tr;
  tr.source = source;
  tr.round = round_;
  tr.hops.push_back(source);
  const RoutingContext ctx = context();
  int current = source;
  for (;;) {
    const NextHop nh = router_ == Router::Tceer ? select_next_hop(ctx, current)
                                                : select_greedy_next_hop(ctx, current);
    if (nh.kind == NextHop::Kind::Void) {
      tr.outcome = RouteOutcome::DroppedVoid;
      return tr;
    }
    if (nh.kind == NextHop::Kind::Deliver) {
      tr.reached_bs = true;
      tr.outcome = RouteOutcome::Delivered;
      return tr;
    }
    tr.hops.push_back(nh.node);
    current = nh.node;
  }
}

std::vector<int> Simulation::draw_sources() {
  std::vector<int> pool;
  for (int i = 0; i < cfg_.n; ++i)
    if (nodes_[static_cast<std::size_t>(i)].alive && !ledger_.is_blocked(i))
      pool.push_back(i);
  return rng_.sample(std::move(pool), static_cast<std::size_t>(cfg_.sources_per_round));
}

RoundStats Simulation::step_round_with_sources(std::span<const int> sources) {
  ++round_;
  last_round_traces_.clear();
  rr_delivered_ = rr_void_ = rr_malicious_ = 0;

  for (NodeState& nd : nodes_)
    nd.queue_len = std::max(0, nd.queue_len - cfg_.service_rate);

  if (cfg_.e_idle > 0.0)
    for (int i = 0; i < cfg_.n; ++i)
      if (nodes_[static_cast<std::size_t>(i)].alive) debit(i, cfg_.e_idle);

  for (int s : sources) {
    if (s < 0 || s >= cfg_.n) throw std::invalid_argument("source id out of range");
    // Earlier packets this round may have killed or blocked a source.
    if (!nodes_[static_cast<std::size_t>(s)].alive || ledger_.is_blocked(s)) continue;
    last_round_traces_.push_back(route_packet(s));
  }

  if (round_ % cfg_.delta_t == 0) {
    std::vector<double> energy(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      energy[i] = nodes_[i].residual_energy;
    const std::vector<char> alive = alive_flags();
    ledger_.update(topo_, energy, alive, cfg_.e_initial, round_);
  }

  RoundStats rs;
  rs.round = round_;
  rs.alive = alive_count();
  rs.dead_pct = 100.0 * (cfg_.n - rs.alive) / cfg_.n;
  rs.delivered = rr_delivered_;
  rs.dropped_void = rr_void_;
  rs.dropped_malicious = rr_malicious_;
  rs.energy_total_j = energy_consumed_;
  rs.blocked = ledger_.blocked_count();
  return rs;
}

RoundStats Simulation::step_round() {
  const std::vector<int> sources = draw_sources();
  return step_round_with_sources(sources);
}

RunResult Simulation::run(std::ostream* trust_csv) {
  RunResult out;
  while (round_ < cfg_.rounds && alive_count() > 0) {
    out.rounds.push_back(step_round());
    out.traces.insert(out.traces.end(), last_round_traces_.begin(),
                      last_round_traces_.end());
    if (trust_csv && round_ % cfg_.delta_t == 0) {
      const std::vector<char> alive = alive_flags();
      ledger_.write_snapshot(*trust_csv, topo_, alive, round_);
    }
  }
  return out;
}

std::vector<RouteTrace> Simulation::trace_packets(int source, int packets, bool freeze) {
  if (source < 0 || source >= cfg_.n)
    throw std::invalid_argument("trace source id out of range");
  std::vector<RouteTrace> out;
  out.reserve(static_cast<std::size_t>(packets));

  if (freeze) {
    for (int k = 0; k < packets; ++k) {
      RouteTrace tr = route_packet_frozen(source);
      tr.packet_id = k;
      out.push_back(std::move(tr));
    }
    return out;
  }

  for (int k = 0; k < packets; ++k) {
    if (!nodes_[static_cast<std::size_t>(source)].alive)
      throw std::runtime_error("trace source node died at round " +
                               std::to_string(round_));
    if (ledger_.is_blocked(source))
      throw std::runtime_error("trace source node was blocked at round " +
                               std::to_string(ledger_.block_round(source)));
    // The traced node goes first, then the usual background sources.
    std::vector<int> sources{source};
    std::vector<int> pool;
    for (int i = 0; i < cfg_.n; ++i)
      if (i != source && nodes_[static_cast<std::size_t>(i)].alive &&
          !ledger_.is_blocked(i))
        pool.push_back(i);
    const int background = std::max(0, cfg_.sources_per_round - 1);
    for (int id : rng_.sample(std::move(pool), static_cast<std::size_t>(background)))
      sources.push_back(id);
    step_round_with_sources(sources);
    out.push_back(last_round_traces_.front());
  }
  return out;
}

}  // namespace tceer
