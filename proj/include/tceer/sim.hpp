#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tceer/fuzzy.hpp"
#include "tceer/metrics.hpp"
#include "tceer/routing.hpp"
#include "tceer/rng.hpp"
#include "tceer/sim_state.hpp"
#include "tceer/topology.hpp"
#include "tceer/trust.hpp"

namespace tceer {

// Validation failure that names the offending configuration field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error("config field '" + field + "': " + msg),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct MaliciousSpec {
  // Explicit ids win; otherwise `count` (or `fraction` when >= 0) nodes
  // are planted from the seeded stream.
  std::vector<int> ids;
  int count = 10;
  double fraction = -1.0;
  BehaviorKind behavior = BehaviorKind::Dropper;
  double p_drop = 0.8;
  double p_modify = 0.8;
  // Relay placement picks nodes that can actually carry transit traffic
  // (at least one neighbor farther from the BS), so misbehavior is
  // observable; Anywhere samples uniformly.
  enum class Placement { Relay, Anywhere };
  Placement placement = Placement::Relay;
};

struct SimConfig {
  int n = 50;
  double field_width = 200.0;
  double field_height = 200.0;
  Position bs{100.0, 100.0};
  double radio_range = 50.0;
  double e_initial = 0.5;  // joules per node
  int rounds = 6000;
  int sources_per_round = 30;
  double packet_size_bits = 4000.0;
  double e_elec = 50e-9;    // J/bit
  double eps_amp = 10e-12;  // J/bit/m^2
  double e_idle = 1e-4;     // J per node per round
  int buffer_capacity = 50;
  int service_rate = 3;  // packets drained per round
  CongestionParams congestion{};
  MetricWeights metric_weights{};
  NodePotentialWeights np_weights{};
  double w_d = 0.7;
  double w_i = 0.3;
  double t_th = 0.5;
  int delta_t = 5;  // trust update period, rounds
  MaliciousSpec malicious{};
  std::uint64_t seed = 7;
  FlcOverrides flc{};

  void validate() const;  // throws ConfigError

  double tx_energy(double dist) const {
    return e_elec * packet_size_bits + eps_amp * packet_size_bits * dist * dist;
  }
  double rx_energy() const { return e_elec * packet_size_bits; }
};

struct RoundStats {
  int round = 0;
  int alive = 0;
  double dead_pct = 0.0;
  int delivered = 0;          // this round
  int dropped_void = 0;       // this round, incl. buffer overflow
  int dropped_malicious = 0;  // this round
  double energy_total_j = 0.0;  // cumulative consumed energy
  int blocked = 0;              // cumulative
};

struct RunResult {
  std::vector<RoundStats> rounds;
  std::vector<RouteTrace> traces;
};

void write_rounds_csv(std::ostream& out, std::span<const RoundStats> rounds);
void write_routes(std::ostream& out, std::span<const RouteTrace> traces);

// First round at which dead_pct >= pct, or nullopt if never reached.
std::optional<int> lifetime_round(std::span<const RoundStats> rounds, double pct);

// Round-based driver. One seeded stream feeds deployment, malicious
// planting, source selection and behavior coin flips, in that order, so a
// config replays byte-identically.
class Simulation {
 public:
  enum class Router { Tceer, Greedy };

  explicit Simulation(const SimConfig& cfg, Router router = Router::Tceer);
  // Pinned layout: deployment draws are skipped entirely.
  Simulation(const SimConfig& cfg, Topology topo, Router router = Router::Tceer);

  // One round: advance counter, drain queues, idle energy, traffic from
  // the given sources, periodic trust update, stats. Dead or blocked
  // entries in `sources` are skipped.
  RoundStats step_round_with_sources(std::span<const int> sources);
  // Same with sources drawn from the seeded stream.
  RoundStats step_round();

  // Runs until the configured horizon or total death. When `trust_csv`
  // is given, a ledger snapshot is appended after every periodic update.
  RunResult run(std::ostream* trust_csv = nullptr);

  RouteTrace route_packet(int source);
  // Pure selection walk against the current state; mutates nothing.
  RouteTrace route_packet_frozen(int source) const;

  // Routes `packets` packets from `source`, one per round, alongside the
  // usual background traffic; with `freeze` the state is left untouched
  // and the walk repeats against the initial snapshot.
  std::vector<RouteTrace> trace_packets(int source, int packets, bool freeze);

  const SimConfig& config() const { return cfg_; }
  const Topology& topology() const { return topo_; }
  std::span<const NodeState> nodes() const { return nodes_; }
  const TrustLedger& ledger() const { return ledger_; }
  int round() const { return round_; }
  int alive_count() const;
  const std::vector<int>& malicious_ids() const { return malicious_ids_; }
  int death_round(int id) const { return death_round_[static_cast<std::size_t>(id)]; }
  double energy_consumed() const { return energy_consumed_; }
  const std::vector<RouteTrace>& last_round_traces() const { return last_round_traces_; }
  RoutingContext context() const;

 private:
  void init_nodes();
  void plant_malicious();
  std::vector<int> draw_sources();
  void debit(int id, double joules);
  std::vector<char> alive_flags() const;

  SimConfig cfg_;
  Router router_;
  Rng rng_;
  Topology topo_;
  std::vector<NodeState> nodes_;
  TrustLedger ledger_;
  FuzzyController tcm_;
  FuzzyController edm_;
  std::vector<int> malicious_ids_;
  std::vector<int> death_round_;
  std::vector<RouteTrace> last_round_traces_;
  int round_ = 0;
  int next_packet_id_ = 0;
  double energy_consumed_ = 0.0;
  int rr_delivered_ = 0, rr_void_ = 0, rr_malicious_ = 0;
};

}  // namespace tceer
