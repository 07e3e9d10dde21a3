#pragma once

#include <span>
#include <string>
#include <vector>

#include "tceer/fuzzy.hpp"
#include "tceer/metrics.hpp"
#include "tceer/sim_state.hpp"
#include "tceer/trust.hpp"

namespace tceer {

struct NodePotentialWeights {
  double alpha = 0.3;  // weight of the energy-distance metric
  double beta = 0.7;   // weight of the trust-congestion metric
};

// Weighted blend of the two controller outputs; with alpha + beta = 1
// this is the plain convex combination.
double node_potential(double edm_value, double tcm_value,
                      const NodePotentialWeights& w);

enum class RouteOutcome { Delivered, DroppedVoid, DroppedMalicious, DroppedDeadNode };

const char* to_string(RouteOutcome o);

struct RouteTrace {
  int packet_id = 0;
  int source = 0;
  int round = 0;
  std::vector<int> hops;  // every node that held the packet, source first
  bool reached_bs = false;
  RouteOutcome outcome = RouteOutcome::DroppedVoid;
};

// "packet_id,outcome,h0>h1>...[>BS]"
std::string format_route_line(const RouteTrace& t);

// Read-only view of the state a forwarding decision depends on.
struct RoutingContext {
  const Topology& topo;
  std::span<const NodeState> nodes;
  const TrustLedger& ledger;
  const FuzzyController& tcm;
  const FuzzyController& edm;
  CongestionParams congestion;
  MetricWeights weights;
  NodePotentialWeights np;
  double e_initial = 0.5;
};

// One-hop neighbors of `current` that are alive, unblocked and strictly
// closer to the BS. Ascending ids; may be empty.
std::vector<int> eligible_candidates(const RoutingContext& ctx, int current);

// Full scoring pipeline for one candidate: congestion/energy/distance
// metrics, both controllers, then the node potential.
double candidate_potential(const RoutingContext& ctx, int current, int candidate);

struct NextHop {
  enum class Kind { Relay, Deliver, Void };
  Kind kind = Kind::Void;
  int node = -1;  // valid for Relay only
};

// Direct delivery when the BS is in radio range; otherwise the eligible
// candidate with the highest node potential, ties broken by lowest id;
// Void when no candidate exists.
NextHop select_next_hop(const RoutingContext& ctx, int current);

// Baseline selector: ignores trust, congestion and energy entirely and
// picks the alive in-range neighbor closest to the BS (still requiring
// strict progress so routes terminate).
NextHop select_greedy_next_hop(const RoutingContext& ctx, int current);

}  // namespace tceer
