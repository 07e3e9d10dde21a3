#include "tceer/routing.hpp"

#include <stdexcept>

namespace tceer {

double node_potential(double edm_value, double tcm_value,
                      const NodePotentialWeights& w) {
  const double sum = w.alpha + w.beta;
  if (w.alpha < 0.0 || w.beta < 0.0 || sum <= 0.0)
    throw std::invalid_argument("node potential weights must be nonnegative with a positive sum");
  return (w.alpha * edm_value + w.beta * tcm_value) / sum;
}

const char* to_string(RouteOutcome o) {
  switch (o) {
    case RouteOutcome::Delivered: return "Delivered";
    case RouteOutcome::DroppedVoid: return "DroppedVoid";
    case RouteOutcome::DroppedMalicious: return "DroppedMalicious";
    case RouteOutcome::DroppedDeadNode: return "DroppedDeadNode";
  }
  return "?";
}

std::string format_route_line(const RouteTrace& t) {
  std::string line = std::to_string(t.packet_id);
  line += ',';
  line += to_string(t.outcome);
  line += ',';
  for (std::size_t i = 0; i < t.hops.size(); ++i) {
    if (i) line += '>';
    line += std::to_string(t.hops[i]);
  }
  if (t.reached_bs) line += ">BS";
  return line;
}

std::vector<int> eligible_candidates(const RoutingContext& ctx, int current) {
  std::vector<int> out;
  const double my_bs_dist = ctx.topo.bs_distance(current);
  for (int j : ctx.topo.one_hop_neighbors(current)) {
    const NodeState& cand = ctx.nodes[static_cast<std::size_t>(j)];
    if (!cand.alive) continue;
    if (ctx.ledger.is_blocked(j)) continue;
    if (ctx.topo.bs_distance(j) >= my_bs_dist) continue;  // must make progress
    out.push_back(j);
  }
  return out;
}

double candidate_potential(const RoutingContext& ctx, int current, int candidate) {
  const NodeState& cur = ctx.nodes[static_cast<std::size_t>(current)];
  const NodeState& cand = ctx.nodes[static_cast<std::size_t>(candidate)];

  const double trust = ctx.ledger.overall(current, candidate);
  const double uncongested = cci(cand.queue_len, ctx.congestion);
  const double tcm_value = ctx.tcm.infer(trust, uncongested);

  const double energy = effective_residual_energy(
      cur.residual_energy, cand.residual_energy, ctx.weights.omega, ctx.e_initial);
  const DistanceRatios dr = distance_ratios(cur.pos, cand.pos,
                                            ctx.topo.base_station,
                                            ctx.topo.radio_range);
  const double dm = distance_metric(dr.d1, dr.d2, ctx.weights.k1, ctx.weights.k2);
  const double edm_value = ctx.edm.infer(energy, dm);

  return node_potential(edm_value, tcm_value, ctx.np);
}

NextHop select_next_hop(const RoutingContext& ctx, int current) {
  if (ctx.topo.bs_in_range(current)) return {NextHop::Kind::Deliver, -1};
  NextHop best{NextHop::Kind::Void, -1};
  double best_np = -1.0;
  for (int j : eligible_candidates(ctx, current)) {
    const double np = candidate_potential(ctx, current, j);
    if (np > best_np) {  // candidates ascend by id, so ties keep the lowest
      best_np = np;
      best = {NextHop::Kind::Relay, j};
    }
  }
  return best;
}

NextHop select_greedy_next_hop(const RoutingContext& ctx, int current) {
  if (ctx.topo.bs_in_range(current)) return {NextHop::Kind::Deliver, -1};
  const double my_bs_dist = ctx.topo.bs_distance(current);
  NextHop best{NextHop::Kind::Void, -1};
  double best_dist = my_bs_dist;
  for (int j : ctx.topo.one_hop_neighbors(current)) {
    if (!ctx.nodes[static_cast<std::size_t>(j)].alive) continue;
    const double d = ctx.topo.bs_distance(j);
    if (d < best_dist) {
      best_dist = d;
      best = {NextHop::Kind::Relay, j};
    }
  }
  return best;
}

}  // namespace tceer
