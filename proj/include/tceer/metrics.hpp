#pragma once

#include "tceer/topology.hpp"

namespace tceer {

// Buffer-occupancy thresholds for the congestion index.
struct CongestionParams {
  double c_th_min = 10.0;
  double c_th_max = 40.0;
  double epsilon = 0.05;  // floor of the index, in (0,1)
};

// Weights of the energy and distance metrics.
struct MetricWeights {
  double omega = 0.2;  // share of the current node in the energy blend
  double k1 = 2.0;     // weight of the hop-distance complement
  double k2 = 3.0;     // weight of the BS-progress complement
};

// Queue-length congestion index: epsilon below c_th_min, 1 above
// c_th_max, linear in between (closed interval, continuous at both ends).
double congestion_index(double queue_len, const CongestionParams& p);

// Complement of the congestion index; high value = uncongested.
double cci(double queue_len, const CongestionParams& p);

// Blend of current-node and next-node residual energy, normalized by the
// initial battery so it lands on the controller universe [0,1].
double effective_residual_energy(double e_cn, double e_pnn, double omega,
                                 double e_initial);

struct DistanceRatios {
  double d1 = 0.0;  // hop distance / radio range
  double d2 = 0.0;  // candidate-to-BS distance / current-to-BS distance
};

// Throws std::domain_error when the current node sits on the BS.
DistanceRatios distance_ratios(const Position& current, const Position& candidate,
                               const Position& bs, double radio_range);

// Weighted mean of the complementary distances; higher is better.
double distance_metric(double d1, double d2, double k1, double k2);

}  // namespace tceer
