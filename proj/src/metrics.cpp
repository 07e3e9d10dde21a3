#include "tceer/metrics.hpp"

#include <stdexcept>

namespace tceer {

double congestion_index(double queue_len, const CongestionParams& p) {
  if (queue_len < p.c_th_min) return p.epsilon;
  if (queue_len > p.c_th_max) return 1.0;
  return (1.0 - p.epsilon) * (queue_len - p.c_th_min) / (p.c_th_max - p.c_th_min) +
         p.epsilon;
}

double cci(double queue_len, const CongestionParams& p) {
  return 1.0 - congestion_index(queue_len, p);
}

double effective_residual_energy(double e_cn, double e_pnn, double omega,
                                 double e_initial) {
  if (e_initial <= 0.0) throw std::invalid_argument("e_initial must be positive");
  return (omega * e_cn + (1.0 - omega) * e_pnn) / e_initial;
}

DistanceRatios distance_ratios(const Position& current, const Position& candidate,
                               const Position& bs, double radio_range) {
  const double to_bs = distance(current, bs);
  if (to_bs == 0.0) throw std::domain_error("current node is at base station");
  DistanceRatios r;
  r.d1 = distance(current, candidate) / radio_range;
  r.d2 = distance(candidate, bs) / to_bs;
  return r;
}

double distance_metric(double d1, double d2, double k1, double k2) {
  return (k1 * (1.0 - d1) + k2 * (1.0 - d2)) / (k1 + k2);
}

}  // namespace tceer
