#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "tceer/topology.hpp"

namespace tceer {

// Geometric mean of behavioral trust metrics, each in [0,1].
// Throws std::invalid_argument when the list is empty.
double direct_trust(std::span<const double> trust_metrics);

// Geometric mean of recommended direct trusts; an empty recommendation
// list yields the neutral prior 0.5.
double indirect_trust(std::span<const double> recommendations);

// Weighted blend of direct and indirect trust. The weights must sum to 1
// within 1e-9 or the call throws.
double overall_trust(double dt, double it, double w_d, double w_i);

enum class TrustClass { Trusted, Malicious };

// Boundary t == t_th counts as Trusted.
TrustClass classify(double t, double t_th);

struct TrustMetricSample {
  double forwarded_ratio = 1.0;
  double address_integrity_ratio = 1.0;
  double normalized_remaining_energy = 1.0;
};

// Watchdog counters accumulated by one observer about one subject since
// the last periodic update.
struct BehaviorWindow {
  std::uint32_t accepted = 0;   // packets the subject took custody of
  std::uint32_t forwarded = 0;  // packets it passed on
  std::uint32_t modified = 0;   // forwarded packets with a corrupted address
};

// Floor applied to the energy metric only; the behavioral ratios may
// legitimately reach 0 for attackers.
inline constexpr double kEnergyTmFloor = 0.01;

// Per directed pair (observer, subject) trust state plus the global
// blocked set. Blocking is permanent: once a subject falls below the
// threshold for any observer it never re-enters routing.
class TrustLedger {
 public:
  TrustLedger(int n, double w_d, double w_i, double t_th);

  void record_forward(int observer, int subject, bool address_intact);
  void record_drop(int observer, int subject);

  double direct(int observer, int subject) const { return dt_[idx(observer, subject)]; }
  double indirect(int observer, int subject) const { return it_[idx(observer, subject)]; }
  double overall(int observer, int subject) const { return t_[idx(observer, subject)]; }
  const TrustMetricSample& sample(int observer, int subject) const {
    return sample_[idx(observer, subject)];
  }
  const BehaviorWindow& window(int observer, int subject) const {
    return window_[idx(observer, subject)];
  }

  bool is_blocked(int id) const { return blocked_[static_cast<std::size_t>(id)] != 0; }
  // -1 while unblocked.
  int block_round(int id) const { return block_round_[static_cast<std::size_t>(id)]; }
  int blocked_count() const { return blocked_count_; }
  std::vector<int> blocked_ids() const;

  double threshold() const { return t_th_; }

  // Periodic update: recompute the TM sample of every alive
  // observer/neighbor pair from its window, derive DT, then IT from the
  // fresh DTs of the observer's other trusted neighbors, then T. Subjects
  // falling below the threshold are blocked at the end of the pass.
  // Windows are reset so each update covers one observation period.
  void update(const Topology& topo, std::span<const double> residual_energy,
              std::span<const char> alive, double e_initial, int round);

  // "round,observer,subject,DT,IT,T,classification" lines for every alive
  // observer/subject neighbor pair.
  void write_snapshot(std::ostream& out, const Topology& topo,
                      std::span<const char> alive, int round) const;

 private:
  std::size_t idx(int o, int s) const {
    return static_cast<std::size_t>(o) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(s);
  }

  int n_;
  double w_d_, w_i_, t_th_;
  std::vector<double> dt_, it_, t_;
  std::vector<TrustMetricSample> sample_;
  std::vector<BehaviorWindow> window_;
  std::vector<char> blocked_;
  std::vector<int> block_round_;
  int blocked_count_ = 0;
};

}  // namespace tceer
