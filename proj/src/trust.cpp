#include "tceer/trust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tceer {

namespace {

double geometric_mean(std::span<const double> xs) {
  double product = 1.0;
  for (double x : xs) {
    if (x < 0.0 || x > 1.0)
      throw std::invalid_argument("trust value outside [0,1]");
    product *= x;
  }
  return std::pow(product, 1.0 / static_cast<double>(xs.size()));
}

}  // namespace

double direct_trust(std::span<const double> trust_metrics) {
  if (trust_metrics.empty()) throw std::invalid_argument("no trust metrics");
  return geometric_mean(trust_metrics);
}

double indirect_trust(std::span<const double> recommendations) {
  if (recommendations.empty()) return 0.5;
  return geometric_mean(recommendations);
}

double overall_trust(double dt, double it, double w_d, double w_i) {
  if (w_d < 0.0 || w_i < 0.0 || std::abs(w_d + w_i - 1.0) > 1e-9)
    throw std::invalid_argument("trust weights must be nonnegative and sum to 1");
  if (dt < 0.0 || dt > 1.0 || it < 0.0 || it > 1.0)
    throw std::invalid_argument("trust value outside [0,1]");
  return std::clamp(w_d * dt + w_i * it, 0.0, 1.0);
}

TrustClass classify(double t, double t_th) {
  return t >= t_th ? TrustClass::Trusted : TrustClass::Malicious;
}

TrustLedger::TrustLedger(int n, double w_d, double w_i, double t_th)
    : n_(n), w_d_(w_d), w_i_(w_i), t_th_(t_th) {
  if (n < 1) throw std::invalid_argument("ledger needs at least one node");
  if (w_d < 0.0 || w_i < 0.0 || std::abs(w_d + w_i - 1.0) > 1e-9)
    throw std::invalid_argument("trust weights must be nonnegative and sum to 1");
  const std::size_t m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  // Every pair starts fully trusted.
  dt_.assign(m, 1.0);
  it_.assign(m, 1.0);
  t_.assign(m, 1.0);
  sample_.assign(m, TrustMetricSample{});
  window_.assign(m, BehaviorWindow{});
  blocked_.assign(static_cast<std::size_t>(n), 0);
  block_round_.assign(static_cast<std::size_t>(n), -1);
}

void TrustLedger::record_forward(int observer, int subject, bool address_intact) {
  BehaviorWindow& w = window_[idx(observer, subject)];
  ++w.accepted;
  ++w.forwarded;
  if (!address_intact) ++w.modified;
}

void TrustLedger::record_drop(int observer, int subject) {
  ++window_[idx(observer, subject)].accepted;
}

std::vector<int> TrustLedger::blocked_ids() const {
  std::vector<int> out;
  for (int i = 0; i < n_; ++i)
    if (blocked_[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

void TrustLedger::update(const Topology& topo, std::span<const double> residual_energy,
                         std::span<const char> alive, double e_initial, int round) {
  const int n = n_;
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  std::vector<char> adjacent(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    nbrs[static_cast<std::size_t>(i)] = topo.one_hop_neighbors(i);
    for (int j : nbrs[static_cast<std::size_t>(i)]) adjacent[idx(i, j)] = 1;
  }

  // Pass 1: fresh direct trusts from this window's behavior.
  for (int i = 0; i < n; ++i) {
    if (!alive[static_cast<std::size_t>(i)]) continue;
    for (int j : nbrs[static_cast<std::size_t>(i)]) {
      if (!alive[static_cast<std::size_t>(j)]) continue;
      BehaviorWindow& w = window_[idx(i, j)];
      TrustMetricSample s;
      s.forwarded_ratio =
          w.accepted ? static_cast<double>(w.forwarded) / w.accepted : 1.0;
      s.address_integrity_ratio =
          w.forwarded ? 1.0 - static_cast<double>(w.modified) / w.forwarded : 1.0;
      s.normalized_remaining_energy = std::max(
          kEnergyTmFloor,
          std::clamp(residual_energy[static_cast<std::size_t>(j)] / e_initial, 0.0, 1.0));
      sample_[idx(i, j)] = s;
      const double tms[3] = {s.forwarded_ratio, s.address_integrity_ratio,
                             s.normalized_remaining_energy};
      dt_[idx(i, j)] = direct_trust(tms);
      w = BehaviorWindow{};
    }
  }

  // Pass 2: indirect trust from recommenders, overall trust, blocking.
  // New blocks take effect after the whole pass so one update sees a
  // consistent pre-state.
  std::vector<char> newly_blocked(static_cast<std::size_t>(n), 0);
  std::vector<double> recs;
  for (int i = 0; i < n; ++i) {
    if (!alive[static_cast<std::size_t>(i)]) continue;
    const auto& ni = nbrs[static_cast<std::size_t>(i)];
    for (int j : ni) {
      if (!alive[static_cast<std::size_t>(j)]) continue;
      recs.clear();
      for (int r : ni) {
        if (r == j) continue;
        if (!alive[static_cast<std::size_t>(r)]) continue;
        if (blocked_[static_cast<std::size_t>(r)]) continue;
        if (classify(t_[idx(i, r)], t_th_) != TrustClass::Trusted) continue;
        if (!adjacent[idx(r, j)]) continue;  // recommender must know the subject
        recs.push_back(dt_[idx(r, j)]);
      }
      it_[idx(i, j)] = indirect_trust(recs);
      t_[idx(i, j)] = overall_trust(dt_[idx(i, j)], it_[idx(i, j)], w_d_, w_i_);
      if (classify(t_[idx(i, j)], t_th_) == TrustClass::Malicious)
        newly_blocked[static_cast<std::size_t>(j)] = 1;
    }
  }
  for (int j = 0; j < n; ++j) {
    if (!newly_blocked[static_cast<std::size_t>(j)]) continue;
    if (blocked_[static_cast<std::size_t>(j)]) continue;
    blocked_[static_cast<std::size_t>(j)] = 1;
    block_round_[static_cast<std::size_t>(j)] = round;
    ++blocked_count_;
  }
}

void TrustLedger::write_snapshot(std::ostream& out, const Topology& topo,
                                 std::span<const char> alive, int round) const {
  char buf[160];
  for (int i = 0; i < n_; ++i) {
    if (!alive[static_cast<std::size_t>(i)]) continue;
    for (int j : topo.one_hop_neighbors(i)) {
      if (!alive[static_cast<std::size_t>(j)]) continue;
      const std::size_t k = idx(i, j);
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.9g,%.9g,%.9g,%s\n", round, i, j,
                    dt_[k], it_[k], t_[k],
                    classify(t_[k], t_th_) == TrustClass::Trusted ? "Trusted"
                                                                  : "Malicious");
      out << buf;
    }
  }
}

}  // namespace tceer
