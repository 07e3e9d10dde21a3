#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tceer/rng.hpp"

namespace tceer {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

// Static node layout. Node ids are dense 0..n-1 and the layout is
// immutable once built, so it can be shared read-only across runs.
struct Topology {
  std::vector<Position> nodes;
  Position base_station;
  double radio_range = 50.0;
  double field_width = 200.0;
  double field_height = 200.0;

  int size() const { return static_cast<int>(nodes.size()); }

  // Ids within radio range of `id`, ascending, never including `id`.
  std::vector<int> one_hop_neighbors(int id) const;

  double bs_distance(int id) const;
  bool bs_in_range(int id) const;
};

// Uniform i.i.d. deployment drawn from `rng` (x then y, in id order).
Topology deploy(int n, double field_width, double field_height, Position bs,
                double radio_range, Rng& rng);

// Convenience overload with a private stream seeded from `seed`.
Topology deploy(int n, double field_width, double field_height, Position bs,
                double radio_range, std::uint64_t seed);

// Plain-text form: one header line carrying BS, range and field size,
// then one "id,x,y" line per node. Round-trips exactly.
void save_topology(const Topology& topo, std::ostream& out);
Topology load_topology(std::istream& in);

}  // namespace tceer
