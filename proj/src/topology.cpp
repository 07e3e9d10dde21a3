#include "tceer/topology.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tceer {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::vector<int> Topology::one_hop_neighbors(int id) const {
  std::vector<int> out;
  const Position& p = nodes.at(static_cast<std::size_t>(id));
  for (int j = 0; j < size(); ++j) {
    if (j == id) continue;
    if (distance(p, nodes[j]) <= radio_range) out.push_back(j);
  }
  return out;
}

double Topology::bs_distance(int id) const {
  return distance(nodes.at(static_cast<std::size_t>(id)), base_station);
}

bool Topology::bs_in_range(int id) const { return bs_distance(id) <= radio_range; }

Topology deploy(int n, double field_width, double field_height, Position bs,
                double radio_range, Rng& rng) {
  if (n < 1) throw std::invalid_argument("deploy: node count must be >= 1");
  if (field_width <= 0 || field_height <= 0)
    throw std::invalid_argument("deploy: field dimensions must be positive");
  Topology topo;
  topo.base_station = bs;
  topo.radio_range = radio_range;
  topo.field_width = field_width;
  topo.field_height = field_height;
  topo.nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform(0.0, field_width);
    double y = rng.uniform(0.0, field_height);
    topo.nodes.push_back({x, y});
  }
  return topo;
}

Topology deploy(int n, double field_width, double field_height, Position bs,
                double radio_range, std::uint64_t seed) {
  Rng rng(seed);
  return deploy(n, field_width, field_height, bs, radio_range, rng);
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void save_topology(const Topology& topo, std::ostream& out) {
  out << "bs," << fmt_double(topo.base_station.x) << ','
      << fmt_double(topo.base_station.y) << ",range,"
      << fmt_double(topo.radio_range) << ",field,"
      << fmt_double(topo.field_width) << ',' << fmt_double(topo.field_height)
      << '\n';
  for (int i = 0; i < topo.size(); ++i) {
    out << i << ',' << fmt_double(topo.nodes[i].x) << ','
        << fmt_double(topo.nodes[i].y) << '\n';
  }
}

Topology load_topology(std::istream& in) {
  Topology topo;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("topology: empty input");
  {
    std::istringstream hs(line);
    std::string tag;
    char sep = 0;
    std::getline(hs, tag, ',');
    if (tag != "bs") throw std::runtime_error("topology: bad header line");
    hs >> topo.base_station.x >> sep >> topo.base_station.y >> sep;
    std::getline(hs, tag, ',');  // "range"
    hs >> topo.radio_range >> sep;
    std::getline(hs, tag, ',');  // "field"
    hs >> topo.field_width >> sep >> topo.field_height;
    if (!hs) throw std::runtime_error("topology: bad header line");
  }
  int expect = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int id = -1;
    char sep = 0;
    Position p;
    ls >> id >> sep >> p.x >> sep >> p.y;
    if (!ls || id != expect)
      throw std::runtime_error("topology: node ids must be dense 0..n-1");
    topo.nodes.push_back(p);
    ++expect;
  }
  if (topo.nodes.empty()) throw std::runtime_error("topology: no nodes");
  return topo;
}

}  // namespace tceer
