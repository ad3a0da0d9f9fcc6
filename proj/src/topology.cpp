#include "aggtree/topology.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>

#include "aggtree/error.hpp"

namespace aggtree {

Topology::Topology(Eigen::Matrix2Xd positions, double range, std::vector<bool> sources)
    : positions_(std::move(positions)), range_(range), sources_(std::move(sources)) {
  const int n = num_vertices();
  if (positions_.cols() != n) {
    throw Error(ErrorKind::LengthMismatch, "positions must have V+1 columns (sink last)");
  }
  adjacency_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions_.col(i) - positions_.col(j)).norm() <= range_) {
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
      }
    }
  }
  finalize_adjacency();
}

Topology Topology::from_edges(Eigen::Matrix2Xd positions, double range, std::vector<bool> sources,
                              const std::vector<std::pair<NodeId, NodeId>>& edges) {
  Topology t;
  t.positions_ = std::move(positions);
  t.range_ = range;
  t.sources_ = std::move(sources);
  const int n = t.num_vertices();
  if (t.positions_.cols() != n) {
    throw Error(ErrorKind::LengthMismatch, "positions must have V+1 columns (sink last)");
  }
  t.adjacency_.assign(n, {});
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw Error(ErrorKind::NonTopologyEdge,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") is not a valid pair");
    }
    t.adjacency_[a].push_back(b);
    t.adjacency_[b].push_back(a);
  }
  t.finalize_adjacency();
  return t;
}

void Topology::finalize_adjacency() {
  num_edges_ = 0;
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    num_edges_ += nbrs.size();
  }
  num_edges_ /= 2;
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  if (a < 0 || a >= num_vertices()) return false;
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

int Topology::num_sources() const {
  return static_cast<int>(std::count(sources_.begin(), sources_.end(), true));
}

Topology generate_rgg(const RggParams& params, std::uint64_t seed) {
  const int v = params.num_sensors;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, params.field_width);
  std::uniform_real_distribution<double> uy(0.0, params.field_height);

  Eigen::Matrix2Xd pos(2, v + 1);
  for (int i = 0; i < v; ++i) {
    pos(0, i) = ux(rng);
    pos(1, i) = uy(rng);
  }
  pos.col(v) = params.sink_position;

  const int num_sources = static_cast<int>(std::lround(params.source_fraction * v));
  std::vector<int> order(v);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> sources(v, false);
  for (int k = 0; k < num_sources; ++k) sources[order[k]] = true;

  return Topology(std::move(pos), params.range, std::move(sources));
}

Topology make_complete(int num_sensors) {
  // Sensors on a unit circle around the sink; a range above the diameter
  // makes the distance rule produce the complete graph, so the result also
  // survives a write/read round trip.
  Eigen::Matrix2Xd pos(2, num_sensors + 1);
  for (int i = 0; i < num_sensors; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / num_sensors;
    pos(0, i) = std::cos(angle);
    pos(1, i) = std::sin(angle);
  }
  pos.col(num_sensors).setZero();
  return Topology(std::move(pos), 2.5, std::vector<bool>(num_sensors, true));
}

std::vector<int> hop_distances(const Topology& t) {
  std::vector<int> dist(t.num_vertices(), -1);
  std::queue<NodeId> frontier;
  dist[t.sink()] = 0;
  frontier.push(t.sink());
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId w : t.neighbors(u)) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

bool is_connected(const Topology& t) {
  const auto dist = hop_distances(t);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

void write_topology(std::ostream& os, const Topology& t) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  const Eigen::Vector2d s = t.position(t.sink());
  os << "V " << t.num_sensors() << " RANGE " << t.range() << " SINK " << s.x() << ' ' << s.y()
     << '\n';
  for (NodeId i = 0; i < t.num_sensors(); ++i) {
    const Eigen::Vector2d p = t.position(i);
    os << i << ' ' << p.x() << ' ' << p.y() << ' ' << (t.is_source(i) ? 1 : 0) << '\n';
  }
  os.precision(old_precision);
}

Topology read_topology(std::istream& is) {
  std::string line;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos && line[0] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw Error(ErrorKind::Parse, "empty topology file");

  std::istringstream header(line);
  std::string tag_v, tag_range, tag_sink;
  int v = 0;
  double range = 0.0, sx = 0.0, sy = 0.0;
  if (!(header >> tag_v >> v >> tag_range >> range >> tag_sink >> sx >> sy) || tag_v != "V" ||
      tag_range != "RANGE" || tag_sink != "SINK" || v < 0) {
    throw Error(ErrorKind::Parse, "bad header line: '" + line + "'");
  }

  Eigen::Matrix2Xd pos(2, v + 1);
  pos.col(v) << sx, sy;
  std::vector<bool> sources(v, false);
  std::vector<bool> seen(v, false);
  for (int k = 0; k < v; ++k) {
    if (!next_line()) throw Error(ErrorKind::Parse, "expected " + std::to_string(v) + " sensor lines");
    std::istringstream row(line);
    int id = -1, flag = -1;
    double x = 0.0, y = 0.0;
    if (!(row >> id >> x >> y >> flag) || id < 0 || id >= v || seen[id] || (flag != 0 && flag != 1)) {
      throw Error(ErrorKind::Parse, "bad sensor line: '" + line + "'");
    }
    seen[id] = true;
    pos.col(id) << x, y;
    sources[id] = flag == 1;
  }
  return Topology(std::move(pos), range, std::move(sources));
}

}  // namespace aggtree
