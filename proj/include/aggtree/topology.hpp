#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace aggtree {

/// Sensors are numbered 0..V-1; the sink always takes id V.
using NodeId = int;
inline constexpr NodeId kNoNode = -1;

/// WSN communication graph. Column i of positions() is node i; the last
/// column is the sink. Immutable after construction.
class Topology {
 public:
  Topology() = default;

  /// Geometric graph: (i,j) is an edge iff i != j and |p_i - p_j| <= range.
  Topology(Eigen::Matrix2Xd positions, double range, std::vector<bool> sources);

  /// Synthetic graph with an explicit edge list; positions are kept for
  /// display only.
  static Topology from_edges(Eigen::Matrix2Xd positions, double range, std::vector<bool> sources,
                             const std::vector<std::pair<NodeId, NodeId>>& edges);

  int num_sensors() const { return static_cast<int>(sources_.size()); }
  int num_vertices() const { return num_sensors() + 1; }
  NodeId sink() const { return num_sensors(); }
  bool is_sink(NodeId v) const { return v == sink(); }

  const Eigen::Matrix2Xd& positions() const { return positions_; }
  Eigen::Vector2d position(NodeId v) const { return positions_.col(v); }
  double range() const { return range_; }
  double distance(NodeId a, NodeId b) const { return (positions_.col(a) - positions_.col(b)).norm(); }

  /// Neighbours of v in ascending id order (the sink is id V, so it sorts last).
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  bool adjacent(NodeId a, NodeId b) const;
  std::size_t num_edges() const { return num_edges_; }

  bool is_source(NodeId v) const { return v < num_sensors() && sources_[v]; }
  int num_sources() const;
  const std::vector<bool>& sources() const { return sources_; }

 private:
  void finalize_adjacency();

  Eigen::Matrix2Xd positions_;
  double range_ = 0.0;
  std::vector<bool> sources_;
  std::vector<std::vector<NodeId>> adjacency_;
  std::size_t num_edges_ = 0;
};

struct RggParams {
  int num_sensors = 100;
  double field_width = 300.0;
  double field_height = 300.0;
  double range = 75.0;
  Eigen::Vector2d sink_position{150.0, 300.0};
  double source_fraction = 0.8;
};

/// Uniform random deployment; round(source_fraction * V) sensors become
/// sources. Deterministic in seed. May be disconnected.
Topology generate_rgg(const RggParams& params, std::uint64_t seed);

/// Every sensor adjacent to every other sensor and to the sink; all sources.
Topology make_complete(int num_sensors);

/// True iff every sensor reaches the sink.
bool is_connected(const Topology& t);

/// Hop distance from the sink to every vertex (-1 if unreachable).
std::vector<int> hop_distances(const Topology& t);

/// `V <v> RANGE <r> SINK <x> <y>` followed by `<id> <x> <y> <F>` per sensor.
/// Adjacency is recomputed from positions when reading, so graphs built with
/// from_edges only round-trip if their edges follow the distance rule.
void write_topology(std::ostream& os, const Topology& t);
Topology read_topology(std::istream& is);

}  // namespace aggtree
