// Shared test fixtures and independent oracles.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "aggtree/agg_tree.hpp"
#include "aggtree/topology.hpp"

namespace fixtures {

using aggtree::AggregationTree;
using aggtree::NodeId;
using aggtree::Topology;
using Edge = std::pair<NodeId, NodeId>;

inline Eigen::Matrix2Xd line_positions(int num_sensors) {
  Eigen::Matrix2Xd pos(2, num_sensors + 1);
  for (int i = 0; i <= num_sensors; ++i) pos.col(i) << i, 0.0;
  return pos;
}

inline Topology graph(int num_sensors, const std::vector<Edge>& edges, std::vector<bool> sources = {}) {
  if (sources.empty()) sources.assign(num_sensors, true);
  return Topology::from_edges(line_positions(num_sensors), 1.0, std::move(sources), edges);
}

/// Graph whose only links are the given tree's edges.
inline Topology tree_graph(const std::vector<NodeId>& parents, std::vector<bool> sources = {}) {
  std::vector<Edge> edges;
  for (NodeId i = 0; i < static_cast<NodeId>(parents.size()); ++i) edges.emplace_back(i, parents[i]);
  return graph(static_cast<int>(parents.size()), edges, std::move(sources));
}

/// Example-1 tree, reconstructed from the waiting times quoted for it: the
/// figure itself is not available. Paper ids 1..7 map to 0..6; sink is 7.
/// sink -> {1,2,3}, 2 -> {4,5}, 3 -> {6}, 5 -> {7}; all sources.
inline std::vector<NodeId> example1_parents() {
  constexpr NodeId S = 7;
  return {S, S, S, 1, 1, 2, 4};
}

/// Sensor 0 hangs off the sink, sensor k off sensor k-1.
inline std::vector<NodeId> chain_parents(int n) {
  std::vector<NodeId> parents(n);
  parents[0] = n;
  for (int k = 1; k < n; ++k) parents[k] = k - 1;
  return parents;
}

/// Binomial "ideal" tree for deadline d: a node granted budget b has
/// children granted b-1, ..., 0. 2^d - 1 sensors, numbered in pre-order.
inline std::vector<NodeId> ideal_tree_parents(int d) {
  const int n = (1 << d) - 1;
  std::vector<NodeId> parents;
  parents.reserve(n);
  auto grow = [&](auto&& self, NodeId parent, int budget) -> void {
    for (int b = budget - 1; b >= 0; --b) {
      const NodeId id = static_cast<NodeId>(parents.size());
      parents.push_back(parent);
      self(self, id, b);
    }
  };
  grow(grow, n, d);
  return parents;
}

/// Complete graph with explicit source flags.
inline Topology complete_graph(int num_sensors, std::vector<bool> sources) {
  std::vector<Edge> edges;
  for (NodeId a = 0; a <= num_sensors; ++a) {
    for (NodeId b = a + 1; b <= num_sensors; ++b) edges.emplace_back(a, b);
  }
  return graph(num_sensors, edges, std::move(sources));
}

/// Uniform random recursive tree: sensors in random order, each attached to
/// the sink or a previously placed sensor.
inline std::vector<NodeId> random_tree_parents(int n, std::mt19937_64& rng) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<NodeId> parents(n);
  for (int k = 0; k < n; ++k) {
    const int pick = std::uniform_int_distribution<int>(0, k)(rng);
    parents[order[k]] = pick == 0 ? n : order[pick - 1];
  }
  return parents;
}

inline std::vector<bool> random_sources(int n, double p, std::mt19937_64& rng) {
  std::vector<bool> out(n);
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i) out[i] = coin(rng);
  return out;
}

/// BFS hop distances from the sink over an explicit edge list.
inline std::vector<int> bfs_depths(int num_vertices, NodeId root, const std::vector<Edge>& edges) {
  std::vector<std::vector<NodeId>> adj(num_vertices);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> dist(num_vertices, -1);
  std::queue<NodeId> q;
  dist[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

inline std::vector<Edge> edge_list(const Topology& t) {
  std::vector<Edge> edges;
  for (NodeId a = 0; a < t.num_vertices(); ++a) {
    for (NodeId b : t.neighbors(a)) {
      if (a < b) edges.emplace_back(a, b);
    }
  }
  return edges;
}

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

/// Kirchhoff: spanning-tree count = any cofactor of the graph Laplacian.
inline long long matrix_tree_count(const Topology& t) {
  const int n = t.num_vertices();
  if (n == 1) return 1;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b : t.neighbors(a)) {
      lap(a, b) = -1.0;
      lap(a, a) += 1.0;
    }
  }
  return std::llround(lap.topLeftCorner(n - 1, n - 1).determinant());
}

/// Spanning-tree count by checking every V-edge subset with union-find.
inline long long subset_tree_count(const Topology& t) {
  const auto edges = edge_list(t);
  const int need = t.num_vertices() - 1;
  const int m = static_cast<int>(edges.size());
  long long count = 0;
  // Lexicographic combinations of `need` edges out of m.
  std::vector<bool> mask(m, false);
  std::fill(mask.begin(), mask.begin() + std::min(need, m), true);
  if (need > m) return 0;
  do {
    UnionFind uf(t.num_vertices());
    bool acyclic = true;
    for (int e = 0; e < m && acyclic; ++e) {
      if (mask[e]) acyclic = uf.unite(edges[e].first, edges[e].second);
    }
    if (acyclic) ++count;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return count;
}

}  // namespace fixtures
