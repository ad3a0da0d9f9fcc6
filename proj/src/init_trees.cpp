#include "aggtree/init_trees.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "aggtree/error.hpp"

namespace aggtree {

namespace {

class FastInitBuilder {
 public:
  explicit FastInitBuilder(const Topology& t)
      : topo_(t), parent_(t.num_sensors(), kNoNode), done_(t.num_vertices(), 0),
        power_(t.num_vertices(), 0), children_(t.num_vertices(), 0) {
    // power_i: neighbours of i among sensors not yet done.
    for (NodeId i = 0; i < t.num_vertices(); ++i) {
      for (NodeId j : t.neighbors(i)) {
        if (j != t.sink()) ++power_[i];
      }
    }
  }

  void extend(NodeId parent, int budget) {
    mark_done(parent);
    if (budget <= 0) return;

    std::vector<NodeId> current;
    for (NodeId j : topo_.neighbors(parent)) {
      if (!done_[j]) current.push_back(j);
    }
    std::stable_sort(current.begin(), current.end(),
                     [&](NodeId a, NodeId b) { return power_[a] > power_[b]; });
    const int take = std::min(static_cast<int>(current.size()), budget);
    current.resize(take);

    // Selected children are assigned before any of them recurses, so a
    // sibling subtree cannot steal them.
    for (NodeId c : current) {
      attach(c, parent);
      mark_done(c);
    }
    for (int rank = 1; rank <= take; ++rank) {
      if (budget - rank > 0) extend(current[rank - 1], budget - rank);
    }
  }

  void attach_leftovers() {
    // Multi-source BFS layers out of the assigned set. Within a layer nodes
    // go in ascending id, each picking the assigned neighbour with the fewest
    // children (lowest id on ties).
    std::vector<NodeId> layer;
    for (NodeId i = 0; i < topo_.num_sensors(); ++i) {
      if (!done_[i] && has_done_neighbor(i)) layer.push_back(i);
    }
    while (!layer.empty()) {
      for (NodeId i : layer) {
        NodeId best = kNoNode;
        for (NodeId j : topo_.neighbors(i)) {
          if (done_[j] && (best == kNoNode || children_[j] < children_[best])) best = j;
        }
        attach(i, best);
      }
      for (NodeId i : layer) mark_done(i);
      std::vector<NodeId> next;
      for (NodeId i : layer) {
        for (NodeId j : topo_.neighbors(i)) {
          if (j != topo_.sink() && !done_[j]) next.push_back(j);
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      layer = std::move(next);
    }
    for (NodeId i = 0; i < topo_.num_sensors(); ++i) {
      if (parent_[i] == kNoNode) {
        throw Error(ErrorKind::Disconnected, "sensor " + std::to_string(i) + " cannot reach the sink");
      }
    }
  }

  std::vector<NodeId> take_parents() { return std::move(parent_); }

 private:
  void attach(NodeId child, NodeId parent) {
    parent_[child] = parent;
    ++children_[parent];
  }

  void mark_done(NodeId v) {
    if (done_[v]) return;
    done_[v] = 1;
    if (v == topo_.sink()) return;
    for (NodeId j : topo_.neighbors(v)) --power_[j];
  }

  bool has_done_neighbor(NodeId i) const {
    const auto nbrs = topo_.neighbors(i);
    return std::any_of(nbrs.begin(), nbrs.end(), [&](NodeId j) { return done_[j] != 0; });
  }

  const Topology& topo_;
  std::vector<NodeId> parent_;
  std::vector<char> done_;
  std::vector<int> power_;
  std::vector<int> children_;
};

bool hamiltonian_from(const Topology& t, NodeId u, std::vector<char>& visited, int remaining,
                      std::vector<NodeId>& parent) {
  if (remaining == 0) return true;
  for (NodeId w : t.neighbors(u)) {
    if (w == t.sink() || visited[w]) continue;
    visited[w] = 1;
    parent[w] = u;
    if (hamiltonian_from(t, w, visited, remaining - 1, parent)) return true;
    visited[w] = 0;
  }
  return false;
}

}  // namespace

AggregationTree fast_init_tree(const Topology& t, int deadline) {
  if (deadline < 1) throw Error(ErrorKind::InvalidDeadline, "deadline must be >= 1");
  FastInitBuilder builder(t);
  builder.extend(t.sink(), deadline);
  builder.attach_leftovers();
  return AggregationTree::build(builder.take_parents(), t);
}

AggregationTree git_tree(const Topology& t) {
  using Candidate = std::tuple<double, NodeId, NodeId>;  // distance, sensor, tree node
  std::priority_queue<Candidate, std::vector<Candidate>, std::greater<>> heap;
  std::vector<NodeId> parent(t.num_sensors(), kNoNode);
  std::vector<char> in_tree(t.num_vertices(), 0);

  auto add = [&](NodeId u) {
    in_tree[u] = 1;
    for (NodeId w : t.neighbors(u)) {
      if (!in_tree[w]) heap.emplace(t.distance(u, w), w, u);
    }
  };
  add(t.sink());
  while (!heap.empty()) {
    const auto [d, node, via] = heap.top();
    heap.pop();
    if (in_tree[node]) continue;
    parent[node] = via;
    add(node);
  }
  for (NodeId i = 0; i < t.num_sensors(); ++i) {
    if (parent[i] == kNoNode) {
      throw Error(ErrorKind::Disconnected, "sensor " + std::to_string(i) + " cannot reach the sink");
    }
  }
  return AggregationTree::build(std::move(parent), t);
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "chain") return SyntheticKind::Chain;
  if (name == "bfs") return SyntheticKind::Bfs;
  throw Error(ErrorKind::ConfigInvalid, "unknown synthetic tree kind '" + std::string(name) + "'");
}

AggregationTree synthetic_tree(const Topology& t, SyntheticKind kind) {
  std::vector<NodeId> parent(t.num_sensors(), kNoNode);
  if (kind == SyntheticKind::Chain) {
    std::vector<char> visited(t.num_vertices(), 0);
    visited[t.sink()] = 1;
    if (!hamiltonian_from(t, t.sink(), visited, t.num_sensors(), parent)) {
      throw Error(ErrorKind::NotConstructible, "no Hamiltonian path starts at the sink");
    }
    return AggregationTree::build(std::move(parent), t);
  }

  std::vector<char> seen(t.num_vertices(), 0);
  std::queue<NodeId> frontier;
  seen[t.sink()] = 1;
  frontier.push(t.sink());
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop();
    for (NodeId w : t.neighbors(u)) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = u;
      frontier.push(w);
    }
  }
  for (NodeId i = 0; i < t.num_sensors(); ++i) {
    if (parent[i] == kNoNode) {
      throw Error(ErrorKind::NotConstructible, "sensor " + std::to_string(i) + " cannot reach the sink");
    }
  }
  return AggregationTree::build(std::move(parent), t);
}

}  // namespace aggtree
