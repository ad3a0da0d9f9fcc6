#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "aggtree/topology.hpp"

namespace aggtree {

/// Canonical form of a tree: the parent of every sensor in id order.
using TreeKey = std::vector<NodeId>;

/// Spanning tree rooted at the sink, stored as a parent map. Instances are
/// always valid (spanning, acyclic, edges in the topology) and immutable;
/// moves produce new trees.
class AggregationTree {
 public:
  /// parents[i] is the parent of sensor i (the sink id V allowed); kNoNode
  /// marks a missing entry. Throws MissingNode, CycleDetected or
  /// NonTopologyEdge.
  static AggregationTree build(std::vector<NodeId> parents, const Topology& t);

  int num_sensors() const { return static_cast<int>(parent_.size()); }
  NodeId sink() const { return num_sensors(); }

  NodeId parent(NodeId i) const { return parent_[i]; }
  const std::vector<NodeId>& parents() const { return parent_; }

  /// Children in ascending id order; valid for sensors and the sink.
  std::span<const NodeId> children(NodeId v) const {
    return {child_list_.data() + child_begin_[v], child_list_.data() + child_begin_[v + 1]};
  }
  int num_children(NodeId v) const { return child_begin_[v + 1] - child_begin_[v]; }

  /// Hops from the sink; the sink has depth 0.
  int depth(NodeId v) const { return depth_[v]; }

  /// True iff v lies in the subtree rooted at root (root included).
  bool in_subtree(NodeId root, NodeId v) const {
    return enter_[root] <= enter_[v] && exit_[v] <= exit_[root];
  }

  /// Vertices of subtree(root) in pre-order.
  std::vector<NodeId> subtree(NodeId root) const;

  /// All vertices, parents before children, starting at the sink.
  const std::vector<NodeId>& preorder() const { return preorder_; }

  friend bool operator==(const AggregationTree& a, const AggregationTree& b) {
    return a.parent_ == b.parent_;
  }

 private:
  AggregationTree() = default;

  std::vector<NodeId> parent_;
  std::vector<int> child_begin_;
  std::vector<NodeId> child_list_;
  std::vector<int> depth_;
  std::vector<int> enter_;
  std::vector<int> exit_;
  std::vector<NodeId> preorder_;
};

AggregationTree build_from_parents(const std::map<NodeId, NodeId>& parents, const Topology& t);

/// H(i): i followed by its predecessors, excluding the sink.
std::vector<NodeId> ancestors(const AggregationTree& tree, NodeId i);

/// Same tree with parent(i) = new_parent. Throws WouldCreateCycle when
/// new_parent lies in subtree(i) and NonTopologyEdge when (i, new_parent) is
/// not a link.
AggregationTree reparent(const AggregationTree& tree, NodeId i, NodeId new_parent,
                         const Topology& t);

TreeKey canonical_key(const AggregationTree& tree);

struct TreeKeyHash {
  std::size_t operator()(const TreeKey& key) const noexcept;
};

/// One `<child> <parent>` line per sensor, the sink written as `S`.
void write_tree(std::ostream& os, const AggregationTree& tree);
AggregationTree read_tree(std::istream& is, const Topology& t);

}  // namespace aggtree
