#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aggtree/agg_tree.hpp"
#include "aggtree/topology.hpp"

namespace aggtree {

/// Waiting times and participation for one tree and deadline. A sensor
/// participates (n_i = 1) exactly when it has a waiting time.
struct Schedule {
  std::vector<std::optional<int>> waiting;
  int phi = 0;

  bool participates(NodeId i) const { return waiting[i].has_value(); }

  /// Waiting time used by the parent-changing rule: non-participants count
  /// as 0 and the sink as the deadline.
  int effective_waiting(NodeId v, int deadline) const {
    if (v == static_cast<NodeId>(waiting.size())) return deadline;
    return waiting[v].value_or(0);
  }

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Maximum-QoA schedule on a fixed tree. Bottom-up over the tree, each node
/// solves an exact assignment of its children to distinct slots below its
/// budget. Throws InvalidDeadline when deadline < 1.
Schedule optimal_schedule(const AggregationTree& tree, int deadline, const Topology& t);

/// Best source count of subtree(root) when root is granted `budget` slots.
/// For a sensor root this includes the root's own source flag; for the sink
/// it is the whole-tree optimum at deadline `budget`.
int subtree_optimum(const AggregationTree& tree, NodeId root, int budget, const Topology& t);

/// Whole-tree optimum for every deadline 1..max_deadline (entry D-1), from
/// a single bottom-up pass.
std::vector<int> optimum_by_deadline(const AggregationTree& tree, int max_deadline, const Topology& t);

/// Exhaustive reference for small instances (V <= 12, deadline <= 5),
/// otherwise TooLarge.
Schedule brute_force_schedule(const AggregationTree& tree, int deadline, const Topology& t);

/// Number of sources whose whole ancestor chain participates.
int count_participating_sources(const AggregationTree& tree, const Schedule& s, const Topology& t);

enum class ViolationKind {
  SizeMismatch,
  WaitingOutOfRange,
  ParentNotParticipating,
  NotBeforeParent,
  SlotCollision,
  ChildCountExceeded,
  PhiMismatch,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  NodeId node;
  std::string detail;
};

/// Empty iff the schedule is feasible for (tree, deadline) and its phi agrees
/// with the participation recount.
std::vector<Violation> validate_schedule(const AggregationTree& tree, int deadline,
                                         const Schedule& s, const Topology& t);

/// Shift every waiting time down by (deadline - new_deadline); nodes that
/// would go negative drop out together with their subtrees.
Schedule reduce_deadline(const Schedule& s, int deadline, int new_deadline,
                         const AggregationTree& tree, const Topology& t);

/// `<id> <W|-> <n>` per sensor, then `PHI <value>`.
void write_schedule(std::ostream& os, const Schedule& s);

}  // namespace aggtree
