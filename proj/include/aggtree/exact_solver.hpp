#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "aggtree/agg_tree.hpp"
#include "aggtree/topology.hpp"

namespace aggtree {

struct EnumerationBudget {
  int max_nodes = 15;
  std::int64_t max_trees = 5'000'000;
};

struct EnumerationStats {
  std::int64_t trees = 0;
  bool complete = true;  // false when max_trees stopped the stream early
};

/// Streams every spanning tree rooted at the sink exactly once. Trees grow
/// from the sink one frontier link at a time; each link is first included,
/// then forbidden, and a forbidden branch is only explored while the
/// remaining links still span the graph.
///
/// Throws BudgetExceeded if V > max_nodes and Disconnected if the topology
/// has no spanning tree.
EnumerationStats enumerate_spanning_trees(const Topology& t, const EnumerationBudget& budget,
                                          const std::function<void(const AggregationTree&)>& visit);

struct ZOptimal {
  AggregationTree tree;
  int phi = 0;
  std::int64_t trees_visited = 0;
};

/// Exhaustive optimum of the joint tree/schedule problem. Ties go to the
/// smallest canonical key. Throws BudgetExceeded when the enumeration cannot
/// finish within the budget.
ZOptimal z_optimal(const Topology& t, int deadline, const EnumerationBudget& budget = {});

/// One enumeration pass scored at several deadlines; result i matches
/// deadlines[i].
std::vector<ZOptimal> z_optimal(const Topology& t, const std::vector<int>& deadlines,
                                const EnumerationBudget& budget = {});

}  // namespace aggtree
