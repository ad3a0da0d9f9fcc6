#pragma once

#include <string_view>

#include "aggtree/agg_tree.hpp"
#include "aggtree/topology.hpp"

namespace aggtree {

/// Power-ranked recursive construction. From the sink with budget D, a node
/// entered with budget b adopts its min(k, b) unassigned neighbours of highest
/// power (neighbours not yet assigned), and the i-th of them recurses with
/// budget b - i. Sensors left over attach to the assigned neighbour with the
/// fewest children, in BFS order from the assigned set.
///
/// Throws InvalidDeadline for deadline < 1 and Disconnected when some sensor
/// cannot reach the sink.
AggregationTree fast_init_tree(const Topology& t, int deadline);

/// Greedy Incremental Tree: repeatedly attach the unattached sensor closest
/// (Euclidean, over links) to the current tree. Ties go to the lower
/// candidate id, then the lower tree-node id.
AggregationTree git_tree(const Topology& t);

enum class SyntheticKind { Chain, Bfs };

SyntheticKind parse_synthetic_kind(std::string_view name);

/// Chain: a Hamiltonian path starting at the sink (NotConstructible if the
/// graph has none). Bfs: every sensor hangs off its first discoverer in a
/// breadth-first search from the sink with ascending neighbour order.
AggregationTree synthetic_tree(const Topology& t, SyntheticKind kind);

}  // namespace aggtree
