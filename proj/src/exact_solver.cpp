#include "aggtree/exact_solver.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>

#include "aggtree/error.hpp"
#include "aggtree/scheduler.hpp"

namespace aggtree {

namespace {

class SpanningTreeGrower {
 public:
  SpanningTreeGrower(const Topology& t, std::int64_t max_trees,
                     const std::function<void(const AggregationTree&)>& visit)
      : topo_(t), n_(t.num_vertices()), max_trees_(max_trees), visit_(visit),
        in_tree_(n_, 0), forbidden_(static_cast<std::size_t>(n_) * n_, 0),
        parent_(t.num_sensors(), kNoNode) {}

  EnumerationStats run() {
    in_tree_[topo_.sink()] = 1;
    tree_size_ = 1;
    if (!remaining_reachable()) {
      throw Error(ErrorKind::Disconnected, "topology has no spanning tree rooted at the sink");
    }
    Frontier frontier;
    push_links(topo_.sink(), frontier);
    grow(frontier);
    return stats_;
  }

 private:
  using Link = std::pair<NodeId, NodeId>;  // (tree vertex, outside vertex)
  using Frontier = std::vector<Link>;

  void grow(const Frontier& frontier) {
    if (stopped_) return;
    if (tree_size_ == n_) {
      if (stats_.trees == max_trees_) {
        stats_.complete = false;
        stopped_ = true;
        return;
      }
      ++stats_.trees;
      visit_(AggregationTree::build(parent_, topo_));
      return;
    }
    if (frontier.empty()) return;

    const auto [u, w] = frontier.back();

    // Branch 1: the link joins the tree.
    {
      Frontier next;
      next.reserve(frontier.size() + topo_.neighbors(w).size());
      for (const auto& link : frontier) {
        if (link.second != w) next.push_back(link);
      }
      in_tree_[w] = 1;
      parent_[w] = u;
      ++tree_size_;
      push_links(w, next);
      grow(next);
      --tree_size_;
      parent_[w] = kNoNode;
      in_tree_[w] = 0;
    }

    // Branch 2: the link is forbidden for the rest of this subtree.
    set_forbidden(u, w, 1);
    if (remaining_reachable()) {
      Frontier next(frontier.begin(), frontier.end() - 1);
      grow(next);
    }
    set_forbidden(u, w, 0);
  }

  void push_links(NodeId v, Frontier& frontier) const {
    for (NodeId x : topo_.neighbors(v)) {
      if (!in_tree_[x] && !is_forbidden(v, x)) frontier.emplace_back(v, x);
    }
  }

  bool is_forbidden(NodeId a, NodeId b) const { return forbidden_[a * n_ + b] != 0; }
  void set_forbidden(NodeId a, NodeId b, char value) {
    forbidden_[a * n_ + b] = value;
    forbidden_[b * n_ + a] = value;
  }

  // Every outside vertex still reachable from the tree over allowed links.
  bool remaining_reachable() const {
    std::vector<char> seen(in_tree_);
    std::vector<NodeId> stack;
    for (NodeId v = 0; v < n_; ++v) {
      if (in_tree_[v]) stack.push_back(v);
    }
    int reached = tree_size_;
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (NodeId x : topo_.neighbors(v)) {
        if (seen[x] || is_forbidden(v, x)) continue;
        seen[x] = 1;
        ++reached;
        stack.push_back(x);
      }
    }
    return reached == n_;
  }

  const Topology& topo_;
  const int n_;
  const std::int64_t max_trees_;
  const std::function<void(const AggregationTree&)>& visit_;
  std::vector<char> in_tree_;
  std::vector<char> forbidden_;
  std::vector<NodeId> parent_;
  int tree_size_ = 0;
  bool stopped_ = false;
  EnumerationStats stats_;
};

}  // namespace

EnumerationStats enumerate_spanning_trees(const Topology& t, const EnumerationBudget& budget,
                                          const std::function<void(const AggregationTree&)>& visit) {
  if (t.num_sensors() > budget.max_nodes) {
    throw Error(ErrorKind::BudgetExceeded, std::to_string(t.num_sensors()) + " sensors exceed max_nodes=" +
                                               std::to_string(budget.max_nodes));
  }
  SpanningTreeGrower grower(t, budget.max_trees, visit);
  return grower.run();
}

std::vector<ZOptimal> z_optimal(const Topology& t, const std::vector<int>& deadlines,
                                const EnumerationBudget& budget) {
  struct Best {
    std::optional<AggregationTree> tree;
    int phi = -1;
  };
  for (int d : deadlines) {
    if (d < 1) throw Error(ErrorKind::InvalidDeadline, "deadline must be >= 1, got " + std::to_string(d));
  }
  std::vector<Best> best(deadlines.size());
  const int max_deadline = deadlines.empty() ? 1 : *std::max_element(deadlines.begin(), deadlines.end());
  const auto stats = enumerate_spanning_trees(t, budget, [&](const AggregationTree& tree) {
    const auto phis = optimum_by_deadline(tree, max_deadline, t);
    for (std::size_t k = 0; k < deadlines.size(); ++k) {
      const int phi = phis[deadlines[k] - 1];
      auto& b = best[k];
      // The parent map is the canonical key.
      if (phi > b.phi || (phi == b.phi && tree.parents() < b.tree->parents())) {
        b.phi = phi;
        b.tree = tree;
      }
    }
  });
  if (!stats.complete) {
    throw Error(ErrorKind::BudgetExceeded,
                "more than " + std::to_string(budget.max_trees) + " spanning trees");
  }
  std::vector<ZOptimal> out;
  out.reserve(deadlines.size());
  for (auto& b : best) out.push_back({std::move(*b.tree), b.phi, stats.trees});
  return out;
}

ZOptimal z_optimal(const Topology& t, int deadline, const EnumerationBudget& budget) {
  return std::move(z_optimal(t, std::vector<int>{deadline}, budget).front());
}

}  // namespace aggtree
