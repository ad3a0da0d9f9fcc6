#include "aggtree/scheduler.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>

#include <Eigen/Core>

#include "aggtree/assignment.hpp"
#include "aggtree/error.hpp"

namespace aggtree {

namespace {

using WeightMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

void check_deadline(int deadline) {
  if (deadline < 1) throw Error(ErrorKind::InvalidDeadline, "deadline must be >= 1, got " + std::to_string(deadline));
}

/// best[v][w] = max sources collected in subtree(v) when v transmits at slot w.
class SlotTable {
 public:
  SlotTable(const AggregationTree& tree, const Topology& t, NodeId root, int max_budget)
      : tree_(tree), best_(t.num_vertices()) {
    const auto order = tree.subtree(root);
    std::vector<int> sources_below(t.num_vertices(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId v = *it;
      if (v == tree.sink()) continue;
      sources_below[v] = t.is_source(v) ? 1 : 0;
      for (NodeId c : tree.children(v)) sources_below[v] += sources_below[c];

      auto& row = best_[v];
      row.assign(max_budget, 0);
      for (int w = 0; w < max_budget; ++w) {
        // Once every source below is collected, more slots cannot help.
        if (w > 0 && row[w - 1] == sources_below[v]) {
          std::fill(row.begin() + w, row.end(), sources_below[v]);
          break;
        }
        row[w] = (t.is_source(v) ? 1 : 0) + solve(v, w).value;
      }
    }
  }

  struct NodeAssignment {
    int value = 0;
    std::vector<std::pair<NodeId, int>> child_slots;
  };

  /// Assign children of v to distinct slots 0..budget-1. Ties prefer lower
  /// slots for lower child ids through a small additive bonus that can never
  /// outweigh one collected source.
  NodeAssignment solve(NodeId v, int budget) const {
    NodeAssignment out;
    std::vector<NodeId> kids;
    kids.reserve(tree_.num_children(v));
    for (NodeId c : tree_.children(v)) {
      if (budget > 0 && best_[c][budget - 1] > 0) kids.push_back(c);
    }
    const auto k = static_cast<std::int64_t>(kids.size());
    if (k == 0 || budget == 0) return out;
    if (k == 1) {
      // Same choice the assignment makes: best gain, then the lowest slot.
      const auto& row = best_[kids[0]];
      int slot = budget - 1;
      while (slot > 0 && row[slot - 1] == row[budget - 1]) --slot;
      out.value = row[budget - 1];
      out.child_slots.emplace_back(kids[0], slot);
      return out;
    }

    const std::int64_t w = budget;
    const std::int64_t scale = k * w * std::min(k, w) + 1;
    WeightMatrix weights(k, w);
    for (std::int64_t r = 0; r < k; ++r) {
      for (std::int64_t s = 0; s < w; ++s) {
        const int gain = best_[kids[r]][s];
        weights(r, s) = gain > 0 ? gain * scale + (k - r) * (w - s) : 0;
      }
    }
    const auto assignment = max_weight_assignment(weights);
    out.value = static_cast<int>(assignment.total / scale);
    for (std::int64_t r = 0; r < k; ++r) {
      if (assignment.row_to_col[r] >= 0) out.child_slots.emplace_back(kids[r], assignment.row_to_col[r]);
    }
    return out;
  }

  /// Write the waiting times of v's participating descendants.
  void unwind(NodeId v, int budget, Schedule& s) const {
    std::vector<std::pair<NodeId, int>> stack{{v, budget}};
    while (!stack.empty()) {
      const auto [node, b] = stack.back();
      stack.pop_back();
      for (auto [child, slot] : solve(node, b).child_slots) {
        s.waiting[child] = slot;
        stack.emplace_back(child, slot);
      }
    }
  }

  int value(NodeId v, int w) const { return best_[v][w]; }

 private:
  const AggregationTree& tree_;
  std::vector<std::vector<int>> best_;
};

struct BruteResult {
  int value = 0;
  std::vector<std::pair<NodeId, int>> child_slots;
};

// Every injective partial map of children to slots below budget, recursing
// into each assigned child with its slot as the child's budget.
BruteResult brute_best(const AggregationTree& tree, const Topology& t, NodeId v, int budget);

void brute_children(const AggregationTree& tree, const Topology& t, std::span<const NodeId> kids,
                    std::size_t index, int budget, std::vector<char>& used, int value_so_far,
                    std::vector<std::pair<NodeId, int>>& current, BruteResult& best) {
  if (index == kids.size()) {
    if (value_so_far > best.value) {
      best.value = value_so_far;
      best.child_slots = current;
    }
    return;
  }
  brute_children(tree, t, kids, index + 1, budget, used, value_so_far, current, best);
  for (int slot = 0; slot < budget; ++slot) {
    if (used[slot]) continue;
    const int gain = brute_best(tree, t, kids[index], slot).value;
    if (gain == 0) continue;
    used[slot] = 1;
    current.emplace_back(kids[index], slot);
    brute_children(tree, t, kids, index + 1, budget, used, value_so_far + gain, current, best);
    current.pop_back();
    used[slot] = 0;
  }
}

BruteResult brute_best(const AggregationTree& tree, const Topology& t, NodeId v, int budget) {
  BruteResult best;
  std::vector<char> used(budget, 0);
  std::vector<std::pair<NodeId, int>> current;
  brute_children(tree, t, tree.children(v), 0, budget, used, 0, current, best);
  if (t.is_source(v)) best.value += 1;
  return best;
}

}  // namespace

Schedule optimal_schedule(const AggregationTree& tree, int deadline, const Topology& t) {
  check_deadline(deadline);
  const SlotTable table(tree, t, tree.sink(), deadline);
  Schedule s;
  s.waiting.assign(tree.num_sensors(), std::nullopt);
  table.unwind(tree.sink(), deadline, s);
  s.phi = count_participating_sources(tree, s, t);
  return s;
}

int subtree_optimum(const AggregationTree& tree, NodeId root, int budget, const Topology& t) {
  if (root == tree.sink()) {
    if (budget < 1) return 0;
    const SlotTable table(tree, t, root, budget);
    return table.solve(root, budget).value;
  }
  const SlotTable table(tree, t, root, budget + 1);
  return table.value(root, budget);
}

std::vector<int> optimum_by_deadline(const AggregationTree& tree, int max_deadline, const Topology& t) {
  check_deadline(max_deadline);
  const SlotTable table(tree, t, tree.sink(), max_deadline);
  std::vector<int> out(max_deadline);
  for (int d = 1; d <= max_deadline; ++d) out[d - 1] = table.solve(tree.sink(), d).value;
  return out;
}

Schedule brute_force_schedule(const AggregationTree& tree, int deadline, const Topology& t) {
  check_deadline(deadline);
  if (tree.num_sensors() > 12 || deadline > 5) {
    throw Error(ErrorKind::TooLarge, "brute force is limited to V <= 12 and D <= 5");
  }
  Schedule s;
  s.waiting.assign(tree.num_sensors(), std::nullopt);
  std::vector<std::pair<NodeId, int>> stack{{tree.sink(), deadline}};
  while (!stack.empty()) {
    const auto [node, budget] = stack.back();
    stack.pop_back();
    for (auto [child, slot] : brute_best(tree, t, node, budget).child_slots) {
      s.waiting[child] = slot;
      stack.emplace_back(child, slot);
    }
  }
  s.phi = count_participating_sources(tree, s, t);
  return s;
}

int count_participating_sources(const AggregationTree& tree, const Schedule& s, const Topology& t) {
  std::vector<char> chain_ok(tree.preorder().size(), 0);
  chain_ok[tree.sink()] = 1;
  int phi = 0;
  for (NodeId v : tree.preorder()) {
    if (v == tree.sink()) continue;
    chain_ok[v] = chain_ok[tree.parent(v)] && s.participates(v);
    if (chain_ok[v] && t.is_source(v)) ++phi;
  }
  return phi;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SizeMismatch: return "SizeMismatch";
    case ViolationKind::WaitingOutOfRange: return "WaitingOutOfRange";
    case ViolationKind::ParentNotParticipating: return "ParentNotParticipating";
    case ViolationKind::NotBeforeParent: return "NotBeforeParent";
    case ViolationKind::SlotCollision: return "SlotCollision";
    case ViolationKind::ChildCountExceeded: return "ChildCountExceeded";
    case ViolationKind::PhiMismatch: return "PhiMismatch";
  }
  return "Unknown";
}

std::vector<Violation> validate_schedule(const AggregationTree& tree, int deadline,
                                         const Schedule& s, const Topology& t) {
  std::vector<Violation> out;
  if (static_cast<int>(s.waiting.size()) != tree.num_sensors()) {
    out.push_back({ViolationKind::SizeMismatch, kNoNode,
                   "schedule has " + std::to_string(s.waiting.size()) + " entries"});
    return out;
  }
  const NodeId sink = tree.sink();

  for (NodeId i = 0; i < tree.num_sensors(); ++i) {
    if (!s.participates(i)) continue;
    const int w = *s.waiting[i];
    if (w < 0 || w > deadline - 1) {
      out.push_back({ViolationKind::WaitingOutOfRange, i, "W=" + std::to_string(w)});
    }
    const NodeId p = tree.parent(i);
    if (p != sink && !s.participates(p)) {
      out.push_back({ViolationKind::ParentNotParticipating, i, "parent " + std::to_string(p)});
      continue;
    }
    const int parent_w = p == sink ? deadline : *s.waiting[p];
    if (w >= parent_w) {
      out.push_back({ViolationKind::NotBeforeParent, i,
                     "W=" + std::to_string(w) + " >= W_parent=" + std::to_string(parent_w)});
    }
  }

  // Per-parent interference: distinct child slots, and count <= W_p - M_p.
  for (NodeId p = 0; p <= sink; ++p) {
    if (p != sink && !s.participates(p)) continue;
    const int parent_w = p == sink ? deadline : *s.waiting[p];
    std::vector<int> slots;
    for (NodeId c : tree.children(p)) {
      if (!s.participates(c)) continue;
      const int w = *s.waiting[c];
      if (std::find(slots.begin(), slots.end(), w) != slots.end()) {
        out.push_back({ViolationKind::SlotCollision, c,
                       "slot " + std::to_string(w) + " reused under parent " + std::to_string(p)});
      }
      slots.push_back(w);
    }
    if (!slots.empty()) {
      const int min_slot = *std::min_element(slots.begin(), slots.end());
      if (static_cast<int>(slots.size()) > parent_w - min_slot) {
        out.push_back({ViolationKind::ChildCountExceeded, p,
                       std::to_string(slots.size()) + " children > W-M=" +
                           std::to_string(parent_w - min_slot)});
      }
    }
  }

  const int recount = count_participating_sources(tree, s, t);
  if (recount != s.phi) {
    out.push_back({ViolationKind::PhiMismatch, kNoNode,
                   "phi=" + std::to_string(s.phi) + " but recount=" + std::to_string(recount)});
  }
  return out;
}

Schedule reduce_deadline(const Schedule& s, int deadline, int new_deadline,
                         const AggregationTree& tree, const Topology& t) {
  if (new_deadline < 1 || new_deadline > deadline) {
    throw Error(ErrorKind::InvalidDeadline, "new deadline " + std::to_string(new_deadline) +
                                                " outside [1, " + std::to_string(deadline) + "]");
  }
  const int shift = deadline - new_deadline;
  Schedule out;
  out.waiting.assign(s.waiting.size(), std::nullopt);
  for (NodeId v : tree.preorder()) {
    if (v == tree.sink() || !s.participates(v) || *s.waiting[v] < shift) continue;
    const NodeId p = tree.parent(v);
    if (p != tree.sink() && !out.participates(p)) continue;
    out.waiting[v] = *s.waiting[v] - shift;
  }
  out.phi = count_participating_sources(tree, out, t);
  return out;
}

void write_schedule(std::ostream& os, const Schedule& s) {
  for (std::size_t i = 0; i < s.waiting.size(); ++i) {
    os << i << ' ';
    if (s.waiting[i]) {
      os << *s.waiting[i] << " 1\n";
    } else {
      os << "- 0\n";
    }
  }
  os << "PHI " << s.phi << '\n';
}

}  // namespace aggtree
