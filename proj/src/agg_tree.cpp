#include "aggtree/agg_tree.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "aggtree/error.hpp"

namespace aggtree {

AggregationTree AggregationTree::build(std::vector<NodeId> parents, const Topology& t) {
  const int v = t.num_sensors();
  if (static_cast<int>(parents.size()) != v) {
    throw Error(ErrorKind::MissingNode, "expected parents for " + std::to_string(v) +
                                            " sensors, got " + std::to_string(parents.size()));
  }
  const NodeId sink = v;
  for (NodeId i = 0; i < v; ++i) {
    const NodeId p = parents[i];
    if (p == kNoNode) throw Error(ErrorKind::MissingNode, "sensor " + std::to_string(i) + " has no parent");
    if (p < 0 || p > sink || p == i || !t.adjacent(i, p)) {
      throw Error(ErrorKind::NonTopologyEdge,
                  "(" + std::to_string(i) + "," + std::to_string(p) + ") is not a link");
    }
  }

  AggregationTree tree;
  tree.parent_ = std::move(parents);

  // Children in CSR form; filling in id order keeps every list sorted.
  tree.child_begin_.assign(v + 2, 0);
  for (NodeId i = 0; i < v; ++i) ++tree.child_begin_[tree.parent_[i] + 1];
  for (int k = 0; k <= v; ++k) tree.child_begin_[k + 1] += tree.child_begin_[k];
  tree.child_list_.resize(v);
  std::vector<int> fill(tree.child_begin_.begin(), tree.child_begin_.end() - 1);
  for (NodeId i = 0; i < v; ++i) tree.child_list_[fill[tree.parent_[i]]++] = i;

  // Iterative DFS from the sink; anything not reached sits on a cycle.
  tree.depth_.assign(v + 1, -1);
  tree.enter_.assign(v + 1, 0);
  tree.exit_.assign(v + 1, 0);
  tree.preorder_.reserve(v + 1);
  int clock = 0;
  std::vector<std::pair<NodeId, int>> stack{{sink, 0}};
  tree.depth_[sink] = 0;
  tree.enter_[sink] = clock++;
  tree.preorder_.push_back(sink);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    const auto kids = tree.children(node);
    if (next < static_cast<int>(kids.size())) {
      const NodeId c = kids[next++];
      tree.depth_[c] = tree.depth_[node] + 1;
      tree.enter_[c] = clock++;
      tree.preorder_.push_back(c);
      stack.emplace_back(c, 0);
    } else {
      tree.exit_[node] = clock++;
      stack.pop_back();
    }
  }
  for (NodeId i = 0; i < v; ++i) {
    if (tree.depth_[i] < 0) {
      throw Error(ErrorKind::CycleDetected, "sensor " + std::to_string(i) + " lies on a parent cycle");
    }
  }
  return tree;
}

std::vector<NodeId> AggregationTree::subtree(NodeId root) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    const auto kids = children(u);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

AggregationTree build_from_parents(const std::map<NodeId, NodeId>& parents, const Topology& t) {
  std::vector<NodeId> flat(t.num_sensors(), kNoNode);
  for (auto [child, parent] : parents) {
    if (child < 0 || child >= t.num_sensors()) {
      throw Error(ErrorKind::MissingNode, "unknown sensor id " + std::to_string(child));
    }
    flat[child] = parent;
  }
  return AggregationTree::build(std::move(flat), t);
}

std::vector<NodeId> ancestors(const AggregationTree& tree, NodeId i) {
  std::vector<NodeId> out;
  out.reserve(tree.depth(i));
  for (NodeId u = i; u != tree.sink(); u = tree.parent(u)) out.push_back(u);
  return out;
}

AggregationTree reparent(const AggregationTree& tree, NodeId i, NodeId new_parent,
                         const Topology& t) {
  if (new_parent == i || !t.adjacent(i, new_parent)) {
    throw Error(ErrorKind::NonTopologyEdge,
                "(" + std::to_string(i) + "," + std::to_string(new_parent) + ") is not a link");
  }
  if (new_parent != tree.sink() && tree.in_subtree(i, new_parent)) {
    throw Error(ErrorKind::WouldCreateCycle,
                std::to_string(new_parent) + " is a descendant of " + std::to_string(i));
  }
  if (tree.parent(i) == new_parent) return tree;
  auto parents = tree.parents();
  parents[i] = new_parent;
  return AggregationTree::build(std::move(parents), t);
}

TreeKey canonical_key(const AggregationTree& tree) { return tree.parents(); }

std::size_t TreeKeyHash::operator()(const TreeKey& key) const noexcept {
  // FNV-1a over the parent ids.
  std::size_t h = 1469598103934665603ull;
  for (NodeId p : key) {
    h ^= static_cast<std::size_t>(p) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

void write_tree(std::ostream& os, const AggregationTree& tree) {
  for (NodeId i = 0; i < tree.num_sensors(); ++i) {
    os << i << ' ';
    if (tree.parent(i) == tree.sink()) {
      os << 'S';
    } else {
      os << tree.parent(i);
    }
    os << '\n';
  }
}

AggregationTree read_tree(std::istream& is, const Topology& t) {
  std::vector<NodeId> parents(t.num_sensors(), kNoNode);
  std::string line;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::istringstream row(line);
    int child = -1;
    std::string parent_token;
    if (!(row >> child >> parent_token) || child < 0 || child >= t.num_sensors()) {
      throw Error(ErrorKind::Parse, "bad tree line: '" + line + "'");
    }
    if (parent_token == "S") {
      parents[child] = t.sink();
    } else {
      try {
        std::size_t used = 0;
        parents[child] = std::stoi(parent_token, &used);
        if (used != parent_token.size()) throw std::invalid_argument(parent_token);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "bad parent token '" + parent_token + "'");
      }
    }
  }
  return AggregationTree::build(std::move(parents), t);
}

}  // namespace aggtree
