#include <doctest.h>

#include <set>
#include <sstream>

#include "aggtree/agg_tree.hpp"
#include "aggtree/error.hpp"
#include "fixtures.hpp"

using namespace aggtree;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Parse;
}

Topology connected_rgg(int v, std::uint64_t seed) {
  RggParams p;
  p.num_sensors = v;
  p.field_width = p.field_height = 100.0;
  p.range = 40.0;
  p.sink_position = {50.0, 100.0};
  while (true) {
    Topology t = generate_rgg(p, seed++);
    if (is_connected(t)) return t;
  }
}

}  // namespace

TEST_CASE("single sensor tree") {
  const Topology t = make_complete(1);
  const auto tree = build_from_parents({{0, t.sink()}}, t);
  CHECK(tree.parent(0) == t.sink());
  CHECK(tree.depth(0) == 1);
  CHECK(ancestors(tree, 0) == std::vector<NodeId>{0});
}

TEST_CASE("build errors name the problem") {
  const Topology t = make_complete(3);
  CHECK(kind_of([&] { build_from_parents({{0, 1}, {1, 0}, {2, 3}}, t); }) == ErrorKind::CycleDetected);
  CHECK(kind_of([&] { build_from_parents({{0, 3}, {1, 3}}, t); }) == ErrorKind::MissingNode);
  CHECK(kind_of([&] { build_from_parents({{0, 0}, {1, 3}, {2, 3}}, t); }) == ErrorKind::NonTopologyEdge);

  const Topology path = fixtures::tree_graph(fixtures::chain_parents(3));
  CHECK(kind_of([&] { AggregationTree::build({3, 3, 1}, path); }) == ErrorKind::NonTopologyEdge);
}

TEST_CASE("validation agrees with a union-find acyclicity oracle") {
  std::mt19937_64 rng(11);
  int valid = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Topology t = connected_rgg(8, 1000 + trial);
    std::vector<NodeId> parents(t.num_sensors());
    for (NodeId i = 0; i < t.num_sensors(); ++i) {
      const auto nbrs = t.neighbors(i);
      parents[i] = nbrs[std::uniform_int_distribution<std::size_t>(0, nbrs.size() - 1)(rng)];
    }
    fixtures::UnionFind uf(t.num_vertices());
    bool acyclic = true;
    for (NodeId i = 0; i < t.num_sensors(); ++i) acyclic = uf.unite(i, parents[i]) && acyclic;

    bool built = true;
    try {
      AggregationTree::build(parents, t);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CycleDetected);
      built = false;
    }
    CHECK(built == acyclic);
    valid += built ? 1 : 0;
  }
  CHECK(valid > 0);
  CHECK(valid < 400);
}

TEST_CASE("ancestors") {
  const auto chain = fixtures::chain_parents(3);  // S <- 0 <- 1 <- 2
  const Topology t = fixtures::tree_graph(chain);
  const auto tree = AggregationTree::build(chain, t);
  CHECK(ancestors(tree, 0) == std::vector<NodeId>{0});
  CHECK(ancestors(tree, 2) == std::vector<NodeId>{2, 1, 0});

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto parents = fixtures::random_tree_parents(12, rng);
    const Topology g = fixtures::tree_graph(parents);
    const auto tr = AggregationTree::build(parents, g);
    const auto depth = fixtures::bfs_depths(g.num_vertices(), g.sink(), fixtures::edge_list(g));
    for (NodeId i = 0; i < 12; ++i) {
      const auto h = ancestors(tr, i);
      CHECK(static_cast<int>(h.size()) == depth[i]);
      CHECK(h.front() == i);
      CHECK(std::find(h.begin(), h.end(), tr.sink()) == h.end());
      CHECK(tr.depth(i) == depth[i]);
    }
  }
}

TEST_CASE("subtree, ancestors and children are consistent") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto parents = fixtures::random_tree_parents(10, rng);
    const Topology g = fixtures::tree_graph(parents);
    const auto tr = AggregationTree::build(parents, g);
    for (NodeId i = 0; i < 10; ++i) {
      const auto sub = tr.subtree(i);
      for (NodeId j = 0; j < 10; ++j) {
        const auto h = ancestors(tr, j);
        const bool via_ancestors = std::find(h.begin(), h.end(), i) != h.end();
        const bool via_subtree = std::find(sub.begin(), sub.end(), j) != sub.end();
        CHECK(via_ancestors == via_subtree);
        CHECK(tr.in_subtree(i, j) == via_subtree);
      }
      for (NodeId c : tr.children(i)) CHECK(tr.parent(c) == i);
    }
    CHECK(tr.subtree(tr.sink()).size() == 11);
  }
}

TEST_CASE("reparent") {
  const Topology t = make_complete(4);
  const auto chain = AggregationTree::build(fixtures::chain_parents(4), t);

  CHECK(reparent(chain, 2, 1, t) == chain);
  CHECK(kind_of([&] { reparent(chain, 1, 3, t); }) == ErrorKind::WouldCreateCycle);
  CHECK(kind_of([&] { reparent(chain, 1, 1, t); }) == ErrorKind::NonTopologyEdge);

  const auto moved = reparent(chain, 2, t.sink(), t);
  CHECK(moved.parent(2) == t.sink());
  CHECK(moved.parent(3) == 2);
  CHECK(chain.parent(2) == 1);  // input untouched

  const Topology path = fixtures::tree_graph(fixtures::chain_parents(3));
  const auto only = AggregationTree::build(fixtures::chain_parents(3), path);
  CHECK(kind_of([&] { reparent(only, 2, path.sink(), path); }) == ErrorKind::NonTopologyEdge);
}

TEST_CASE("random valid moves re-validate") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Topology t = connected_rgg(10, 5000 + trial);
    std::vector<NodeId> bfs_parent(t.num_sensors(), kNoNode);
    const auto depth = hop_distances(t);
    for (NodeId i = 0; i < t.num_sensors(); ++i) {
      for (NodeId j : t.neighbors(i)) {
        if (depth[j] == depth[i] - 1) {
          bfs_parent[i] = j;
          break;
        }
      }
    }
    auto tree = AggregationTree::build(bfs_parent, t);
    for (int move = 0; move < 20; ++move) {
      const NodeId i = std::uniform_int_distribution<NodeId>(0, t.num_sensors() - 1)(rng);
      std::vector<NodeId> options;
      for (NodeId j : t.neighbors(i)) {
        if (j == t.sink() || !tree.in_subtree(i, j)) options.push_back(j);
      }
      if (options.empty()) continue;
      const NodeId j = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
      const auto before = tree.parents();
      auto next = reparent(tree, i, j, t);
      CHECK(tree.parents() == before);
      CHECK(AggregationTree::build(next.parents(), t) == next);
      tree = std::move(next);
    }
  }
}

TEST_CASE("canonical keys over every spanning tree of K5") {
  // Enumerate all parent maps of 4 sensors and keep the valid ones.
  const Topology t = make_complete(4);
  std::set<TreeKey> keys;
  int valid = 0;
  for (int code = 0; code < 625; ++code) {
    std::vector<NodeId> parents(4);
    int c = code;
    for (NodeId i = 0; i < 4; ++i) {
      parents[i] = c % 5;
      c /= 5;
    }
    try {
      const auto tree = AggregationTree::build(parents, t);
      keys.insert(canonical_key(tree));
      CHECK(canonical_key(tree) == canonical_key(AggregationTree::build(parents, t)));
      ++valid;
    } catch (const Error&) {
    }
  }
  CHECK(valid == 125);
  CHECK(keys.size() == 125);

  const auto a = AggregationTree::build({4, 4, 4, 4}, t);
  const auto b = AggregationTree::build({4, 4, 4, 0}, t);
  CHECK(canonical_key(a) != canonical_key(b));
  CHECK(TreeKeyHash{}(canonical_key(a)) == TreeKeyHash{}(canonical_key(a)));
}

TEST_CASE("tree text format") {
  const Topology t = make_complete(3);
  const auto tree = AggregationTree::build({3, 0, 0}, t);
  std::stringstream ss;
  write_tree(ss, tree);
  CHECK(ss.str() == "0 S\n1 0\n2 0\n");
  CHECK(read_tree(ss, t) == tree);

  std::istringstream bad("0 X\n1 S\n2 S\n");
  CHECK(kind_of([&] { read_tree(bad, t); }) == ErrorKind::Parse);
  std::istringstream partial("0 S\n1 S\n");
  CHECK(kind_of([&] { read_tree(partial, t); }) == ErrorKind::MissingNode);
}
