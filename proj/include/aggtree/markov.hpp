#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

#include "aggtree/agg_tree.hpp"
#include "aggtree/markov_analytics.hpp"
#include "aggtree/scheduler.hpp"
#include "aggtree/topology.hpp"

namespace aggtree {

/// How a moving node scores the current and the candidate tree.
enum class Estimator {
  Exact,    // full reschedule of both trees
  Approx1,  // subtree optima at the old and new parent
  Approx2,  // waiting times of the mover and of the new parent
};

Estimator parse_estimator(std::string_view name);
const char* to_string(Estimator e);

struct MarkovConfig {
  double alpha = 0.2;
  double beta = 2.0;
  std::int64_t iterations = 50;  // timer expirations, accepted or not
  Estimator estimator = Estimator::Exact;
  std::uint64_t seed = 1;
};

struct MarkovState {
  AggregationTree tree;
  Schedule schedule;  // always optimal_schedule(tree, deadline)
  std::int64_t clock = 0;
  double elapsed = 0.0;  // continuous time of the timer race
  std::mt19937_64 rng;
};

MarkovState make_state(AggregationTree tree, const Topology& t, int deadline, std::uint64_t seed);

struct TransitionRecord {
  std::int64_t step = 0;
  NodeId mover = kNoNode;
  NodeId old_parent = kNoNode;
  NodeId new_parent = kNoNode;
  double phi_prev_est = 0.0;
  double phi_next_est = 0.0;
  double accept_prob = 0.0;
  bool accepted = false;
  bool frozen = false;  // no node had a candidate parent
  int phi_exact = 0;    // phi of the tree after the step
  double dwell = 0.0;   // holding time spent in the pre-step tree
};

/// Neighbours j of sensor i with W_j >= W_i (non-participants at 0, the sink
/// at the deadline), minus i's current parent and i's own subtree.
std::vector<NodeId> candidate_parents(const MarkovState& state, NodeId i, const Topology& t, int deadline);

struct PhiEstimate {
  double prev = 0.0;
  double next = 0.0;
};

/// Scores for moving sensor i under new_parent with the given estimator.
PhiEstimate estimate_phi(const MarkovState& state, NodeId i, NodeId new_parent, Estimator method,
                         const Topology& t, int deadline);

/// One timer expiration of the parent-changing chain. The expiring node is
/// drawn with probability proportional to its candidate count and the new
/// parent uniformly among its candidates; the move is kept with
/// transition_prob of the estimates.
TransitionRecord step(MarkovState& state, const MarkovConfig& config, const Topology& t, int deadline);

struct MarkovRun {
  std::vector<TransitionRecord> trajectory;
  AggregationTree best_tree;
  int best_phi = 0;
  AggregationTree final_tree;
  int final_phi = 0;
};

/// config.iterations steps from `initial`; best_* is the best exact phi seen.
MarkovRun run(const MarkovConfig& config, const Topology& t, int deadline, const AggregationTree& initial);

/// step,mover,old_parent,new_parent,phi_prev_est,phi_next_est,accept_prob,accepted,phi_exact
void write_trajectory_csv(std::ostream& os, const std::vector<TransitionRecord>& trajectory);

}  // namespace aggtree
