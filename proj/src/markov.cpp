#include "aggtree/markov.hpp"

#include <optional>
#include <ostream>
#include <string>

#include "aggtree/error.hpp"

namespace aggtree {

Estimator parse_estimator(std::string_view name) {
  if (name == "exact") return Estimator::Exact;
  if (name == "approx1") return Estimator::Approx1;
  if (name == "approx2") return Estimator::Approx2;
  throw Error(ErrorKind::ConfigInvalid, "unknown estimator '" + std::string(name) + "'");
}

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::Exact: return "exact";
    case Estimator::Approx1: return "approx1";
    case Estimator::Approx2: return "approx2";
  }
  return "unknown";
}

MarkovState make_state(AggregationTree tree, const Topology& t, int deadline, std::uint64_t seed) {
  Schedule schedule = optimal_schedule(tree, deadline, t);
  return MarkovState{std::move(tree), std::move(schedule), 0, 0.0, std::mt19937_64(seed)};
}

std::vector<NodeId> candidate_parents(const MarkovState& state, NodeId i, const Topology& t, int deadline) {
  std::vector<NodeId> out;
  const int own = state.schedule.effective_waiting(i, deadline);
  for (NodeId j : t.neighbors(i)) {
    if (j == state.tree.parent(i)) continue;
    if (j != state.tree.sink() && state.tree.in_subtree(i, j)) continue;
    if (state.schedule.effective_waiting(j, deadline) >= own) out.push_back(j);
  }
  return out;
}

namespace {

struct Evaluation {
  PhiEstimate estimate;
  std::optional<Schedule> next_schedule;  // set by the exact estimator
};

Evaluation evaluate(const MarkovState& state, NodeId i, const AggregationTree& next_tree, Estimator method,
                    const Topology& t, int deadline) {
  Evaluation out;
  const NodeId old_parent = state.tree.parent(i);
  const NodeId new_parent = next_tree.parent(i);
  const Schedule& s = state.schedule;
  switch (method) {
    case Estimator::Exact: {
      out.next_schedule = optimal_schedule(next_tree, deadline, t);
      out.estimate = {static_cast<double>(s.phi), static_cast<double>(out.next_schedule->phi)};
      break;
    }
    case Estimator::Approx1: {
      // Both parents keep their current budgets; only their subtrees change.
      const int old_budget = s.effective_waiting(old_parent, deadline);
      const int new_budget = s.effective_waiting(new_parent, deadline);
      out.estimate.prev = subtree_optimum(state.tree, old_parent, old_budget, t) +
                          subtree_optimum(state.tree, new_parent, new_budget, t);
      out.estimate.next = subtree_optimum(next_tree, old_parent, old_budget, t) +
                          subtree_optimum(next_tree, new_parent, new_budget, t);
      break;
    }
    case Estimator::Approx2: {
      out.estimate = {static_cast<double>(s.effective_waiting(i, deadline)),
                      static_cast<double>(s.effective_waiting(new_parent, deadline))};
      break;
    }
  }
  return out;
}

}  // namespace

PhiEstimate estimate_phi(const MarkovState& state, NodeId i, NodeId new_parent, Estimator method,
                         const Topology& t, int deadline) {
  const AggregationTree next_tree = reparent(state.tree, i, new_parent, t);
  return evaluate(state, i, next_tree, method, t, deadline).estimate;
}

TransitionRecord step(MarkovState& state, const MarkovConfig& config, const Topology& t, int deadline) {
  TransitionRecord rec;
  rec.step = state.clock++;

  std::vector<std::vector<NodeId>> candidates(t.num_sensors());
  std::int64_t total = 0;
  for (NodeId i = 0; i < t.num_sensors(); ++i) {
    candidates[i] = candidate_parents(state, i, t, deadline);
    total += static_cast<std::int64_t>(candidates[i].size());
  }
  if (total == 0) {
    rec.frozen = true;
    rec.phi_exact = state.schedule.phi;
    return rec;
  }

  // The first of the exponential timers (rate |N_i| each) to fire, then a
  // uniform candidate: together a uniform draw over all (node, candidate)
  // pairs. The race minimum is Exp(total).
  rec.dwell = std::exponential_distribution<double>(static_cast<double>(total))(state.rng);
  state.elapsed += rec.dwell;
  std::int64_t pick = std::uniform_int_distribution<std::int64_t>(0, total - 1)(state.rng);
  NodeId mover = 0;
  while (pick >= static_cast<std::int64_t>(candidates[mover].size())) {
    pick -= static_cast<std::int64_t>(candidates[mover].size());
    ++mover;
  }
  rec.mover = mover;
  rec.old_parent = state.tree.parent(mover);
  rec.new_parent = candidates[mover][pick];

  AggregationTree next_tree = reparent(state.tree, mover, rec.new_parent, t);
  Evaluation eval = evaluate(state, mover, next_tree, config.estimator, t, deadline);
  rec.phi_prev_est = eval.estimate.prev;
  rec.phi_next_est = eval.estimate.next;
  rec.accept_prob = transition_prob(rec.phi_prev_est, rec.phi_next_est, config.alpha, config.beta);

  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(state.rng);
  rec.accepted = u < rec.accept_prob;
  if (rec.accepted) {
    state.schedule = eval.next_schedule ? std::move(*eval.next_schedule) : optimal_schedule(next_tree, deadline, t);
    state.tree = std::move(next_tree);
  }
  rec.phi_exact = state.schedule.phi;
  return rec;
}

MarkovRun run(const MarkovConfig& config, const Topology& t, int deadline, const AggregationTree& initial) {
  MarkovState state = make_state(initial, t, deadline, config.seed);
  MarkovRun out{{}, initial, state.schedule.phi, initial, state.schedule.phi};
  out.trajectory.reserve(static_cast<std::size_t>(config.iterations));
  for (std::int64_t k = 0; k < config.iterations; ++k) {
    out.trajectory.push_back(step(state, config, t, deadline));
    if (state.schedule.phi > out.best_phi) {
      out.best_phi = state.schedule.phi;
      out.best_tree = state.tree;
    }
  }
  out.final_tree = state.tree;
  out.final_phi = state.schedule.phi;
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TransitionRecord>& trajectory) {
  os << "step,mover,old_parent,new_parent,phi_prev_est,phi_next_est,accept_prob,accepted,phi_exact\n";
  auto id = [](NodeId v) { return v == kNoNode ? std::string("-") : std::to_string(v); };
  for (const auto& r : trajectory) {
    os << r.step << ',' << id(r.mover) << ',' << id(r.old_parent) << ',' << id(r.new_parent) << ','
       << r.phi_prev_est << ',' << r.phi_next_est << ',' << r.accept_prob << ',' << (r.accepted ? 1 : 0)
       << ',' << r.phi_exact << '\n';
  }
}

}  // namespace aggtree
