// Command-line front end: topology generation, tree construction, scheduling,
// exhaustive search, single Markov chains, and batch scenarios.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aggtree/agg_tree.hpp"
#include "aggtree/error.hpp"
#include "aggtree/exact_solver.hpp"
#include "aggtree/experiment.hpp"
#include "aggtree/init_trees.hpp"
#include "aggtree/markov.hpp"
#include "aggtree/scheduler.hpp"
#include "aggtree/topology.hpp"

namespace {

using namespace aggtree;

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open topology file " + path);
  return read_topology(in);
}

AggregationTree load_tree(const std::string& path, const Topology& t) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, "cannot open tree file " + path);
  return read_tree(in, t);
}

template <typename Writer>
void emit(const std::string& path, Writer&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Parse, "cannot write " + path);
  write(out);
}

AggregationTree build_initial(const std::string& algo, const Topology& t, int deadline) {
  if (algo == "fast") return fast_init_tree(t, deadline);
  if (algo == "git") return git_tree(t);
  return synthetic_tree(t, parse_synthetic_kind(algo));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-constrained aggregation tree construction for WSNs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random geometric topology");
  RggParams rgg;
  double field = 300.0;
  std::vector<double> sink{150.0, 300.0};
  std::uint64_t gen_seed = 1;
  bool require_connected = false;
  std::string gen_out;
  gen->add_option("--nodes", rgg.num_sensors, "Number of sensors")->check(CLI::NonNegativeNumber);
  gen->add_option("--field", field, "Side of the square field in meters");
  gen->add_option("--range", rgg.range, "Communication range in meters");
  gen->add_option("--sink", sink, "Sink position x y")->expected(2);
  gen->add_option("--sources", rgg.source_fraction, "Fraction of sensors that are sources")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_flag("--connected", require_connected, "Redraw with seed+1 until the sink reaches every sensor");
  gen->add_option("--out", gen_out, "Output file (stdout if omitted)");

  // init
  auto* init = app.add_subcommand("init", "Build an initial aggregation tree");
  std::string init_algo = "fast";
  std::string init_topology, init_out;
  int init_deadline = 1;
  init->add_option("--algo", init_algo, "fast, git, chain or bfs")
      ->check(CLI::IsMember({"fast", "git", "chain", "bfs"}));
  init->add_option("--topology", init_topology, "Topology file")->required();
  init->add_option("--deadline", init_deadline, "Sink deadline (used by fast)");
  init->add_option("--out", init_out, "Output tree file (stdout if omitted)");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Optimal schedule of a fixed tree");
  std::string sched_tree, sched_topology, sched_out;
  int sched_deadline = 1;
  std::optional<int> reduce_to;
  sched->add_option("--tree", sched_tree, "Tree file")->required();
  sched->add_option("--topology", sched_topology, "Topology file")->required();
  sched->add_option("--deadline", sched_deadline, "Sink deadline")->required();
  sched->add_option("--reduce-to", reduce_to, "Shift the schedule down to a smaller deadline");
  sched->add_option("--out", sched_out, "Output schedule file (stdout if omitted)");

  // exact
  auto* exact = app.add_subcommand("exact", "Exhaustive optimal tree (small networks)");
  std::string exact_topology, exact_out;
  int exact_deadline = 1;
  EnumerationBudget budget;
  exact->add_option("--topology", exact_topology, "Topology file")->required();
  exact->add_option("--deadline", exact_deadline, "Sink deadline")->required();
  exact->add_option("--max-nodes", budget.max_nodes, "Refuse larger networks");
  exact->add_option("--max-trees", budget.max_trees, "Refuse topologies with more spanning trees");
  exact->add_option("--out", exact_out, "Output tree file (stdout if omitted)");

  // markov
  auto* markov = app.add_subcommand("markov", "Run one parent-changing chain");
  std::string markov_topology, markov_init = "fast", markov_out, markov_traj, estimator_name = "approx1";
  int markov_deadline = 1;
  MarkovConfig mc;
  markov->add_option("--topology", markov_topology, "Topology file")->required();
  markov->add_option("--deadline", markov_deadline, "Sink deadline")->required();
  markov->add_option("--init", markov_init, "fast, git, chain, bfs, or a tree file");
  markov->add_option("--estimator", estimator_name, "exact, approx1 or approx2")
      ->check(CLI::IsMember({"exact", "approx1", "approx2"}));
  markov->add_option("--alpha", mc.alpha, "alpha")->check(CLI::NonNegativeNumber);
  markov->add_option("--beta", mc.beta, "beta")->check(CLI::PositiveNumber);
  markov->add_option("--iterations", mc.iterations, "Timer expirations")->check(CLI::NonNegativeNumber);
  markov->add_option("--seed", mc.seed, "Random seed");
  markov->add_option("--trajectory", markov_traj, "Write the trajectory CSV here");
  markov->add_option("--out", markov_out, "Write the best tree here (stdout if omitted)");

  // run
  auto* runner = app.add_subcommand("run", "Run experiment scenarios from a config file");
  std::string config_path;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_out;
  std::vector<std::string> overrides;
  runner->add_option("--config", config_path, "Scenario config file")->required();
  runner->add_option("--seed", run_seed, "Override the base seed");
  runner->add_option("--out", run_out, "Override the output directory");
  runner->add_option("--set", overrides, "Override any key: --set key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      rgg.field_width = rgg.field_height = field;
      rgg.sink_position = {sink[0], sink[1]};
      Topology t = generate_rgg(rgg, gen_seed);
      while (require_connected && !is_connected(t)) t = generate_rgg(rgg, ++gen_seed);
      if (require_connected) std::cerr << "seed " << gen_seed << '\n';
      emit(gen_out, [&](std::ostream& os) { write_topology(os, t); });
    } else if (*init) {
      const Topology t = load_topology(init_topology);
      const AggregationTree tree = build_initial(init_algo, t, init_deadline);
      emit(init_out, [&](std::ostream& os) { write_tree(os, tree); });
    } else if (*sched) {
      const Topology t = load_topology(sched_topology);
      const AggregationTree tree = load_tree(sched_tree, t);
      Schedule s = optimal_schedule(tree, sched_deadline, t);
      if (reduce_to) s = reduce_deadline(s, sched_deadline, *reduce_to, tree, t);
      emit(sched_out, [&](std::ostream& os) { write_schedule(os, s); });
    } else if (*exact) {
      const Topology t = load_topology(exact_topology);
      const ZOptimal best = z_optimal(t, exact_deadline, budget);
      std::cerr << "trees " << best.trees_visited << " phi " << best.phi << '\n';
      emit(exact_out, [&](std::ostream& os) { write_tree(os, best.tree); });
      std::cout << "PHI " << best.phi << '\n';
    } else if (*markov) {
      const Topology t = load_topology(markov_topology);
      mc.estimator = parse_estimator(estimator_name);
      const bool named = markov_init == "fast" || markov_init == "git" || markov_init == "chain" || markov_init == "bfs";
      const AggregationTree initial =
          named ? build_initial(markov_init, t, markov_deadline) : load_tree(markov_init, t);
      const MarkovRun result = run(mc, t, markov_deadline, initial);
      if (!markov_traj.empty()) {
        emit(markov_traj, [&](std::ostream& os) { write_trajectory_csv(os, result.trajectory); });
      }
      std::cerr << "best phi " << result.best_phi << " final phi " << result.final_phi << '\n';
      emit(markov_out, [&](std::ostream& os) { write_tree(os, result.best_tree); });
    } else if (*runner) {
      std::ifstream in(config_path);
      if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot open config " + config_path);
      auto scenarios = parse_config(in);
      for (auto& s : scenarios) {
        for (const auto& kv : overrides) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw Error(ErrorKind::ConfigInvalid, "--set expects key=value");
          apply_setting(s, kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (run_seed) s.base_seed = *run_seed;
        if (run_out) s.output_dir = scenarios.size() == 1 ? *run_out : *run_out + "/" + s.name;
        validate(s);
        const auto records = run_and_write(s);
        std::size_t failed = 0;
        for (const auto& r : records) failed += r.ok() ? 0 : 1;
        std::cerr << s.name << ": " << records.size() << " records (" << failed << " failed) -> " << s.output_dir
                  << '\n';
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
