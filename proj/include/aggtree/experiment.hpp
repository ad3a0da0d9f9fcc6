#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "aggtree/agg_tree.hpp"
#include "aggtree/markov.hpp"
#include "aggtree/topology.hpp"

namespace aggtree {

enum class Algorithm { ZOptimal, Approx1, Approx2, Approx1H, Approx2H, FastInitTree, Baseline };

/// Names used in CSV output and config files ("Approx-1H", "Baseline", ...).
std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

enum class XAxis { NodeCount, Deadline };

struct DeadlineSpec {
  int lo = 10;
  int hi = 20;  // inclusive; lo == hi is a fixed deadline
};

struct ScenarioConfig {
  std::string name = "default";
  double field_side = 300.0;
  std::vector<int> node_counts{100};
  double range = 75.0;
  Eigen::Vector2d sink_position{150.0, 300.0};
  double source_fraction = 0.8;
  DeadlineSpec deadline;
  double alpha = 0.2;
  double beta = 2.0;
  int runs = 50;
  std::int64_t iterations = 50;
  std::vector<Algorithm> algorithms{Algorithm::Approx1,  Algorithm::Approx2,      Algorithm::Approx1H,
                                    Algorithm::Approx2H, Algorithm::FastInitTree, Algorithm::Baseline};
  std::uint64_t base_seed = 1;
  std::string output_dir = "results";
  int exact_max_nodes = 15;
  std::int64_t exact_max_trees = 5'000'000;
  int max_regenerations = 100'000;
  bool record_timing = true;
  bool write_trajectories = false;
  XAxis x_axis = XAxis::NodeCount;
};

/// Throws ConfigInvalid naming the first bad field.
void validate(const ScenarioConfig& config);

/// Set one `key = value` pair; throws ConfigInvalid on unknown keys or bad
/// values.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` file. Keys before the first `[section]` are defaults
/// shared by every scenario; each `[name]` or `[scenario name]` header opens
/// a scenario. A file without headers describes a single scenario.
std::vector<ScenarioConfig> parse_config(std::istream& is);

struct ExperimentRecord {
  std::string scenario;
  std::uint64_t seed = 0;  // topology seed; every other draw derives from it
  int run = 0;
  Algorithm algorithm = Algorithm::Baseline;
  int num_sensors = 0;
  int deadline = 0;
  int phi = 0;
  double ms = 0.0;
  std::string error;  // non-empty when this record failed
  std::shared_ptr<const Topology> topology;
  std::optional<AggregationTree> tree;
  std::vector<TransitionRecord> trajectory;

  bool ok() const { return error.empty(); }
};

/// All records of one scenario, ordered by (node count, run, algorithm as
/// listed in the config). Per-record failures are captured in the record.
std::vector<ExperimentRecord> run_scenario(const ScenarioConfig& config);

/// Connected topology for one run: redraws with derived seeds until the
/// deployment reaches the sink. Returns the topology and the seed used.
std::pair<Topology, std::uint64_t> connected_topology(const ScenarioConfig& config, int num_sensors, int run);

struct SummaryRow {
  std::string scenario;
  Algorithm algorithm = Algorithm::Baseline;
  int x = 0;
  double mean_phi = 0.0;
  double ci95 = 0.0;
  int count = 0;
};

struct MeanInterval {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Mean and two-sided 95% Student-t half-width; a single value has
/// half-width 0. Throws EmptyGroup on no values. Independent of input order.
MeanInterval mean_ci95(std::span<const double> values);

/// Groups successful records by (scenario, algorithm, x).
std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, XAxis x_axis);

void write_results_csv(std::ostream& os, std::span<const ExperimentRecord> records);
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);

/// Runs the scenario and writes results.csv, summary.csv and (optionally)
/// trajectories/ under config.output_dir.
std::vector<ExperimentRecord> run_and_write(const ScenarioConfig& config);

}  // namespace aggtree
