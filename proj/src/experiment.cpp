#include "aggtree/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "aggtree/error.hpp"
#include "aggtree/exact_solver.hpp"
#include "aggtree/init_trees.hpp"
#include "aggtree/scheduler.hpp"
#include "aggtree/seeding.hpp"

namespace aggtree {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 7> kAlgorithmNames{{
    {Algorithm::ZOptimal, "Z-Optimal"},
    {Algorithm::Approx1, "Approx-1"},
    {Algorithm::Approx2, "Approx-2"},
    {Algorithm::Approx1H, "Approx-1H"},
    {Algorithm::Approx2H, "Approx-2H"},
    {Algorithm::FastInitTree, "FastInitTree"},
    {Algorithm::Baseline, "Baseline"},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::ConfigInvalid, "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  value = trim(value);
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

bool uses_git(Algorithm a) {
  return a == Algorithm::Approx1 || a == Algorithm::Approx2 || a == Algorithm::Baseline;
}
bool uses_fast(Algorithm a) {
  return a == Algorithm::Approx1H || a == Algorithm::Approx2H || a == Algorithm::FastInitTree;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  for (auto [alg, name] : kAlgorithmNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto [alg, known] : kAlgorithmNames) {
    if (known == name) return alg;
  }
  throw Error(ErrorKind::ConfigInvalid, "unknown algorithm '" + std::string(name) + "'");
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); };
  if (c.runs < 1) fail("runs must be >= 1");
  if (c.node_counts.empty()) fail("nodes must list at least one count");
  for (int v : c.node_counts) {
    if (v < 0) fail("node counts must be >= 0");
  }
  if (c.deadline.lo < 1 || c.deadline.hi < c.deadline.lo) fail("deadline interval must lie within [1, inf)");
  if (!(c.range > 0.0)) fail("range must be > 0");
  if (!(c.field_side > 0.0)) fail("field must be > 0");
  if (c.source_fraction < 0.0 || c.source_fraction > 1.0) fail("source_fraction must be in [0, 1]");
  if (!(c.beta > 0.0)) fail("beta must be > 0");
  if (c.alpha < 0.0) fail("alpha must be >= 0");
  if (c.iterations < 0) fail("iterations must be >= 0");
  if (c.algorithms.empty()) fail("algorithms must not be empty");
  if (c.exact_max_nodes < 1 || c.exact_max_trees < 1) fail("exact caps must be positive");
  if (c.max_regenerations < 1) fail("max_regenerations must be >= 1");
}

void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "name") {
    c.name = std::string(value);
  } else if (key == "field") {
    c.field_side = parse_number<double>(key, value);
  } else if (key == "nodes") {
    c.node_counts.clear();
    for (auto part : split(value, ',')) c.node_counts.push_back(parse_number<int>(key, part));
  } else if (key == "range") {
    c.range = parse_number<double>(key, value);
  } else if (key == "sink") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) bad_value(key, value);
    c.sink_position = {parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1])};
  } else if (key == "source_fraction") {
    c.source_fraction = parse_number<double>(key, value);
  } else if (key == "deadline") {
    const auto dash = value.find('-');
    if (dash == std::string_view::npos) {
      c.deadline.lo = c.deadline.hi = parse_number<int>(key, value);
    } else {
      c.deadline.lo = parse_number<int>(key, value.substr(0, dash));
      c.deadline.hi = parse_number<int>(key, value.substr(dash + 1));
    }
  } else if (key == "alpha") {
    c.alpha = parse_number<double>(key, value);
  } else if (key == "beta") {
    c.beta = parse_number<double>(key, value);
  } else if (key == "runs") {
    c.runs = parse_number<int>(key, value);
  } else if (key == "iterations") {
    c.iterations = parse_number<std::int64_t>(key, value);
  } else if (key == "algorithms") {
    c.algorithms.clear();
    for (auto part : split(value, ',')) c.algorithms.push_back(parse_algorithm(part));
  } else if (key == "seed") {
    c.base_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    c.output_dir = std::string(value);
  } else if (key == "exact_max_nodes") {
    c.exact_max_nodes = parse_number<int>(key, value);
  } else if (key == "exact_max_trees") {
    c.exact_max_trees = parse_number<std::int64_t>(key, value);
  } else if (key == "max_regenerations") {
    c.max_regenerations = parse_number<int>(key, value);
  } else if (key == "record_timing") {
    c.record_timing = parse_bool(key, value);
  } else if (key == "trajectories") {
    c.write_trajectories = parse_bool(key, value);
  } else if (key == "x_axis") {
    if (value == "V") {
      c.x_axis = XAxis::NodeCount;
    } else if (value == "D") {
      c.x_axis = XAxis::Deadline;
    } else {
      bad_value(key, value);
    }
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown key '" + std::string(key) + "'");
  }
}

std::vector<ScenarioConfig> parse_config(std::istream& is) {
  ScenarioConfig defaults;
  std::vector<ScenarioConfig> scenarios;
  ScenarioConfig* current = nullptr;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    if (view.front() == '[') {
      if (view.back() != ']') {
        throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(line_no) + ": unterminated section header");
      }
      std::string_view header = trim(view.substr(1, view.size() - 2));
      if (header.starts_with("scenario")) header = trim(header.substr(8));
      scenarios.push_back(defaults);
      current = &scenarios.back();
      current->name = header.empty() ? "scenario" + std::to_string(scenarios.size()) : std::string(header);
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ConfigInvalid, "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(current ? *current : defaults, view.substr(0, eq), view.substr(eq + 1));
  }
  if (scenarios.empty()) scenarios.push_back(defaults);
  for (const auto& s : scenarios) validate(s);
  return scenarios;
}

std::pair<Topology, std::uint64_t> connected_topology(const ScenarioConfig& c, int num_sensors, int run) {
  RggParams params;
  params.num_sensors = num_sensors;
  params.field_width = params.field_height = c.field_side;
  params.range = c.range;
  params.sink_position = c.sink_position;
  params.source_fraction = c.source_fraction;
  for (int attempt = 0; attempt < c.max_regenerations; ++attempt) {
    const std::uint64_t seed = derive_seed(c.base_seed, {static_cast<std::uint64_t>(num_sensors),
                                                         static_cast<std::uint64_t>(run),
                                                         static_cast<std::uint64_t>(attempt)});
    Topology t = generate_rgg(params, seed);
    if (is_connected(t)) return {std::move(t), seed};
  }
  throw Error(ErrorKind::Disconnected, "no connected deployment of " + std::to_string(num_sensors) + " sensors after " +
                                           std::to_string(c.max_regenerations) + " draws");
}

std::vector<ExperimentRecord> run_scenario(const ScenarioConfig& c) {
  validate(c);
  using Clock = std::chrono::steady_clock;
  std::vector<ExperimentRecord> records;

  for (int v : c.node_counts) {
    for (int run = 0; run < c.runs; ++run) {
      auto fail_all = [&](const std::string& why, std::uint64_t seed, int deadline) {
        for (Algorithm a : c.algorithms) {
          ExperimentRecord r;
          r.scenario = c.name;
          r.seed = seed;
          r.run = run;
          r.algorithm = a;
          r.num_sensors = v;
          r.deadline = deadline;
          r.error = why;
          records.push_back(std::move(r));
        }
      };

      std::shared_ptr<const Topology> topo;
      std::uint64_t seed = 0;
      try {
        auto [t, s] = connected_topology(c, v, run);
        topo = std::make_shared<const Topology>(std::move(t));
        seed = s;
      } catch (const Error& e) {
        fail_all(e.what(), 0, 0);
        continue;
      }

      std::mt19937_64 deadline_rng(derive_seed(seed, {0}));
      const int deadline = std::uniform_int_distribution<int>(c.deadline.lo, c.deadline.hi)(deadline_rng);

      // Initial trees are shared by the algorithms that start from them; each
      // record still pays its own construction time.
      std::optional<AggregationTree> git, fast;
      double git_ms = 0.0, fast_ms = 0.0;
      std::string init_error;
      try {
        if (std::any_of(c.algorithms.begin(), c.algorithms.end(), uses_git)) {
          const auto t0 = Clock::now();
          git = git_tree(*topo);
          git_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        }
        if (std::any_of(c.algorithms.begin(), c.algorithms.end(), uses_fast)) {
          const auto t0 = Clock::now();
          fast = fast_init_tree(*topo, deadline);
          fast_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        }
      } catch (const Error& e) {
        fail_all(e.what(), seed, deadline);
        continue;
      }

      for (std::size_t k = 0; k < c.algorithms.size(); ++k) {
        const Algorithm a = c.algorithms[k];
        ExperimentRecord r;
        r.scenario = c.name;
        r.seed = seed;
        r.run = run;
        r.algorithm = a;
        r.num_sensors = v;
        r.deadline = deadline;
        r.topology = topo;
        const auto t0 = Clock::now();
        double init_ms = 0.0;
        try {
          switch (a) {
            case Algorithm::ZOptimal: {
              if (v > c.exact_max_nodes) continue;
              auto best = z_optimal(*topo, deadline, {c.exact_max_nodes, c.exact_max_trees});
              r.phi = best.phi;
              r.tree = std::move(best.tree);
              break;
            }
            case Algorithm::Baseline:
            case Algorithm::FastInitTree: {
              const AggregationTree& tree = a == Algorithm::Baseline ? *git : *fast;
              init_ms = a == Algorithm::Baseline ? git_ms : fast_ms;
              r.phi = optimal_schedule(tree, deadline, *topo).phi;
              r.tree = tree;
              break;
            }
            case Algorithm::Approx1:
            case Algorithm::Approx2:
            case Algorithm::Approx1H:
            case Algorithm::Approx2H: {
              const bool heuristic_start = a == Algorithm::Approx1H || a == Algorithm::Approx2H;
              const bool first_estimator = a == Algorithm::Approx1 || a == Algorithm::Approx1H;
              MarkovConfig mc;
              mc.alpha = c.alpha;
              mc.beta = c.beta;
              mc.iterations = c.iterations;
              mc.estimator = first_estimator ? Estimator::Approx1 : Estimator::Approx2;
              mc.seed = derive_seed(seed, {1, static_cast<std::uint64_t>(a)});
              init_ms = heuristic_start ? fast_ms : git_ms;
              auto result = aggtree::run(mc, *topo, deadline, heuristic_start ? *fast : *git);
              r.phi = result.best_phi;
              r.tree = std::move(result.best_tree);
              if (c.write_trajectories) r.trajectory = std::move(result.trajectory);
              break;
            }
          }
        } catch (const Error& e) {
          r.error = e.what();
        }
        if (c.record_timing) {
          r.ms = init_ms + std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        }
        records.push_back(std::move(r));
      }
    }
  }
  return records;
}

MeanInterval mean_ci95(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyGroup, "no values to summarize");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / n;
  if (sorted.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double x : sorted) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  return {mean, t * sd / std::sqrt(n)};
}

std::vector<SummaryRow> summarize(std::span<const ExperimentRecord> records, XAxis x_axis) {
  std::map<std::tuple<std::string, Algorithm, int>, std::vector<double>> groups;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    const int x = x_axis == XAxis::NodeCount ? r.num_sensors : r.deadline;
    groups[{r.scenario, r.algorithm, x}].push_back(r.phi);
  }
  if (groups.empty()) throw Error(ErrorKind::EmptyGroup, "no successful records to summarize");
  std::vector<SummaryRow> rows;
  for (const auto& [key, values] : groups) {
    const auto [mean, half] = mean_ci95(values);
    rows.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), mean, half, static_cast<int>(values.size())});
  }
  return rows;
}

void write_results_csv(std::ostream& os, std::span<const ExperimentRecord> records) {
  os << "scenario,seed,algorithm,V,D,phi,ms\n";
  for (const auto& r : records) {
    os << r.scenario << ',' << r.seed << ',' << algorithm_name(r.algorithm) << ',' << r.num_sensors << ','
       << r.deadline << ',';
    if (r.ok()) {
      os << r.phi;
    } else {
      os << "NA";
    }
    os << ',' << std::fixed << std::setprecision(3) << r.ms << std::defaultfloat << '\n';
  }
}

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << "# ci95 is the two-sided 95% Student-t half-width (0 for a single run)\n";
  os << "scenario,algorithm,x,mean_phi,ci95\n";
  for (const auto& r : rows) {
    os << r.scenario << ',' << algorithm_name(r.algorithm) << ',' << r.x << ',' << std::setprecision(10)
       << r.mean_phi << ',' << r.ci95 << std::setprecision(6) << '\n';
  }
}

std::vector<ExperimentRecord> run_and_write(const ScenarioConfig& c) {
  auto records = run_scenario(c);
  namespace fs = std::filesystem;
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "results.csv");
    write_results_csv(out, records);
  }
  try {
    const auto rows = summarize(records, c.x_axis);
    std::ofstream out(dir / "summary.csv");
    write_summary_csv(out, rows);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::EmptyGroup) throw;
  }
  if (c.write_trajectories) {
    fs::create_directories(dir / "trajectories");
    for (const auto& r : records) {
      if (r.trajectory.empty()) continue;
      std::ostringstream name;
      name << r.scenario << "_V" << r.num_sensors << "_run" << r.run << '_' << algorithm_name(r.algorithm) << ".csv";
      std::ofstream out(dir / "trajectories" / name.str());
      write_trajectory_csv(out, r.trajectory);
    }
  }
  return records;
}

}  // namespace aggtree
