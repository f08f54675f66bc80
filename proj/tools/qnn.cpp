#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "qnn/baselines.hpp"
#include "qnn/classify.hpp"
#include "qnn/csv.hpp"
#include "qnn/experiments.hpp"
#include "qnn/rng.hpp"
#include "qnn/sparse_vector.hpp"
#include "qnn/training_set.hpp"

namespace {

using namespace qnn;

constexpr std::uint64_t kTagDataset = 0x64617461;
constexpr std::uint64_t kTagClassify = 0x636c7366;
constexpr std::uint64_t kTagKmeans = 0x6b6d6e73;

/// Configuration problem detected after flag parsing; exits with status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim_copy(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  std::size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::string strip_quotes(std::string value) {
  if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
      value.back() == value.front()) {
    value = value.substr(1, value.size() - 2);
  }
  return value;
}

/// Expands `--config FILE` into extra `--key=value` arguments for the keys the
/// command line does not already set, so flags always win on conflict.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(std::string("--config=").size());
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw UsageError("cannot read config file: " + config_path);

  std::set<std::string> given;
  for (const std::string& arg : args) {
    if (arg.rfind("--", 0) == 0) given.insert(arg.substr(0, arg.find('=')));
  }

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string text = trim_copy(line);
    if (text.empty() || text.front() == '#') continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_number) +
                       " is not a key = value pair");
    }
    std::string key = trim_copy(text.substr(0, eq));
    std::string value = strip_quotes(trim_copy(text.substr(eq + 1)));
    if (key.empty()) {
      throw UsageError("config line " + std::to_string(line_number) + " has an empty key");
    }
    if (key == "config") throw UsageError("config files cannot include a config key");
    std::string flag = "--" + key;
    if (given.count(flag)) continue;
    args.push_back(flag + "=" + value);
  }
  return args;
}

/// Resolves the output path: an explicit --out value wins, otherwise the
/// default file name is placed under $QNN_OUT_DIR (or the working directory).
std::filesystem::path resolve_out(const std::string& out_flag, const std::string& default_name) {
  std::filesystem::path path;
  if (!out_flag.empty()) {
    path = out_flag;
  } else {
    const char* dir = std::getenv("QNN_OUT_DIR");
    path = std::filesystem::path(dir ? dir : ".") / default_name;
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  return path;
}

double list_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) sum += v;
  return values.empty() ? 0.0 : sum / static_cast<double>(values.size());
}

double list_stddev(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  double mean = list_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
}

/// Runs fn(0..n-1) on up to `jobs` threads; any worker exception is rethrown.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t width = std::min<std::size_t>(jobs, n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(width);
  std::vector<std::thread> pool;
  pool.reserve(width);
  for (std::size_t w = 0; w < width; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct DatasetFlags {
  std::string source = "halfmoon";
  std::uint64_t count = 200;
  double jitter = 0.05;
  std::size_t label_column = 0;
  bool no_standardize = false;
};

void add_dataset_flags(CLI::App* sub, DatasetFlags& f) {
  sub->add_option("--dataset", f.source, "Dataset: 'halfmoon' or a CSV file path")
      ->capture_default_str();
  sub->add_option("--count", f.count, "Generated point count for the halfmoon dataset")
      ->capture_default_str();
  sub->add_option("--jitter", f.jitter, "Coordinate jitter for the halfmoon dataset")
      ->capture_default_str();
  sub->add_option("--label-column", f.label_column, "Class column for CSV datasets (0-based)")
      ->capture_default_str();
  sub->add_flag("--no-standardize", f.no_standardize,
                "Keep CSV features on their original scale");
}

DenseDataset resolve_dataset(const DatasetFlags& f, std::uint64_t seed) {
  if (f.source == "halfmoon") {
    RngStream rng = RngStream::derive(seed, {kTagDataset});
    return gen_halfmoon(rng, f.count, f.jitter).data;
  }
  return load_csv_dataset(f.source, f.label_column, !f.no_standardize);
}

struct Split {
  std::vector<std::size_t> test;
  std::vector<std::size_t> train;
};

/// Deterministic held-out split: `tests` indices spread evenly over the
/// dataset, everything else used for training.
Split spread_split(std::size_t n, std::uint64_t tests) {
  if (tests < 1 || tests >= n)
    throw UsageError("--tests must leave at least one training point");
  Split split;
  std::vector<char> is_test(n, 0);
  for (std::uint64_t j = 0; j < tests; ++j) {
    std::size_t idx = static_cast<std::size_t>(j * n / tests);
    split.test.push_back(idx);
    is_test[idx] = 1;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_test[i]) split.train.push_back(i);
  }
  return split;
}

SparseVector row_to_sparse(const std::vector<double>& row) {
  return SparseVector::from_dense(std::span<const double>(row.data(), row.size()));
}

/// Training set over the raw (non-normalized) rows, used by the classical
/// scans; quantum paths go through make_training_set instead.
TrainingSet raw_training_set(const DenseDataset& data, std::size_t test_index,
                             const std::vector<std::size_t>& train, bool cluster_per_class) {
  std::vector<LabeledVector> vectors;
  vectors.reserve(train.size());
  for (std::size_t i : train) vectors.push_back({row_to_sparse(data.points[i]), data.labels[i]});
  std::vector<std::vector<std::uint64_t>> clusters;
  if (cluster_per_class) {
    std::map<int, std::vector<std::uint64_t>> by_label;
    for (std::size_t p = 0; p < train.size(); ++p)
      by_label[data.labels[train[p]]].push_back(p);
    for (auto& [label, members] : by_label) clusters.push_back(std::move(members));
  }
  return TrainingSet(row_to_sparse(data.points[test_index]), std::move(vectors),
                     std::move(clusters));
}

struct ClassifyArgs {
  DatasetFlags dataset;
  std::string method = "nn";
  std::string mode;
  double epsilon = 0.0;
  bool epsilon_given = false;
  double delta0 = 0.5;
  std::uint64_t k = 3;
  bool signed_ip = false;
  bool no_normalize = false;
  double mc_constant = 1e-3;
  std::uint64_t tests = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
};

double effective_epsilon(const std::string& mode, bool given, double value) {
  if (mode == "exact") {
    if (given) throw UsageError("--epsilon is not valid with --mode exact");
    return 0.0;
  }
  double eps = given ? value : (mode == "classical-mc" ? 0.25 : 0.1);
  if (!(eps > 0.0)) throw UsageError("--epsilon must be > 0 for stochastic modes");
  return eps;
}

int run_classify(const ClassifyArgs& args) {
  double eps = effective_epsilon(args.mode, args.epsilon_given, args.epsilon);
  if (args.mode == "classical-mc" && args.method != "nn" && args.method != "centroid")
    throw UsageError("--mode classical-mc supports --method nn or centroid");

  DenseDataset data = resolve_dataset(args.dataset, args.seed);
  std::uint64_t tests =
      args.tests == 0 ? std::min<std::uint64_t>(20, data.size() / 2) : args.tests;
  Split split = spread_split(data.size(), tests);
  const bool centroid = args.method == "centroid";

  struct Row {
    std::size_t index = 0;
    int assigned = 0;
    int truth = 0;
    std::uint64_t argmin = 0;
    double queries = 0.0;
    double bound = 0.0;
  };
  std::vector<Row> rows(split.test.size());
  std::atomic<bool> bound_violated{false};

  parallel_for(split.test.size(), args.jobs, [&](std::size_t j) {
    std::size_t idx = split.test[j];
    RngStream stream = RngStream::derive(args.seed, {kTagClassify, j});
    Row row;
    row.index = idx;
    row.truth = data.labels[idx];

    if (args.mode == "classical-mc") {
      TrainingSet training = raw_training_set(data, idx, split.train, centroid);
      if (args.method == "nn") {
        DirectNnResult result = direct_nn(training.test_vector(), training);
        row.assigned = training.label_at(result.argmin);
        row.argmin = split.train[result.argmin - 1];
        row.queries = static_cast<double>(result.component_accesses);
        row.bound = static_cast<double>(result.dense_accesses);
      } else {
        double best = std::numeric_limits<double>::infinity();
        std::uint64_t best_cluster = 0;
        std::uint64_t accesses = 0;
        for (std::uint64_t c = 0; c < training.cluster_count(); ++c) {
          std::vector<SparseVector> members = training.cluster_vectors(c);
          MCEstimate est = mc_centroid_distance(stream, training.test_vector(), members, eps,
                                                args.mc_constant);
          accesses += est.component_accesses;
          if (est.value < best) {
            best = est.value;
            best_cluster = c;
          }
        }
        row.assigned = training.cluster_label(best_cluster);
        row.argmin = best_cluster;
        row.queries = static_cast<double>(accesses);
        row.bound = static_cast<double>(data.dimension() * split.train.size());
      }
    } else {
      TrainingSet training = make_training_set(data, idx, split.train, centroid);
      ClassifyOptions options;
      options.mode = args.mode == "exact" ? SimMode::kExact : SimMode::kQuantum;
      if (eps > 0.0) options.epsilon = eps;
      options.delta0 = args.delta0;
      options.signed_inner_product = args.signed_ip;
      thread_local AeDistributionCache cache;
      options.cache = &cache;
      ClassificationOutcome out;
      if (args.method == "nn") {
        out = nn_inner_product(stream, training, options);
      } else if (args.method == "nn-euclid") {
        out = nn_euclidean(stream, training, options);
      } else if (args.method == "knn") {
        out = knn(stream, training, options, args.k);
      } else {
        out = nearest_centroid(stream, training, options, !args.no_normalize);
      }
      row.assigned = out.label;
      row.argmin = centroid ? out.argmin - 1 : split.train[out.argmin - 1];
      row.queries = static_cast<double>(out.ledger.total());
      row.bound = out.bound_check.theorem_bound;
      if (!out.bound_check.satisfied) bound_violated = true;
    }
    rows[j] = row;
  });

  csv::Table table({"index", "assigned", "true", "argmin", "queries", "bound"});
  std::size_t correct = 0;
  for (const Row& row : rows) {
    if (row.assigned == row.truth) ++correct;
    table.add_row({std::to_string(row.index), std::to_string(row.assigned),
                   std::to_string(row.truth), std::to_string(row.argmin),
                   csv::format_double(row.queries), csv::format_double(row.bound)});
  }
  std::filesystem::path path = resolve_out(args.out, "classify.csv");
  csv::write_file_atomic(path, table.to_string());
  double accuracy = static_cast<double>(correct) / static_cast<double>(rows.size());
  std::cout << "accuracy " << csv::format_double(accuracy) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  if (bound_violated) {
    std::cerr << "error: a query ledger exceeded its closed-form bound\n";
    return 4;
  }
  return 0;
}

struct KmeansArgs {
  DatasetFlags dataset;
  std::uint64_t k = 2;
  std::string mode;
  double epsilon = 0.0;
  bool epsilon_given = false;
  double delta0 = 0.5;
  std::vector<std::uint64_t> assignment;
  std::uint64_t seed = 0;
  std::string out;
};

int run_kmeans(const KmeansArgs& args) {
  double eps = effective_epsilon(args.mode, args.epsilon_given, args.epsilon);
  DenseDataset data = resolve_dataset(args.dataset, args.seed);

  std::vector<SparseVector> vectors;
  vectors.reserve(data.size());
  for (const std::vector<double>& row : data.points) vectors.push_back(to_unit_sparse(row));

  std::vector<std::uint64_t> assignment = args.assignment;
  if (assignment.empty()) {
    assignment.resize(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) assignment[i] = i % args.k + 1;
  } else if (assignment.size() != vectors.size()) {
    throw UsageError("--assignment must list one cluster id per dataset row");
  }

  ClassifyOptions options;
  options.mode = args.mode == "exact" ? SimMode::kExact : SimMode::kQuantum;
  if (eps > 0.0) options.epsilon = eps;
  options.delta0 = args.delta0;
  AeDistributionCache cache;
  options.cache = &cache;

  RngStream stream = RngStream::derive(args.seed, {kTagKmeans});
  KmeansResult result = kmeans_iteration(stream, vectors, args.k, assignment, options);

  csv::Table table({"index", "cluster"});
  for (std::size_t i = 0; i < result.assignment.size(); ++i)
    table.add_row({std::to_string(i), std::to_string(result.assignment[i] - 1)});
  std::filesystem::path path = resolve_out(args.out, "kmeans.csv");
  csv::write_file_atomic(path, table.to_string());

  std::cout << "queries " << csv::format_double(static_cast<double>(result.ledger.total()))
            << "\n";
  std::cout << "bound " << csv::format_double(result.bound_check.theorem_bound) << "\n";
  std::cout << "reseeded " << result.reseeded.size() << "\n";
  std::cout << "aborted " << (result.aborted ? 1 : 0) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  if (!result.bound_check.satisfied) {
    std::cerr << "error: the query ledger exceeded its closed-form bound\n";
    return 4;
  }
  return 0;
}

struct BoundsArgs {
  std::vector<std::uint64_t> m;
  std::vector<std::uint64_t> m_prime;
  std::vector<double> epsilon;
  std::uint64_t k = 1;
  std::uint64_t d = 1;
  double r = 1.0;
  double delta0 = 0.5;
  std::string out;
};

int run_bounds(const BoundsArgs& args) {
  std::vector<std::uint64_t> ms = args.m.empty() ? std::vector<std::uint64_t>{1} : args.m;
  std::vector<double> epss = args.epsilon.empty() ? std::vector<double>{1.0} : args.epsilon;
  std::vector<std::uint64_t> m_primes = args.m_prime.empty() ? ms : args.m_prime;
  if (m_primes.size() != ms.size())
    throw UsageError("--m-prime must have the same length as --m");

  csv::Table table({"m", "m_prime", "epsilon", "theorem1", "theorem2", "corollary2"});
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (double eps : epss) {
      BoundParams params;
      params.sparsity = args.d;
      params.r_max = args.r;
      params.epsilon = eps;
      params.delta0 = args.delta0;

      params.training_count = ms[i];
      double theorem1 = theorem_bound(BoundKind::kTheorem1, params);
      params.cluster_count = args.k;
      double corollary2 = theorem_bound(BoundKind::kCorollary2, params);
      params.training_count = m_primes[i];
      params.cluster_count = 1;
      double theorem2 = theorem_bound(BoundKind::kTheorem2, params);

      table.add_row({std::to_string(ms[i]), std::to_string(m_primes[i]),
                     csv::format_double(eps), csv::format_double(theorem1),
                     csv::format_double(theorem2), csv::format_double(corollary2)});
    }
  }
  std::filesystem::path path = resolve_out(args.out, "bounds.csv");
  csv::write_file_atomic(path, table.to_string());
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct GenArgs {
  std::uint64_t count = 2000;
  double jitter = 0.05;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& args) {
  RngStream rng = RngStream::derive(args.seed, {kTagDataset});
  HalfmoonSummary summary = gen_halfmoon(rng, args.count, args.jitter);

  csv::Table table({"label", "f0", "f1"});
  for (std::size_t i = 0; i < summary.data.size(); ++i) {
    table.add_row({std::to_string(summary.data.labels[i]),
                   csv::format_double(summary.data.points[i][0]),
                   csv::format_double(summary.data.points[i][1])});
  }
  std::filesystem::path path = resolve_out(args.out, "dataset.csv");
  csv::write_file_atomic(path, table.to_string());

  std::cout << "points " << summary.data.size() << "\n";
  std::cout << "opposite_fraction " << csv::format_double(summary.opposite_fraction) << "\n";
  std::cout << "intra_nn_mean " << csv::format_double(summary.intra_nn_mean) << "\n";
  std::cout << "inter_centroid_gap " << csv::format_double(summary.inter_centroid_gap) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct AccuracySweepArgs {
  DatasetFlags dataset;
  std::string method = "nn";
  std::vector<double> grid;
  std::uint64_t trials = 0;
  double train_fraction = 0.5;
  double epsilon = 1e-3;
  bool squared = false;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
};

SweepMethod sweep_method_from(const std::string& token) {
  return token == "centroid" ? SweepMethod::kNearestCentroid : SweepMethod::kNearestNeighbor;
}

/// Per-cell accuracy sweep sharing the library's (seed, cell, trial) stream
/// derivation, so --jobs never changes the output.
int run_accuracy_sweep_cmd(const AccuracySweepArgs& args, bool grid_is_fraction,
                           const std::string& param_name, const std::string& default_name) {
  if (args.trials == 0) throw UsageError("--trials must be >= 1");
  std::vector<double> grid = args.grid;
  if (grid.empty()) {
    grid = grid_is_fraction ? std::vector<double>{0.2, 0.4, 0.6, 0.8} : default_noise_grid();
  }
  DenseDataset data = resolve_dataset(args.dataset, args.seed);
  SweepMethod method = sweep_method_from(args.method);

  struct Cell {
    double mean = 0.0;
    double stddev = 0.0;
    double queries = 0.0;
  };
  std::vector<Cell> cells(grid.size());
  parallel_for(grid.size(), args.jobs, [&](std::size_t c) {
    NoiseModel noise{grid_is_fraction ? args.epsilon : grid[c], args.squared};
    double fraction = grid_is_fraction ? grid[c] : args.train_fraction;
    std::vector<double> accuracies;
    std::vector<double> queries;
    accuracies.reserve(args.trials);
    queries.reserve(args.trials);
    for (std::uint64_t t = 0; t < args.trials; ++t) {
      RngStream stream = RngStream::derive(args.seed, {c, t});
      SplitClassification run = classify_noisy_split(stream, data, method, fraction, noise);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < run.assigned.size(); ++i) {
        if (run.assigned[i] == run.truth[i]) ++correct;
      }
      accuracies.push_back(static_cast<double>(correct) /
                           static_cast<double>(run.assigned.size()));
      queries.push_back(static_cast<double>(run.distance_evaluations));
    }
    cells[c] = {list_mean(accuracies), list_stddev(accuracies), list_mean(queries)};
  });

  csv::Table table({param_name, "accuracy_mean", "accuracy_std", "trials", "queries_mean"});
  for (std::size_t c = 0; c < grid.size(); ++c) {
    table.add_row({csv::format_double(grid[c]), csv::format_double(cells[c].mean),
                   csv::format_double(cells[c].stddev), std::to_string(args.trials),
                   csv::format_double(cells[c].queries)});
  }
  std::filesystem::path path = resolve_out(args.out, default_name);
  csv::write_file_atomic(path, table.to_string());
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct GapArgs {
  std::vector<std::uint64_t> dimensions;
  std::uint64_t candidates = 100;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gap(const GapArgs& args) {
  ExperimentReport report =
      distance_gap_study(args.seed, args.dimensions, args.candidates, args.trials);
  csv::Table table({"dimension", "gap_mean", "gap_std", "trials", "queries_mean"});
  for (const ExperimentCell& cell : report.cells) {
    table.add_row({csv::format_double(cell.param), csv::format_double(cell.value_mean),
                   csv::format_double(cell.value_std), std::to_string(cell.trials),
                   csv::format_double(cell.queries_mean)});
  }
  table.add_row({"fit", csv::format_double(report.fit_slope),
                 csv::format_double(report.fit_prefactor), "", ""});
  std::filesystem::path path = resolve_out(args.out, "sweep_gap.csv");
  csv::write_file_atomic(path, table.to_string());
  std::cout << "slope " << csv::format_double(report.fit_slope) << "\n";
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

struct CostRegionArgs {
  std::vector<double> grid;
  std::string out;
};

int run_cost_region(const CostRegionArgs& args) {
  std::vector<double> grid = args.grid.empty() ? default_cost_grid() : args.grid;
  ExperimentReport ip = cost_region(grid, CostMethod::kInnerProduct);
  ExperimentReport eu = cost_region(grid, CostMethod::kEuclidean);

  csv::Table table({"n", "crossover_ip", "crossover_eu"});
  for (std::size_t c = 0; c < grid.size(); ++c) {
    table.add_row({csv::format_double(grid[c]), csv::format_double(ip.cells[c].value_mean),
                   csv::format_double(eu.cells[c].value_mean)});
  }
  table.add_row({"fit_ip", csv::format_double(ip.fit_slope),
                 csv::format_double(ip.fit_prefactor)});
  table.add_row({"fit_eu", csv::format_double(eu.fit_slope),
                 csv::format_double(eu.fit_prefactor)});
  std::filesystem::path path = resolve_out(args.out, "sweep_cost_region.csv");
  csv::write_file_atomic(path, table.to_string());
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum nearest-neighbor method simulator and query-bound calculator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");
  std::string config_sink;

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a labeled dataset CSV");
  gen_cmd->add_option("--count", gen_args.count, "Point count (even)")->capture_default_str();
  gen_cmd->add_option("--jitter", gen_args.jitter, "Coordinate jitter")->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "Base RNG seed")->required();
  gen_cmd->add_option("--out", gen_args.out, "Output CSV path");
  gen_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  ClassifyArgs classify_args;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "Classify held-out points and write per-point rows");
  add_dataset_flags(classify_cmd, classify_args.dataset);
  classify_cmd->add_option("--method", classify_args.method, "nn | nn-euclid | knn | centroid")
      ->check(CLI::IsMember({"nn", "nn-euclid", "knn", "centroid"}))
      ->capture_default_str();
  classify_cmd->add_option("--mode", classify_args.mode, "exact | quantum-sim | classical-mc")
      ->check(CLI::IsMember({"exact", "quantum-sim", "classical-mc"}))
      ->required();
  CLI::Option* classify_eps =
      classify_cmd->add_option("--epsilon", classify_args.epsilon, "Estimation accuracy target");
  classify_cmd->add_option("--delta0", classify_args.delta0, "Failure probability budget")
      ->capture_default_str();
  classify_cmd->add_option("--k", classify_args.k, "Neighbor count for --method knn")
      ->capture_default_str();
  classify_cmd->add_flag("--signed", classify_args.signed_ip,
                         "Signed inner-product recovery for unit datasets");
  classify_cmd->add_flag("--no-normalize", classify_args.no_normalize,
                         "Rank centroids by raw distance instead of the spread-normalized ratio");
  classify_cmd
      ->add_option("--mc-constant", classify_args.mc_constant,
                   "Sample-count constant for classical-mc centroid estimates")
      ->capture_default_str();
  classify_cmd
      ->add_option("--tests", classify_args.tests,
                   "Held-out point count (0 = min(20, half the dataset))")
      ->capture_default_str();
  classify_cmd->add_option("--seed", classify_args.seed, "Base RNG seed")->required();
  classify_cmd->add_option("--jobs", classify_args.jobs, "Worker threads across test points")
      ->capture_default_str();
  classify_cmd->add_option("--out", classify_args.out, "Output CSV path");
  classify_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  KmeansArgs kmeans_args;
  CLI::App* kmeans_cmd =
      app.add_subcommand("kmeans", "Run one k-means update step and write the new assignment");
  add_dataset_flags(kmeans_cmd, kmeans_args.dataset);
  kmeans_cmd->add_option("--k", kmeans_args.k, "Cluster count")->required();
  kmeans_cmd->add_option("--mode", kmeans_args.mode, "exact | quantum-sim")
      ->check(CLI::IsMember({"exact", "quantum-sim"}))
      ->required();
  CLI::Option* kmeans_eps =
      kmeans_cmd->add_option("--epsilon", kmeans_args.epsilon, "Estimation accuracy target");
  kmeans_cmd->add_option("--delta0", kmeans_args.delta0, "Failure probability budget")
      ->capture_default_str();
  kmeans_cmd
      ->add_option("--assignment", kmeans_args.assignment,
                   "Starting cluster ids (1-based, one per row; default round-robin)")
      ->delimiter(',');
  kmeans_cmd->add_option("--seed", kmeans_args.seed, "Base RNG seed")->required();
  kmeans_cmd->add_option("--out", kmeans_args.out, "Output CSV path");
  kmeans_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  BoundsArgs bounds_args;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "Tabulate the closed-form expected-query bounds over a parameter grid");
  bounds_cmd->add_option("--m", bounds_args.m, "Training-set sizes")->delimiter(',');
  bounds_cmd
      ->add_option("--m-prime", bounds_args.m_prime,
                   "Cluster counts for the clustered pipeline (defaults to --m)")
      ->delimiter(',');
  bounds_cmd->add_option("--epsilon", bounds_args.epsilon, "Accuracy grid")->delimiter(',');
  bounds_cmd->add_option("--k", bounds_args.k, "Cluster count for the k-means bound")
      ->capture_default_str();
  bounds_cmd->add_option("--d", bounds_args.d, "Sparsity")->capture_default_str();
  bounds_cmd->add_option("--r", bounds_args.r, "Component magnitude bound")
      ->capture_default_str();
  bounds_cmd->add_option("--delta0", bounds_args.delta0, "Failure probability budget")
      ->capture_default_str();
  bounds_cmd->add_option("--out", bounds_args.out, "Output CSV path");
  bounds_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid experiments, one CSV per run");
  sweep_cmd->require_subcommand(1);

  AccuracySweepArgs noise_args;
  CLI::App* noise_cmd = sweep_cmd->add_subcommand("noise", "Accuracy vs distance-noise level");
  add_dataset_flags(noise_cmd, noise_args.dataset);
  noise_cmd->add_option("--method", noise_args.method, "nn | centroid")
      ->check(CLI::IsMember({"nn", "centroid"}))
      ->capture_default_str();
  noise_cmd->add_option("--grid", noise_args.grid, "Noise levels (default: 11 log-spaced)")
      ->delimiter(',');
  noise_cmd->add_option("--trials", noise_args.trials, "Trials per grid cell")->required();
  noise_cmd->add_option("--train-fraction", noise_args.train_fraction, "Training fraction")
      ->capture_default_str();
  noise_cmd->add_flag("--squared", noise_args.squared, "Apply noise to squared distances");
  noise_cmd->add_option("--seed", noise_args.seed, "Base RNG seed")->required();
  noise_cmd->add_option("--jobs", noise_args.jobs, "Worker threads across grid cells")
      ->capture_default_str();
  noise_cmd->add_option("--out", noise_args.out, "Output CSV path");
  noise_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  AccuracySweepArgs trainsize_args;
  CLI::App* trainsize_cmd =
      sweep_cmd->add_subcommand("trainsize", "Accuracy vs training fraction");
  add_dataset_flags(trainsize_cmd, trainsize_args.dataset);
  trainsize_cmd->add_option("--method", trainsize_args.method, "nn | centroid")
      ->check(CLI::IsMember({"nn", "centroid"}))
      ->capture_default_str();
  trainsize_cmd
      ->add_option("--fractions", trainsize_args.grid,
                   "Training fractions (default: 0.2,0.4,0.6,0.8)")
      ->delimiter(',');
  trainsize_cmd->add_option("--trials", trainsize_args.trials, "Trials per grid cell")
      ->required();
  trainsize_cmd->add_option("--epsilon", trainsize_args.epsilon, "Fixed noise level")
      ->capture_default_str();
  trainsize_cmd->add_flag("--squared", trainsize_args.squared,
                          "Apply noise to squared distances");
  trainsize_cmd->add_option("--seed", trainsize_args.seed, "Base RNG seed")->required();
  trainsize_cmd->add_option("--jobs", trainsize_args.jobs, "Worker threads across grid cells")
      ->capture_default_str();
  trainsize_cmd->add_option("--out", trainsize_args.out, "Output CSV path");
  trainsize_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  GapArgs gap_args;
  CLI::App* gap_cmd =
      sweep_cmd->add_subcommand("gap", "Nearest-distance gap vs dimension with a power-law fit");
  gap_cmd->add_option("--n", gap_args.dimensions, "Dimension grid")->delimiter(',')->required();
  gap_cmd->add_option("--m", gap_args.candidates, "Candidate count per trial")
      ->capture_default_str();
  gap_cmd->add_option("--trials", gap_args.trials, "Trials per dimension")->required();
  gap_cmd->add_option("--seed", gap_args.seed, "Base RNG seed")->required();
  gap_cmd->add_option("--out", gap_args.out, "Output CSV path");
  gap_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  CostRegionArgs cost_args;
  CLI::App* cost_cmd = sweep_cmd->add_subcommand(
      "cost-region", "Classical/quantum crossover training-set size per dataset size");
  cost_cmd->add_option("--grid", cost_args.grid, "Dataset sizes (default: 9 half-decade)")
      ->delimiter(',');
  cost_cmd->add_option("--out", cost_args.out, "Output CSV path");
  cost_cmd->add_option("--config", config_sink, "Key = value file with defaults; command-line flags win");

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return run_gen(gen_args);
    if (classify_cmd->parsed()) {
      classify_args.epsilon_given = classify_eps->count() > 0;
      return run_classify(classify_args);
    }
    if (kmeans_cmd->parsed()) {
      kmeans_args.epsilon_given = kmeans_eps->count() > 0;
      return run_kmeans(kmeans_args);
    }
    if (bounds_cmd->parsed()) return run_bounds(bounds_args);
    if (sweep_cmd->parsed()) {
      if (noise_cmd->parsed())
        return run_accuracy_sweep_cmd(noise_args, false, "epsilon", "sweep_noise.csv");
      if (trainsize_cmd->parsed())
        return run_accuracy_sweep_cmd(trainsize_args, true, "fraction", "sweep_trainsize.csv");
      if (gap_cmd->parsed()) return run_gap(gap_args);
      if (cost_cmd->parsed()) return run_cost_region(cost_args);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
