#include "qnn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qnn/amplitude_estimation.hpp"
#include "qnn/csv.hpp"

namespace qnn {
namespace {

constexpr double kEulerGamma = 0.5772156649;

double dense_distance_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

double dense_distance(const std::vector<double>& a, const std::vector<double>& b) {
  return std::sqrt(dense_distance_sq(a, b));
}

void require_consistent(const DenseDataset& data) {
  if (data.points.size() != data.labels.size()) {
    throw std::invalid_argument("dataset points and labels differ in length");
  }
  if (data.points.empty()) throw std::invalid_argument("dataset is empty");
  std::size_t width = data.points.front().size();
  if (width == 0) throw std::invalid_argument("dataset has no features");
  for (const auto& p : data.points) {
    if (p.size() != width) throw std::invalid_argument("dataset rows differ in width");
  }
}

struct TrialStats {
  double mean = 0.0;
  double stddev = 0.0;
};

TrialStats summarize(const std::vector<double>& values) {
  TrialStats out;
  double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

struct LogLogFit {
  bool ok = false;
  double slope = 0.0;
  double prefactor = 0.0;
};

LogLogFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0) || !std::isfinite(ys[i])) continue;
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  LogLogFit fit;
  if (lx.size() < 2) return fit;
  double n = static_cast<double>(lx.size());
  double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return fit;
  fit.ok = true;
  fit.slope = sxy / sxx;
  fit.prefactor = std::exp(my - fit.slope * mx);
  return fit;
}

ExperimentReport run_accuracy_sweep(std::uint64_t seed, const DenseDataset& data,
                                    SweepMethod method, const std::vector<double>& grid,
                                    std::uint64_t trials, bool grid_is_fraction,
                                    double fixed_epsilon, double fixed_fraction,
                                    bool squared_noise) {
  require_consistent(data);
  if (grid.empty()) throw std::invalid_argument("parameter grid is empty");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");

  ExperimentReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    NoiseModel noise{grid_is_fraction ? fixed_epsilon : grid[c], squared_noise};
    double fraction = grid_is_fraction ? grid[c] : fixed_fraction;
    std::vector<double> accuracies;
    std::vector<double> queries;
    accuracies.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
      RngStream stream = RngStream::derive(seed, {c, t});
      SplitClassification run = classify_noisy_split(stream, data, method, fraction, noise);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < run.assigned.size(); ++i) {
        if (run.assigned[i] == run.truth[i]) ++correct;
      }
      accuracies.push_back(static_cast<double>(correct) /
                           static_cast<double>(run.assigned.size()));
      queries.push_back(static_cast<double>(run.distance_evaluations));
    }
    TrialStats acc = summarize(accuracies);
    TrialStats q = summarize(queries);
    report.cells.push_back({grid[c], acc.mean, acc.stddev, trials, q.mean});
  }
  return report;
}

double continuous_copies(double candidates, double success_floor) {
  double delta = 0.5 / (81.0 * candidates * (std::log(candidates) + kEulerGamma));
  double denom = 2.0 * (success_floor - 0.5) * (success_floor - 0.5);
  return std::ceil(std::log(1.0 / delta) / denom);
}

double cost_bound_at(double training_count, double n, CostMethod method) {
  double eps = 1.0 / std::sqrt(n);
  if (method == CostMethod::kInnerProduct) {
    double reg = register_size_bound(eps, 1, 1.0, 1.0, AeMethod::kInnerProduct);
    return 1080.0 * std::sqrt(training_count) * reg *
           continuous_copies(training_count, kAeSuccessFloor);
  }
  double reg = register_size_bound(eps, 1, 1.0, 1.0, AeMethod::kEuclidean);
  return 900.0 * std::sqrt(training_count) * reg *
         continuous_copies(training_count, kAeChainedSuccessFloor);
}

double crossover_size(double n, CostMethod method) {
  auto excess = [&](double log10m) {
    double m = std::pow(10.0, log10m);
    return cost_bound_at(m, n, method) - n * m;
  };
  double lo = 0.0;
  double hi = 40.0;
  if (excess(lo) <= 0.0) return 1.0;
  if (excess(hi) > 0.0) return std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::pow(10.0, 0.5 * (lo + hi));
}

bool cell_is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

bool parses_numeric(const std::string& cell, double& value) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  value = std::strtod(begin, &end);
  return end != begin && *end == '\0' && std::isfinite(value);
}

double parse_numeric(const std::string& cell, std::size_t row) {
  double value = 0.0;
  if (!parses_numeric(cell, value)) {
    throw std::runtime_error("row " + std::to_string(row) + ": malformed value '" + cell + "'");
  }
  return value;
}

bool looks_like_header(const std::vector<std::string>& row) {
  for (const auto& cell : row) {
    double ignored = 0.0;
    if (!cell_is_missing(cell) && !parses_numeric(cell, ignored)) return true;
  }
  return false;
}

}  // namespace

double NoiseModel::apply(RngStream& rng, double value) const {
  if (epsilon < 0.0) throw std::invalid_argument("noise level must be >= 0");
  return std::max(0.0, value + rng.normal(0.0, epsilon));
}

HalfmoonSummary gen_halfmoon(RngStream& rng, std::uint64_t count, double jitter) {
  if (count < 2 || count % 2 != 0) throw std::invalid_argument("count must be even and >= 2");
  if (jitter < 0.0) throw std::invalid_argument("jitter must be >= 0");

  HalfmoonSummary out;
  std::uint64_t half = count / 2;
  out.data.points.reserve(count);
  out.data.labels.reserve(count);
  for (std::uint64_t i = 0; i < half; ++i) {
    double t = rng.uniform(0.0, std::numbers::pi);
    double x = std::cos(t) + rng.normal(0.0, jitter);
    double y = std::sin(t) + rng.normal(0.0, jitter);
    out.data.points.push_back({x, y});
    out.data.labels.push_back(0);
  }
  for (std::uint64_t i = 0; i < half; ++i) {
    double t = rng.uniform(0.0, std::numbers::pi);
    double x = 1.0 - std::cos(t) + rng.normal(0.0, jitter);
    double y = 0.52 - std::sin(t) + rng.normal(0.0, jitter);
    out.data.points.push_back({x, y});
    out.data.labels.push_back(1);
  }
  standardize_features(out.data);

  std::vector<double> centroid[2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    int label = out.data.labels[i];
    centroid[label][0] += out.data.points[i][0];
    centroid[label][1] += out.data.points[i][1];
  }
  for (auto& c : centroid) {
    c[0] /= static_cast<double>(half);
    c[1] /= static_cast<double>(half);
  }
  out.inter_centroid_gap = dense_distance(centroid[0], centroid[1]);

  std::size_t opposite = 0;
  double nn_total = 0.0;
  std::size_t nn_count = 0;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    int label = out.data.labels[i];
    double own = dense_distance(out.data.points[i], centroid[label]);
    double other = dense_distance(out.data.points[i], centroid[1 - label]);
    if (other < own) ++opposite;

    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.data.size(); ++j) {
      if (j == i || out.data.labels[j] != label) continue;
      best = std::min(best, dense_distance(out.data.points[i], out.data.points[j]));
    }
    if (std::isfinite(best)) {
      nn_total += best;
      ++nn_count;
    }
  }
  out.opposite_fraction = static_cast<double>(opposite) / static_cast<double>(count);
  out.intra_nn_mean = nn_count > 0 ? nn_total / static_cast<double>(nn_count) : 0.0;
  return out;
}

std::vector<std::vector<std::complex<double>>> gen_hypersphere_uniform(RngStream& rng,
                                                                       std::uint64_t dimension,
                                                                       std::uint64_t count) {
  if (dimension == 0) throw std::invalid_argument("dimension must be >= 1");
  std::vector<std::vector<std::complex<double>>> out;
  out.reserve(count);
  for (std::uint64_t v = 0; v < count; ++v) {
    std::vector<std::complex<double>> vec(dimension);
    double norm_sq = 0.0;
    for (auto& z : vec) {
      double re = rng.normal(0.0, 1.0);
      double im = rng.normal(0.0, 1.0);
      z = {re, im};
      norm_sq += re * re + im * im;
    }
    double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& z : vec) z *= inv;
    out.push_back(std::move(vec));
  }
  return out;
}

SparseVector to_unit_sparse(const std::vector<double>& point) {
  SparseVector raw = SparseVector::from_dense(std::span<const double>(point));
  if (raw.norm() < 1e-12) throw std::invalid_argument("zero vector cannot be normalized");
  return raw.normalized();
}

TrainingSet make_training_set(const DenseDataset& data, std::size_t test_index,
                              const std::vector<std::size_t>& train_indices,
                              bool cluster_per_class) {
  require_consistent(data);
  if (test_index >= data.size()) throw std::invalid_argument("test index out of range");
  if (train_indices.empty()) throw std::invalid_argument("no training indices");

  std::vector<LabeledVector> vectors;
  vectors.reserve(train_indices.size());
  for (std::size_t idx : train_indices) {
    if (idx >= data.size()) throw std::invalid_argument("training index out of range");
    vectors.push_back({to_unit_sparse(data.points[idx]), data.labels[idx]});
  }
  SparseVector test = to_unit_sparse(data.points[test_index]);
  if (!cluster_per_class) return TrainingSet(std::move(test), std::move(vectors));

  std::map<int, std::vector<std::uint64_t>> by_label;
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    by_label[vectors[j].label].push_back(static_cast<std::uint64_t>(j));
  }
  std::vector<std::vector<std::uint64_t>> clusters;
  clusters.reserve(by_label.size());
  for (auto& [label, members] : by_label) clusters.push_back(std::move(members));
  return TrainingSet(std::move(test), std::move(vectors), std::move(clusters));
}

SplitClassification classify_noisy_split(RngStream& rng, const DenseDataset& data,
                                         SweepMethod method, double train_fraction,
                                         const NoiseModel& noise) {
  require_consistent(data);
  std::size_t total = data.size();
  if (total < 2) throw std::invalid_argument("need at least two points to split");
  auto train_count = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(total)));
  if (train_count < 1 || train_count >= total) {
    throw std::invalid_argument("train fraction leaves no train or no test points");
  }

  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng.engine());

  std::vector<std::vector<double>> candidates;
  std::vector<int> candidate_labels;
  if (method == SweepMethod::kNearestNeighbor) {
    candidates.reserve(train_count);
    for (std::size_t c = 0; c < train_count; ++c) {
      candidates.push_back(data.points[perm[c]]);
      candidate_labels.push_back(data.labels[perm[c]]);
    }
  } else {
    std::map<int, std::pair<std::vector<double>, std::size_t>> sums;
    for (std::size_t c = 0; c < train_count; ++c) {
      auto& [sum, members] = sums[data.labels[perm[c]]];
      if (sum.empty()) sum.assign(data.dimension(), 0.0);
      const auto& p = data.points[perm[c]];
      for (std::size_t f = 0; f < p.size(); ++f) sum[f] += p[f];
      ++members;
    }
    for (auto& [label, entry] : sums) {
      auto& [sum, members] = entry;
      for (double& v : sum) v /= static_cast<double>(members);
      candidates.push_back(std::move(sum));
      candidate_labels.push_back(label);
    }
  }

  SplitClassification out;
  out.test_indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(train_count), perm.end());
  out.assigned.reserve(out.test_indices.size());
  out.truth.reserve(out.test_indices.size());
  for (std::size_t idx : out.test_indices) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double d = noise.squared_distance ? dense_distance_sq(data.points[idx], candidates[c])
                                        : dense_distance(data.points[idx], candidates[c]);
      double observed = noise.apply(rng, d);
      ++out.distance_evaluations;
      if (observed < best) {
        best = observed;
        best_c = c;
      }
    }
    out.assigned.push_back(candidate_labels[best_c]);
    out.truth.push_back(data.labels[idx]);
  }
  return out;
}

std::vector<double> default_noise_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 5; ++e) grid.push_back(std::pow(10.0, e));
  return grid;
}

ExperimentReport sweep_noise(std::uint64_t seed, const DenseDataset& data, SweepMethod method,
                             const std::vector<double>& epsilon_grid, std::uint64_t trials,
                             double train_fraction, bool squared_noise) {
  for (double eps : epsilon_grid) {
    if (eps < 0.0) throw std::invalid_argument("noise level must be >= 0");
  }
  return run_accuracy_sweep(seed, data, method, epsilon_grid, trials, false, 0.0, train_fraction,
                            squared_noise);
}

ExperimentReport sweep_trainsize(std::uint64_t seed, const DenseDataset& data, SweepMethod method,
                                 const std::vector<double>& fractions, std::uint64_t trials,
                                 double epsilon, bool squared_noise) {
  for (double f : fractions) {
    if (f <= 0.0 || f >= 1.0) throw std::invalid_argument("train fraction must be in (0, 1)");
  }
  if (epsilon < 0.0) throw std::invalid_argument("noise level must be >= 0");
  return run_accuracy_sweep(seed, data, method, fractions, trials, true, epsilon, 0.0,
                            squared_noise);
}

ExperimentReport distance_gap_study(std::uint64_t seed,
                                    const std::vector<std::uint64_t>& dimension_grid,
                                    std::uint64_t candidate_count, std::uint64_t trials) {
  if (dimension_grid.size() < 2) throw std::invalid_argument("need at least two dimensions");
  if (candidate_count < 2) throw std::invalid_argument("need at least two candidates");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");

  ExperimentReport report;
  report.seed = seed;
  report.trials = trials;
  for (std::size_t c = 0; c < dimension_grid.size(); ++c) {
    std::uint64_t dim = dimension_grid[c];
    std::vector<double> gaps;
    gaps.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
      RngStream stream = RngStream::derive(seed, {c, t});
      auto vectors = gen_hypersphere_uniform(stream, dim, candidate_count);
      double smallest = std::numeric_limits<double>::infinity();
      double second = std::numeric_limits<double>::infinity();
      for (const auto& w : vectors) {
        double sum = std::norm(std::complex<double>(1.0, 0.0) - w[0]);
        for (std::size_t i = 1; i < w.size(); ++i) sum += std::norm(w[i]);
        double d = std::sqrt(sum);
        if (d < smallest) {
          second = smallest;
          smallest = d;
        } else if (d < second) {
          second = d;
        }
      }
      gaps.push_back(second - smallest);
    }
    TrialStats stats = summarize(gaps);
    report.cells.push_back({static_cast<double>(dim), stats.mean, stats.stddev, trials,
                            static_cast<double>(candidate_count)});
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& cell : report.cells) {
    xs.push_back(cell.param);
    ys.push_back(cell.value_mean);
  }
  LogLogFit fit = fit_power_law(xs, ys);
  report.has_fit = fit.ok;
  report.fit_slope = fit.slope;
  report.fit_prefactor = fit.prefactor;
  return report;
}

std::vector<double> default_cost_grid() {
  std::vector<double> grid;
  for (int e = 4; e <= 12; ++e) grid.push_back(std::pow(10.0, 0.5 * e));
  return grid;
}

ExperimentReport cost_region(const std::vector<double>& dataset_sizes, CostMethod method) {
  if (dataset_sizes.empty()) throw std::invalid_argument("size grid is empty");
  for (double n : dataset_sizes) {
    if (!(n >= 1.0)) throw std::invalid_argument("dataset sizes must be >= 1");
  }

  ExperimentReport report;
  report.trials = 1;
  for (double n : dataset_sizes) {
    double m_star = crossover_size(n, method);
    report.cells.push_back({n, m_star, 0.0, 1, n * m_star});
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& cell : report.cells) {
    xs.push_back(cell.param);
    ys.push_back(cell.value_mean);
  }
  LogLogFit fit = fit_power_law(xs, ys);
  report.has_fit = fit.ok;
  report.fit_slope = fit.slope;
  report.fit_prefactor = fit.prefactor;
  return report;
}

DenseDataset load_csv_dataset(const std::filesystem::path& path, std::size_t label_column,
                              bool standardize, bool drop_boolean_features) {
  auto rows = csv::read_rows(path);
  if (rows.empty()) throw std::runtime_error("no rows in " + path.string());
  std::size_t width = rows.front().size();
  if (width < 2) throw std::runtime_error("row 1: need a label column and features");
  if (label_column >= width) throw std::runtime_error("label column out of range");
  std::size_t first_data = looks_like_header(rows.front()) ? 1 : 0;

  DenseDataset data;
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::size_t row_number = r + 1;
    if (row.size() != width) {
      throw std::runtime_error("row " + std::to_string(row_number) + ": expected " +
                               std::to_string(width) + " cells, got " +
                               std::to_string(row.size()));
    }
    if (std::any_of(row.begin(), row.end(), cell_is_missing)) continue;

    std::vector<double> features;
    features.reserve(width - 1);
    int label = 0;
    for (std::size_t c = 0; c < width; ++c) {
      double value = parse_numeric(row[c], row_number);
      if (c == label_column) {
        double rounded = std::nearbyint(value);
        if (std::abs(value - rounded) > 1e-9) {
          throw std::runtime_error("row " + std::to_string(row_number) +
                                   ": non-integer label '" + row[c] + "'");
        }
        label = static_cast<int>(rounded);
      } else {
        features.push_back(value);
      }
    }
    data.points.push_back(std::move(features));
    data.labels.push_back(label);
  }
  if (data.points.empty()) throw std::runtime_error("no usable rows in " + path.string());

  if (drop_boolean_features) {
    std::size_t features = data.points.front().size();
    std::vector<std::size_t> keep;
    for (std::size_t f = 0; f < features; ++f) {
      bool boolean = true;
      for (const auto& p : data.points) {
        if (p[f] != 0.0 && p[f] != 1.0) {
          boolean = false;
          break;
        }
      }
      if (!boolean) keep.push_back(f);
    }
    if (keep.empty()) throw std::runtime_error("all feature columns are boolean");
    if (keep.size() != features) {
      for (auto& p : data.points) {
        std::vector<double> reduced;
        reduced.reserve(keep.size());
        for (std::size_t f : keep) reduced.push_back(p[f]);
        p = std::move(reduced);
      }
    }
  }

  if (standardize) standardize_features(data);
  return data;
}

void standardize_features(DenseDataset& data) {
  require_consistent(data);
  std::size_t features = data.dimension();
  double n = static_cast<double>(data.size());
  for (std::size_t f = 0; f < features; ++f) {
    double mean = 0.0;
    for (const auto& p : data.points) mean += p[f];
    mean /= n;
    double var = 0.0;
    for (const auto& p : data.points) var += (p[f] - mean) * (p[f] - mean);
    var /= n;
    double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    for (auto& p : data.points) p[f] = (p[f] - mean) * scale;
  }
}

}  // namespace qnn
