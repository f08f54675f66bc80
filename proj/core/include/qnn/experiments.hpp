#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "qnn/rng.hpp"
#include "qnn/training_set.hpp"

namespace qnn {

/// Additive Gaussian noise clipped at zero: noisy = max(0, value + N(0, epsilon^2)).
/// When squared_distance is set the noise is applied to squared distances instead
/// of plain ones; classification sweeps default to plain distances.
struct NoiseModel {
  double epsilon = 0.0;
  bool squared_distance = false;

  double apply(RngStream& rng, double value) const;
};

/// Plain row-major dataset: points[i] is a feature vector, labels[i] its class.
struct DenseDataset {
  std::vector<std::vector<double>> points;
  std::vector<int> labels;

  std::size_t size() const { return points.size(); }
  std::size_t dimension() const { return points.empty() ? 0 : points.front().size(); }
};

/// Two-crescent dataset plus the geometry statistics the sweeps are calibrated
/// against. All statistics are computed after per-feature standardization.
struct HalfmoonSummary {
  DenseDataset data;
  double opposite_fraction = 0.0;
  double intra_nn_mean = 0.0;
  double inter_centroid_gap = 0.0;
};

/// Generates `count` points (half per crescent, count must be even and >= 2),
/// jitters each coordinate with N(0, jitter^2), and standardizes every feature
/// to zero mean and unit variance over the whole set.
HalfmoonSummary gen_halfmoon(RngStream& rng, std::uint64_t count, double jitter = 0.05);

/// Haar-uniform unit vectors in C^dimension: 2*dimension standard normals per
/// vector, normalized. Component magnitudes follow 2(N-1)r(1-r^2)^(N-2).
std::vector<std::vector<std::complex<double>>> gen_hypersphere_uniform(RngStream& rng,
                                                                       std::uint64_t dimension,
                                                                       std::uint64_t count);

/// Unit-normalizes a dense point into sparse form; the original norm is retained
/// on the result so distance recovery can undo the scaling. Throws on a zero vector.
SparseVector to_unit_sparse(const std::vector<double>& point);

/// Builds a training set with data.points[test_index] as the test vector and the
/// chosen rows as training vectors. With cluster_per_class, training vectors are
/// grouped into one cluster per distinct label (ascending label order).
TrainingSet make_training_set(const DenseDataset& data, std::size_t test_index,
                              const std::vector<std::size_t>& train_indices,
                              bool cluster_per_class = false);

enum class SweepMethod {
  kNearestNeighbor,
  kNearestCentroid,
};

/// One train/test split classified under noisy distances. Candidates are the
/// training points (nearest-neighbor) or the per-class training centroids
/// (nearest-centroid); every test-point/candidate distance gets a fresh noise draw.
struct SplitClassification {
  std::vector<std::size_t> test_indices;
  std::vector<int> assigned;
  std::vector<int> truth;
  std::uint64_t distance_evaluations = 0;
};

SplitClassification classify_noisy_split(RngStream& rng, const DenseDataset& data,
                                         SweepMethod method, double train_fraction,
                                         const NoiseModel& noise);

struct ExperimentCell {
  double param = 0.0;
  double value_mean = 0.0;
  double value_std = 0.0;
  std::uint64_t trials = 0;
  double queries_mean = 0.0;
};

/// Grid sweep result. value_mean/value_std hold the per-cell statistic over
/// trials (accuracy for classification sweeps, the measured gap or crossover
/// size for the study commands). Fits are over log(param) vs log(value_mean).
struct ExperimentReport {
  std::vector<ExperimentCell> cells;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  bool has_fit = false;
  double fit_slope = 0.0;
  double fit_prefactor = 0.0;
};

/// Eleven log-spaced noise levels from 1e-5 to 1e5.
std::vector<double> default_noise_grid();

/// Classification accuracy vs noise level. Per cell and trial, an independent
/// stream derived from (seed, cell, trial) drives the split and the noise.
ExperimentReport sweep_noise(std::uint64_t seed, const DenseDataset& data, SweepMethod method,
                             const std::vector<double>& epsilon_grid, std::uint64_t trials,
                             double train_fraction = 0.5, bool squared_noise = false);

/// Classification accuracy vs training fraction at a fixed noise level.
/// Fractions must leave at least one training and one test point.
ExperimentReport sweep_trainsize(std::uint64_t seed, const DenseDataset& data, SweepMethod method,
                                 const std::vector<double>& fractions, std::uint64_t trials,
                                 double epsilon, bool squared_noise = false);

/// Mean gap between the two smallest distances from e_1 to `candidate_count`
/// Haar-random unit vectors, per dimension in the grid, with a log-log slope fit.
ExperimentReport distance_gap_study(std::uint64_t seed,
                                    const std::vector<std::uint64_t>& dimension_grid,
                                    std::uint64_t candidate_count, std::uint64_t trials);

enum class CostMethod {
  kInnerProduct,
  kEuclidean,
};

/// Nine half-decade dataset sizes from 1e2 to 1e6.
std::vector<double> default_cost_grid();

/// Crossover curve M*(N): the training-set size where the closed-form quantum
/// cost bound (at epsilon = 1/sqrt(N), delta0 = 0.5, d = 1, r = 1, one vector per
/// cluster) equals the N*M classical cost, solved by bisection on log M. Cells
/// with no crossover in range report infinity and are excluded from the fit.
ExperimentReport cost_region(const std::vector<double>& dataset_sizes, CostMethod method);

/// Loads a numeric CSV. A first row containing a non-numeric, non-missing cell
/// is treated as a header and skipped. Rows containing a missing cell ("?" or
/// empty) are dropped; any other non-numeric cell is a parse error naming the row.
/// label_column selects the class column (0-based); remaining columns become
/// features. drop_boolean_features removes feature columns whose values are all
/// 0 or 1. standardize rescales each kept feature to zero mean, unit variance.
DenseDataset load_csv_dataset(const std::filesystem::path& path, std::size_t label_column,
                              bool standardize, bool drop_boolean_features = false);

/// In-place per-feature standardization (population variance); constant features
/// are only centered.
void standardize_features(DenseDataset& data);

}  // namespace qnn
