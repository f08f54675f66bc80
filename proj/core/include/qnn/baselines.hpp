#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qnn/rng.hpp"
#include "qnn/sparse_vector.hpp"
#include "qnn/training_set.hpp"

namespace qnn {

struct DirectNnResult {
  /// 1-based index of the closest training vector; ties go to the lowest.
  std::uint64_t argmin = 0;
  std::vector<double> distances_sq;
  /// Components actually read: support of the test vector plus each
  /// training vector's support.
  std::uint64_t component_accesses = 0;
  /// Dense-scan reference count N * M.
  std::uint64_t dense_accesses = 0;
};

DirectNnResult direct_nn(const SparseVector& u, const TrainingSet& training);

struct MCEstimate {
  double value = 0.0;
  std::uint64_t samples_used = 0;
  std::uint64_t component_accesses = 0;
  double variance_bound = 0.0;
};

/// Sampled inner-product estimator over the union-support universe of size
/// max(N, 2d); unbiased, with the closed-form variance in variance_bound.
MCEstimate mc_inner_product(RngStream& rng, const SparseVector& a, const SparseVector& b,
                            std::uint64_t n_samples);

/// Sampled squared distance to a cluster centroid; each sampled component of
/// the centroid is itself estimated from member draws. variance_bound reports
/// the per-component bound 4 r_max^2 / N_s of those means.
MCEstimate mc_centroid_distance(RngStream& rng, const SparseVector& u,
                                std::span<const SparseVector> cluster, double epsilon,
                                double sample_constant = 1.0);

enum class CostRegime { kTypical, kAtypical };

struct Table1Costs {
  double direct = 0.0;
  double monte_carlo = 0.0;
  double inner_product = 0.0;
  double euclidean = 0.0;
};

/// Asymptotic access counts of the four classification strategies with all
/// constants set to 1; the typical regime pins epsilon to 1/sqrt(N).
Table1Costs table1_costs(double n, double m, double m_prime, double sparsity, double r_max,
                         double epsilon, CostRegime regime);

}  // namespace qnn
