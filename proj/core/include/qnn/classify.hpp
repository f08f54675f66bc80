#pragma once

#include <cstdint>
#include <vector>

#include "qnn/amplitude_estimation.hpp"
#include "qnn/query_ledger.hpp"
#include "qnn/rng.hpp"
#include "qnn/training_set.hpp"

namespace qnn {

enum class SimMode { kExact, kQuantum };

struct ClassifyOptions {
  double epsilon = 1e-3;
  double delta0 = 0.5;
  SimMode mode = SimMode::kQuantum;
  /// Recover signed inner products through the doubling embedding.
  bool signed_inner_product = false;
  /// Shared outcome-distribution cache; optional.
  AeDistributionCache* cache = nullptr;
};

struct BoundCheck {
  double ledger_total = 0.0;
  double theorem_bound = 0.0;
  bool satisfied = true;
};

struct ClassificationOutcome {
  int label = 0;
  /// Selected candidate: vector index for neighbor methods, cluster index for
  /// centroid methods (both 1-based).
  std::uint64_t argmin = 0;
  /// Per-candidate estimates: similarity for the inner-product method,
  /// squared (optionally normalized) distance for the Euclidean methods.
  std::vector<double> estimates;
  QueryLedger ledger;
  BoundCheck bound_check;
  bool aborted = false;
  bool corruption_flag = false;
  std::uint64_t grover_iterations = 0;
  /// Neighbor indices in discovery order (k-NN only).
  std::vector<std::uint64_t> neighbors;
};

ClassificationOutcome nn_inner_product(RngStream& rng, const TrainingSet& training,
                                       const ClassifyOptions& options);

ClassificationOutcome nn_euclidean(RngStream& rng, const TrainingSet& training,
                                   const ClassifyOptions& options);

ClassificationOutcome nearest_centroid(RngStream& rng, const TrainingSet& training,
                                       const ClassifyOptions& options, bool normalize);

ClassificationOutcome knn(RngStream& rng, const TrainingSet& training,
                          const ClassifyOptions& options, std::uint64_t k_neighbors);

struct KmeansResult {
  /// Cluster ids in [1..k], one per vector.
  std::vector<std::uint64_t> assignment;
  QueryLedger ledger;
  BoundCheck bound_check;
  bool aborted = false;
  bool corruption_flag = false;
  /// Clusters that emptied out and were re-seeded with the farthest vector.
  std::vector<std::uint64_t> reseeded;
};

KmeansResult kmeans_iteration(RngStream& rng, const std::vector<SparseVector>& vectors,
                              std::uint64_t k, const std::vector<std::uint64_t>& assignment,
                              const ClassifyOptions& options);

enum class BoundKind { kTheorem1, kTheorem2, kCorollary2 };

struct BoundParams {
  /// M for kTheorem1 and kCorollary2, M' for kTheorem2.
  std::uint64_t training_count = 1;
  /// Cluster count k; consulted by kCorollary2 only.
  std::uint64_t cluster_count = 1;
  std::uint64_t sparsity = 1;
  double r_max = 1.0;
  double epsilon = 1.0;
  double delta0 = 0.5;
};

/// Closed-form expected-query upper bound for the given pipeline.
double theorem_bound(BoundKind kind, const BoundParams& params);

struct ChebyshevReport {
  double bound_a = 0.0;
  double bound_b = 0.0;
  /// 0 selects cluster A, 1 selects cluster B; ties go to A.
  int decision = 0;
  /// Set when the two bounds are within the looseness factor of each other.
  bool advisory = false;
};

/// Chebyshev tail bounds sigma^2/xi^2 for two clusters at distances xi_a,
/// xi_b, and the normalized-distance decision between them.
ChebyshevReport chebyshev_report(double xi_a, double var_a, double xi_b, double var_b,
                                 double looseness = 2.0);

}  // namespace qnn
