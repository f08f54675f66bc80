#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "qnn/query_ledger.hpp"
#include "qnn/rng.hpp"

namespace qnn {

/// Oracle queries consumed by one Grover iteration of an estimation circuit.
struct QueryCost {
  std::uint64_t o_per_iteration = 0;
  std::uint64_t f_per_iteration = 0;

  std::uint64_t total() const { return o_per_iteration + f_per_iteration; }
  QueryCounts scaled(std::uint64_t factor) const {
    return {o_per_iteration * factor, f_per_iteration * factor};
  }
};

/// Swap-test pipeline: both state preparations and their inverses per iteration.
inline constexpr QueryCost kInnerProductQueryCost{8, 4};
/// Centroid-distance circuit alone.
inline constexpr QueryCost kDistanceQueryCost{2, 2};
/// Centroid distance chained with the intra-cluster variance estimate.
inline constexpr QueryCost kDistanceVarianceQueryCost{6, 4};

/// Success floor of a single estimation run.
inline constexpr double kAeSuccessFloor = 8.0 / (std::numbers::pi * std::numbers::pi);
/// Success floor of two chained estimation runs.
inline constexpr double kAeChainedSuccessFloor = kAeSuccessFloor * kAeSuccessFloor;

struct AEConfig {
  std::uint64_t register_size = 1;
  std::uint64_t median_copies = 1;
  QueryCost grover_query_cost{};
  double a0 = kAeSuccessFloor;

  void validate() const;
};

struct AEOutcome {
  std::uint64_t y = 0;
  double a_hat = 0.0;
  double true_a = 0.0;
  double median_fidelity = 1.0;
};

/// Exact outcome distribution of an R-iteration estimation register at
/// amplitude a, with the analytic admissible-set and median statistics.
class AeDistribution {
 public:
  AeDistribution(double a, std::uint64_t register_size);

  double a() const { return a_; }
  std::uint64_t register_size() const { return register_size_; }
  const std::vector<double>& probabilities() const { return probabilities_; }

  std::uint64_t sample(RngStream& rng) const;
  std::uint64_t fold(std::uint64_t y) const { return std::min(y, register_size_ - y); }
  double estimate_of(std::uint64_t y) const;

  std::uint64_t folded_size() const { return register_size_ / 2 + 1; }
  const std::vector<double>& folded_probabilities() const { return folded_; }
  std::uint64_t folded_mode() const { return mode_; }
  std::pair<std::uint64_t, std::uint64_t> admissible_range() const { return {lo_, hi_}; }
  double admissible_mass() const { return admissible_mass_; }

  /// Probability that the lower median of k independent outcomes lands in the
  /// admissible range, computed from exact binomial tails of the folded CDF.
  double median_fidelity(std::uint64_t median_copies) const;

 private:
  double a_ = 0.0;
  std::uint64_t register_size_ = 1;
  std::vector<double> probabilities_;
  std::vector<double> cdf_;
  std::vector<double> folded_;
  std::vector<double> folded_cdf_;
  std::uint64_t mode_ = 0;
  std::uint64_t lo_ = 0;
  std::uint64_t hi_ = 0;
  double admissible_mass_ = 1.0;
};

std::vector<double> ae_outcome_distribution(double a, std::uint64_t register_size);

/// One measured estimation run; charges R * grover_query_cost.
AEOutcome sample_ae(RngStream& rng, const AeDistribution& dist, QueryLedger& ledger,
                    QueryCost cost);
AEOutcome sample_ae(RngStream& rng, double a, std::uint64_t register_size, QueryLedger& ledger,
                    QueryCost cost);

/// Median vote over k runs kept coherent via compute/uncompute; returns the
/// folded lower median and charges 2 * k * R * grover_query_cost.
AEOutcome coherent_ae(RngStream& rng, const AeDistribution& dist, std::uint64_t median_copies,
                      QueryLedger& ledger, QueryCost cost);
AEOutcome coherent_ae(RngStream& rng, double a, std::uint64_t register_size,
                      std::uint64_t median_copies, QueryLedger& ledger, QueryCost cost);

enum class AeMethod { kInnerProduct, kEuclidean };

/// Register size delivering tolerance epsilon on the recovered quantity,
/// as the raw ceiling; used by closed-form cost bounds past the simulable cap.
double register_size_bound(double epsilon, std::uint64_t sparsity, double r_0max, double r_jmax,
                           AeMethod method);

/// Register size delivering tolerance epsilon on the recovered quantity.
std::uint64_t required_register_size(double epsilon, std::uint64_t sparsity, double r_0max,
                                     double r_jmax, AeMethod method);

/// Median copies needed for per-estimate failure probability at most delta.
std::uint64_t median_copies_for(double delta, double a0 = kAeSuccessFloor);

/// Hoeffding bound on the median leaving a set of per-copy probability p.
double hoeffding_failure_bound(std::uint64_t median_copies, double p);

/// Shares exact outcome distributions across runs keyed by (a, R).
class AeDistributionCache {
 public:
  std::shared_ptr<const AeDistribution> get(double a, std::uint64_t register_size);

 private:
  std::mutex mutex_;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::shared_ptr<const AeDistribution>>
      entries_;
};

}  // namespace qnn
