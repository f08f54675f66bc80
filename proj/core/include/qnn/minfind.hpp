#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "qnn/amplitude_estimation.hpp"
#include "qnn/query_ledger.hpp"
#include "qnn/rng.hpp"

namespace qnn {

/// Per-estimate failure probability that keeps a whole minimum-finding run
/// within total failure budget delta0: delta0 / (81 M (ln M + gamma)).
double corruption_budget(std::uint64_t total, double delta0);

struct GroverSearchResult {
  bool found = false;
  std::uint64_t hit_rank = 0;
  std::uint64_t iterations = 0;
};

/// Exponential-schedule search over `total` items of which `marked` are
/// marked; charges two value evaluations per Grover iteration. A zero
/// max_iterations selects the 90 sqrt(total) cutoff.
GroverSearchResult grover_search_marked(RngStream& rng, std::uint64_t marked,
                                        std::uint64_t total, QueryLedger& ledger,
                                        std::uint64_t max_iterations = 0);

struct MinFindConfig {
  /// Total Grover iterations before an abort; 0 selects the default policy
  /// (unlimited for exact values, 90 sqrt(M) when reads can be corrupted).
  std::uint64_t max_iterations = 0;
  double growth = 8.0 / 7.0;
  /// Abort before any round that would push the ledger past this; 0 = none.
  double query_budget = 0.0;
};

struct MinFindResult {
  std::uint64_t argmin = 0;
  double value = 0.0;
  std::uint64_t grover_iterations = 0;
  bool corruption_flag = false;
  bool aborted = false;
  QueryLedger ledger;
};

/// Threshold-updating Grover minimization over explicit values. Ties break
/// toward the lowest index. Each read is corrupted independently with
/// probability corruption_rate, in which case it reports another entry's value.
MinFindResult durr_hoyer_min(RngStream& rng, std::span<const double> values,
                             QueryLedger& ledger, double corruption_rate = 0.0,
                             const MinFindConfig& config = {});

/// Value access backed by per-index estimation outcomes. The sampler is
/// consulted once per index per run; reads inside the search are charged
/// evaluation_charge each and flip to corrupted_estimate draws with
/// probability 1 - median_fidelity.
struct ApproximateValueOracle {
  std::function<AEOutcome(std::uint64_t)> sampler;
  std::function<double(const AEOutcome&)> value_of;
  std::function<double(RngStream&, std::uint64_t)> corrupted_value;
  QueryCounts evaluation_charge;
};

MinFindResult min_with_approximate_oracle(RngStream& rng, const ApproximateValueOracle& oracle,
                                          std::uint64_t total, QueryLedger& ledger,
                                          const MinFindConfig& config = {});

}  // namespace qnn
