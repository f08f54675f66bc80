#include "qnn/minfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qnn {

namespace {

constexpr double kEulerGamma = 0.5772156649;
constexpr double kDefaultGrowth = 8.0 / 7.0;

std::uint64_t default_cutoff(std::uint64_t total) {
  return static_cast<std::uint64_t>(std::ceil(90.0 * std::sqrt(static_cast<double>(total))));
}

bool lex_less(double value_a, std::uint64_t index_a, double value_b, std::uint64_t index_b) {
  if (value_a != value_b) return value_a < value_b;
  return index_a < index_b;
}

struct ValueModel {
  std::function<double(std::uint64_t)> believed;
  std::function<std::pair<std::uint64_t, double>(RngStream&)> corrupted_read;
  double corruption_probability = 0.0;
  QueryCounts evaluation_charge{1, 0};
};

MinFindResult run_threshold_search(RngStream& rng, std::uint64_t total, const ValueModel& model,
                                   std::uint64_t max_iterations, double query_budget,
                                   double growth) {
  MinFindResult result;
  QueryLedger& ledger = result.ledger;

  std::uint64_t threshold_index = 1 + rng.uniform_index(total);
  double threshold_value = model.believed(threshold_index);

  double g = 1.0;
  const double g_cap = std::sqrt(static_cast<double>(total));
  std::vector<std::uint64_t> marked;
  marked.reserve(total);

  while (true) {
    marked.clear();
    for (std::uint64_t j = 1; j <= total; ++j) {
      if (lex_less(model.believed(j), j, threshold_value, threshold_index)) marked.push_back(j);
    }
    if (marked.empty()) break;

    std::uint64_t c = rng.uniform_index(static_cast<std::uint64_t>(std::ceil(g)));
    if (result.grover_iterations + c > max_iterations) {
      result.aborted = true;
      break;
    }
    QueryCounts round_charge{model.evaluation_charge.o * 2 * c,
                             model.evaluation_charge.f * 2 * c};
    if (query_budget > 0.0 &&
        static_cast<double>(ledger.total() + round_charge.total()) > query_budget) {
      result.aborted = true;
      break;
    }
    ledger.charge(kPhaseGroverIteration, round_charge);
    result.grover_iterations += c;

    bool poisoned = false;
    if (model.corruption_probability > 0.0 && c > 0) {
      double clean = std::pow(1.0 - model.corruption_probability, 2.0 * static_cast<double>(c));
      poisoned = rng.uniform() >= clean;
    }

    if (poisoned) {
      result.corruption_flag = true;
      auto [junk_index, junk_value] = model.corrupted_read(rng);
      if (lex_less(junk_value, junk_index, threshold_value, threshold_index)) {
        threshold_index = junk_index;
        threshold_value = junk_value;
        g = 1.0;
      } else {
        g = std::min(g * growth, g_cap);
      }
      continue;
    }

    double theta = std::asin(
        std::sqrt(static_cast<double>(marked.size()) / static_cast<double>(total)));
    double angle = (2.0 * static_cast<double>(c) + 1.0) * theta;
    double success = std::sin(angle) * std::sin(angle);
    if (rng.uniform() < success) {
      std::uint64_t pick = marked[rng.uniform_index(marked.size())];
      threshold_index = pick;
      threshold_value = model.believed(pick);
      g = 1.0;
    } else {
      g = std::min(g * growth, g_cap);
    }
  }

  result.argmin = threshold_index;
  result.value = threshold_value;
  return result;
}

}  // namespace

double corruption_budget(std::uint64_t total, double delta0) {
  if (total < 1) throw std::invalid_argument("total must be at least 1");
  if (!(delta0 > 0.0) || delta0 >= 1.0) throw std::domain_error("delta0 must lie in (0, 1)");
  double m = static_cast<double>(total);
  return delta0 / (81.0 * m * (std::log(m) + kEulerGamma));
}

GroverSearchResult grover_search_marked(RngStream& rng, std::uint64_t marked,
                                        std::uint64_t total, QueryLedger& ledger,
                                        std::uint64_t max_iterations) {
  if (total < 1) throw std::invalid_argument("total must be at least 1");
  if (marked > total) throw std::invalid_argument("marked count exceeds total");
  if (max_iterations == 0) max_iterations = default_cutoff(total);

  GroverSearchResult result;
  double g = 1.0;
  const double g_cap = std::sqrt(static_cast<double>(total));
  double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
  while (true) {
    std::uint64_t c = rng.uniform_index(static_cast<std::uint64_t>(std::ceil(g)));
    if (result.iterations + c > max_iterations) return result;
    ledger.charge(kPhaseGroverIteration, {2 * c, 0});
    result.iterations += c;
    double angle = (2.0 * static_cast<double>(c) + 1.0) * theta;
    double success = std::sin(angle) * std::sin(angle);
    if (marked > 0 && rng.uniform() < success) {
      result.found = true;
      result.hit_rank = 1 + rng.uniform_index(marked);
      return result;
    }
    g = std::min(g * kDefaultGrowth, g_cap);
  }
}

MinFindResult durr_hoyer_min(RngStream& rng, std::span<const double> values,
                             QueryLedger& ledger, double corruption_rate,
                             const MinFindConfig& config) {
  if (values.empty()) throw std::invalid_argument("values must be nonempty");
  if (corruption_rate < 0.0 || corruption_rate >= 1.0)
    throw std::domain_error("corruption rate must lie in [0, 1)");
  std::uint64_t total = values.size();
  std::uint64_t cutoff = config.max_iterations;
  if (cutoff == 0) {
    cutoff = corruption_rate > 0.0 ? default_cutoff(total)
                                   : std::numeric_limits<std::uint64_t>::max();
  }

  ValueModel model;
  model.believed = [values](std::uint64_t j) { return values[j - 1]; };
  model.corrupted_read = [values, total](RngStream& r) {
    std::uint64_t junk_index = 1 + r.uniform_index(total);
    double junk_value = values[r.uniform_index(total)];
    return std::pair<std::uint64_t, double>{junk_index, junk_value};
  };
  model.corruption_probability = corruption_rate;
  model.evaluation_charge = {1, 0};

  MinFindResult result =
      run_threshold_search(rng, total, model, cutoff, config.query_budget, config.growth);
  ledger.merge(result.ledger);
  return result;
}

MinFindResult min_with_approximate_oracle(RngStream& rng, const ApproximateValueOracle& oracle,
                                          std::uint64_t total, QueryLedger& ledger,
                                          const MinFindConfig& config) {
  if (total < 1) throw std::invalid_argument("total must be at least 1");
  std::uint64_t cutoff = config.max_iterations == 0 ? default_cutoff(total)
                                                    : config.max_iterations;

  std::vector<double> believed(total);
  double worst_fidelity = 1.0;
  for (std::uint64_t j = 1; j <= total; ++j) {
    AEOutcome outcome = oracle.sampler(j);
    believed[j - 1] = oracle.value_of(outcome);
    worst_fidelity = std::min(worst_fidelity, outcome.median_fidelity);
  }

  ValueModel model;
  model.believed = [&believed](std::uint64_t j) { return believed[j - 1]; };
  model.corrupted_read = [&oracle, total](RngStream& r) {
    std::uint64_t junk_index = 1 + r.uniform_index(total);
    double junk_value = oracle.corrupted_value(r, junk_index);
    return std::pair<std::uint64_t, double>{junk_index, junk_value};
  };
  model.corruption_probability = std::clamp(1.0 - worst_fidelity, 0.0, 1.0);
  model.evaluation_charge = oracle.evaluation_charge;

  MinFindResult result =
      run_threshold_search(rng, total, model, cutoff, config.query_budget, config.growth);
  ledger.merge(result.ledger);
  return result;
}

}  // namespace qnn
