#include "qnn/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>

#include "qnn/minfind.hpp"
#include "qnn/quantum_core.hpp"

namespace qnn {

namespace {

constexpr double kUnitNormTolerance = 1e-12;

std::shared_ptr<const AeDistribution> distribution_for(AeDistributionCache* cache, double a,
                                                       std::uint64_t register_size) {
  if (cache != nullptr) return cache->get(a, register_size);
  return std::make_shared<AeDistribution>(a, register_size);
}

struct Harmonized {
  std::vector<SparseVector> vectors;
  std::uint64_t sparsity = 1;
  double r_max = 1.0;
};

Harmonized harmonize_bounds(const TrainingSet& training) {
  Harmonized out;
  out.sparsity = training.shared_sparsity();
  out.r_max = training.max_r_max();
  out.vectors.reserve(training.size() + 1);
  for (std::uint64_t j = 0; j <= training.size(); ++j) {
    out.vectors.push_back(
        training.vector_at(j).with_sparsity(out.sparsity).with_r_max(out.r_max));
  }
  return out;
}

void require_unit(const std::vector<SparseVector>& vectors) {
  for (const SparseVector& v : vectors) {
    if (!v.is_unit()) throw std::invalid_argument("classification requires unit vectors");
  }
}

bool norms_rescaled(const TrainingSet& training) {
  if (std::abs(training.test_vector().original_norm() - 1.0) > kUnitNormTolerance) return true;
  for (const LabeledVector& lv : training.vectors()) {
    if (std::abs(lv.vector.original_norm() - 1.0) > kUnitNormTolerance) return true;
  }
  return false;
}

int majority_label(const std::vector<int>& labels) {
  std::map<int, std::uint64_t> votes;
  for (int label : labels) ++votes[label];
  int best = votes.begin()->first;
  std::uint64_t best_count = votes.begin()->second;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

double folded_amplitude(std::uint64_t y, std::uint64_t register_size) {
  double s = std::sin(std::numbers::pi * static_cast<double>(y) /
                      static_cast<double>(register_size));
  return s * s;
}

using GridValue = std::function<double(std::uint64_t, std::uint64_t)>;

struct EngineSpec {
  std::uint64_t candidate_count = 0;
  QueryCost cost{};
  std::uint64_t register_size = 1;
  std::uint64_t median_copies = 1;
  double round_budget = 0.0;
  std::function<AEOutcome(RngStream&, std::uint64_t)> draw_believed;
  std::function<double(std::uint64_t, const AEOutcome&)> believed_value;
  std::function<double(RngStream&, std::uint64_t)> corrupted_value;
  std::function<double(std::uint64_t, const AEOutcome&)> reported_estimate;
  std::vector<double> exact_values;
  std::vector<double> exact_estimates;
  std::function<int(std::uint64_t)> label_of;
};

void finalize(ClassificationOutcome& out, const EngineSpec& spec, std::uint64_t select) {
  out.argmin = out.neighbors.front();
  std::vector<int> labels;
  labels.reserve(out.neighbors.size());
  for (std::uint64_t j : out.neighbors) labels.push_back(spec.label_of(j));
  out.label = majority_label(labels);
  out.bound_check.ledger_total = static_cast<double>(out.ledger.total());
  out.bound_check.theorem_bound = spec.round_budget * static_cast<double>(select);
  out.bound_check.satisfied = out.bound_check.ledger_total <= out.bound_check.theorem_bound;
}

ClassificationOutcome run_quantum(RngStream& rng, const EngineSpec& spec, std::uint64_t select) {
  ClassificationOutcome out;
  const std::uint64_t total = spec.candidate_count;
  std::vector<AEOutcome> believed(total);
  std::vector<double> values(total);
  out.estimates.resize(total);
  for (std::uint64_t j = 1; j <= total; ++j) {
    believed[j - 1] = spec.draw_believed(rng, j);
    values[j - 1] = spec.believed_value(j, believed[j - 1]);
    out.estimates[j - 1] = spec.reported_estimate(j, believed[j - 1]);
  }

  std::vector<std::uint64_t> remaining(total);
  std::iota(remaining.begin(), remaining.end(), std::uint64_t{1});
  for (std::uint64_t round = 0; round < select; ++round) {
    ApproximateValueOracle oracle;
    oracle.sampler = [&](std::uint64_t local) {
      AEOutcome outcome = believed[remaining[local - 1] - 1];
      outcome.a_hat = values[remaining[local - 1] - 1];
      return outcome;
    };
    oracle.value_of = [](const AEOutcome& outcome) { return outcome.a_hat; };
    oracle.corrupted_value = [&](RngStream& r, std::uint64_t local) {
      return spec.corrupted_value(r, remaining[local - 1]);
    };
    oracle.evaluation_charge = spec.cost.scaled(2 * spec.median_copies * spec.register_size);
    MinFindConfig config;
    config.query_budget = spec.round_budget;
    MinFindResult result =
        min_with_approximate_oracle(rng, oracle, remaining.size(), out.ledger, config);
    std::uint64_t chosen = remaining[result.argmin - 1];
    out.neighbors.push_back(chosen);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(result.argmin - 1));
    out.grover_iterations += result.grover_iterations;
    out.corruption_flag = out.corruption_flag || result.corruption_flag;
    out.aborted = out.aborted || result.aborted;
  }
  finalize(out, spec, select);
  return out;
}

ClassificationOutcome run_exact(const EngineSpec& spec, std::uint64_t select) {
  ClassificationOutcome out;
  out.estimates = spec.exact_estimates;
  std::vector<std::uint64_t> order(spec.candidate_count);
  std::iota(order.begin(), order.end(), std::uint64_t{1});
  std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
    if (spec.exact_values[a - 1] != spec.exact_values[b - 1])
      return spec.exact_values[a - 1] < spec.exact_values[b - 1];
    return a < b;
  });
  out.neighbors.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(select));
  finalize(out, spec, select);
  return out;
}

ClassificationOutcome run_engine(RngStream& rng, const EngineSpec& spec,
                                 const ClassifyOptions& options, std::uint64_t select) {
  return options.mode == SimMode::kQuantum ? run_quantum(rng, spec, select)
                                           : run_exact(spec, select);
}

EngineSpec build_inner_product_spec(const TrainingSet& data, const ClassifyOptions& options) {
  Harmonized h = harmonize_bounds(data);
  require_unit(h.vectors);
  const std::uint64_t m_count = data.size();
  const bool rescaled = norms_rescaled(data);
  const bool signed_path = options.signed_inner_product || rescaled;

  double test_norm = data.test_vector().original_norm();
  std::vector<double> training_norms(m_count);
  for (std::uint64_t j = 1; j <= m_count; ++j)
    training_norms[j - 1] = data.vector_at(j).original_norm();

  EngineSpec spec;
  spec.candidate_count = m_count;
  spec.label_of = [&data](std::uint64_t j) { return data.label_at(j); };

  spec.exact_values.resize(m_count);
  spec.exact_estimates.resize(m_count);
  for (std::uint64_t j = 1; j <= m_count; ++j) {
    std::complex<double> ip = inner_product(h.vectors[0], h.vectors[j]);
    if (rescaled) {
      double s = std::abs(1.0 + ip) - 1.0;
      double nu = test_norm;
      double nv = training_norms[j - 1];
      double dist = nu * nu + nv * nv - 2.0 * nu * nv * s;
      spec.exact_values[j - 1] = dist;
      spec.exact_estimates[j - 1] = dist;
    } else if (signed_path) {
      double s = std::abs(1.0 + ip) - 1.0;
      spec.exact_values[j - 1] = -s;
      spec.exact_estimates[j - 1] = s;
    } else {
      double sq = std::norm(ip);
      spec.exact_values[j - 1] = -sq;
      spec.exact_estimates[j - 1] = sq;
    }
  }

  if (options.mode != SimMode::kQuantum) return spec;

  std::vector<SparseVector> prepared;
  prepared.reserve(h.vectors.size());
  if (signed_path) {
    for (const SparseVector& v : h.vectors) prepared.push_back(sign_recovering_embed(v));
  } else {
    prepared = h.vectors;
  }
  const std::uint64_t d_eff = prepared.front().declared_sparsity();
  const double r_eff = prepared.front().r_max();

  spec.cost = kInnerProductQueryCost;
  spec.register_size = required_register_size(options.epsilon, d_eff, r_eff, r_eff,
                                              AeMethod::kInnerProduct);
  spec.median_copies =
      median_copies_for(corruption_budget(m_count, options.delta0), kAeSuccessFloor);
  BoundParams bound_params;
  bound_params.training_count = m_count;
  bound_params.sparsity = d_eff;
  bound_params.r_max = r_eff;
  bound_params.epsilon = options.epsilon;
  bound_params.delta0 = options.delta0;
  spec.round_budget = theorem_bound(BoundKind::kTheorem1, bound_params);

  std::vector<double> amplitudes(m_count);
  for (std::uint64_t j = 1; j <= m_count; ++j)
    amplitudes[j - 1] = swap_test_probability(prepared[0], prepared[j]);

  const std::uint64_t register_size = spec.register_size;
  auto recovered_sq = [register_size, d_eff, r_eff](std::uint64_t y) {
    double a = std::max(folded_amplitude(y, register_size), 0.5);
    return std::clamp(recover_inner_product_sq(a, d_eff, r_eff, r_eff), 0.0, 1.0);
  };

  GridValue value_from_grid;
  GridValue estimate_from_grid;
  if (rescaled) {
    double nu = test_norm;
    std::vector<double> nv = training_norms;
    value_from_grid = [recovered_sq, nu, nv](std::uint64_t j, std::uint64_t y) {
      double s = 2.0 * std::sqrt(recovered_sq(y)) - 1.0;
      return nu * nu + nv[j - 1] * nv[j - 1] - 2.0 * nu * nv[j - 1] * s;
    };
    estimate_from_grid = value_from_grid;
  } else {
    double half_register = static_cast<double>(register_size) / 2.0;
    value_from_grid = [half_register](std::uint64_t, std::uint64_t y) {
      return half_register - static_cast<double>(y);
    };
    if (signed_path) {
      estimate_from_grid = [recovered_sq](std::uint64_t, std::uint64_t y) {
        return 2.0 * std::sqrt(recovered_sq(y)) - 1.0;
      };
    } else {
      estimate_from_grid = [recovered_sq](std::uint64_t, std::uint64_t y) {
        return recovered_sq(y);
      };
    }
  }

  spec.draw_believed = [amplitudes, register_size, copies = spec.median_copies, cost = spec.cost,
                        cache = options.cache](RngStream& rng, std::uint64_t j) {
    auto dist = distribution_for(cache, amplitudes[j - 1], register_size);
    QueryLedger scratch;
    return coherent_ae(rng, *dist, copies, scratch, cost);
  };
  spec.believed_value = [value_from_grid](std::uint64_t j, const AEOutcome& outcome) {
    return value_from_grid(j, outcome.y);
  };
  spec.corrupted_value = [value_from_grid, folded_count = register_size / 2 + 1](
                             RngStream& rng, std::uint64_t j) {
    return value_from_grid(j, rng.uniform_index(folded_count));
  };
  spec.reported_estimate = [estimate_from_grid](std::uint64_t j, const AEOutcome& outcome) {
    return estimate_from_grid(j, outcome.y);
  };
  return spec;
}

EngineSpec build_euclidean_spec(const TrainingSet& data, const ClassifyOptions& options) {
  Harmonized h = harmonize_bounds(data);
  require_unit(h.vectors);
  const std::uint64_t m_count = data.size();
  const double scale = 4.0 * static_cast<double>(h.sparsity) * h.r_max * h.r_max;

  EngineSpec spec;
  spec.candidate_count = m_count;
  spec.label_of = [&data](std::uint64_t j) { return data.label_at(j); };

  spec.exact_values.resize(m_count);
  spec.exact_estimates.resize(m_count);
  for (std::uint64_t j = 1; j <= m_count; ++j) {
    double dist = distance_sq(h.vectors[0], h.vectors[j]);
    spec.exact_values[j - 1] = dist;
    spec.exact_estimates[j - 1] = dist;
  }

  if (options.mode != SimMode::kQuantum) return spec;

  spec.cost = kDistanceQueryCost;
  spec.register_size = required_register_size(options.epsilon, h.sparsity, h.r_max, h.r_max,
                                              AeMethod::kEuclidean);
  spec.median_copies =
      median_copies_for(corruption_budget(m_count, options.delta0), kAeSuccessFloor);
  BoundParams bound_params;
  bound_params.training_count = m_count;
  bound_params.sparsity = h.sparsity;
  bound_params.r_max = h.r_max;
  bound_params.epsilon = options.epsilon;
  bound_params.delta0 = options.delta0;
  spec.round_budget = theorem_bound(BoundKind::kTheorem2, bound_params);

  std::vector<double> amplitudes(m_count);
  for (std::uint64_t j = 1; j <= m_count; ++j) {
    std::span<const SparseVector> single(&h.vectors[j], 1);
    amplitudes[j - 1] = euclidean_probability(h.vectors[0], single);
  }

  const std::uint64_t register_size = spec.register_size;
  spec.draw_believed = [amplitudes, register_size, copies = spec.median_copies, cost = spec.cost,
                        cache = options.cache](RngStream& rng, std::uint64_t j) {
    auto dist = distribution_for(cache, amplitudes[j - 1], register_size);
    QueryLedger scratch;
    return coherent_ae(rng, *dist, copies, scratch, cost);
  };
  spec.believed_value = [](std::uint64_t, const AEOutcome& outcome) { return outcome.a_hat; };
  spec.corrupted_value = [register_size, folded_count = register_size / 2 + 1](
                             RngStream& rng, std::uint64_t) {
    return folded_amplitude(rng.uniform_index(folded_count), register_size);
  };
  spec.reported_estimate = [scale](std::uint64_t, const AEOutcome& outcome) {
    return scale * outcome.a_hat;
  };
  return spec;
}

EngineSpec build_centroid_spec(const TrainingSet& data, const ClassifyOptions& options,
                               bool normalize) {
  if (!data.has_clusters()) throw std::invalid_argument("training set has no clusters");
  Harmonized h = harmonize_bounds(data);
  require_unit(h.vectors);
  const std::uint64_t cluster_count = data.cluster_count();
  const double scale = 4.0 * static_cast<double>(h.sparsity) * h.r_max * h.r_max;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<SparseVector>> members(cluster_count);
  for (std::uint64_t m = 0; m < cluster_count; ++m) {
    const auto& indices = data.cluster(m);
    members[m].reserve(indices.size());
    for (std::uint64_t idx : indices) members[m].push_back(h.vectors[idx + 1]);
  }

  std::vector<double> dist_amplitudes(cluster_count);
  std::vector<double> var_amplitudes(cluster_count, 0.0);
  for (std::uint64_t m = 0; m < cluster_count; ++m) {
    dist_amplitudes[m] = euclidean_probability(h.vectors[0], members[m]);
    if (normalize && members[m].size() > 1)
      var_amplitudes[m] = intra_cluster_variance_probability(members[m]);
  }

  EngineSpec spec;
  spec.candidate_count = cluster_count;
  spec.label_of = [&data](std::uint64_t m) { return data.cluster_label(m - 1); };

  spec.exact_values.resize(cluster_count);
  spec.exact_estimates.resize(cluster_count);
  for (std::uint64_t m = 0; m < cluster_count; ++m) {
    double dist = scale * dist_amplitudes[m];
    double value = dist;
    if (normalize && members[m].size() > 1) {
      double sigma = scale * var_amplitudes[m];
      value = sigma > 0.0 ? dist / sigma : (dist == 0.0 ? 0.0 : inf);
    }
    spec.exact_values[m] = value;
    spec.exact_estimates[m] = value;
  }

  if (options.mode != SimMode::kQuantum) return spec;

  spec.cost = normalize ? kDistanceVarianceQueryCost : kDistanceQueryCost;
  const double success_floor = normalize ? kAeChainedSuccessFloor : kAeSuccessFloor;
  spec.register_size = required_register_size(options.epsilon, h.sparsity, h.r_max, h.r_max,
                                              AeMethod::kEuclidean);
  spec.median_copies =
      median_copies_for(corruption_budget(cluster_count, options.delta0), success_floor);
  BoundParams bound_params;
  bound_params.training_count = cluster_count;
  bound_params.sparsity = h.sparsity;
  bound_params.r_max = h.r_max;
  bound_params.epsilon = options.epsilon;
  bound_params.delta0 = options.delta0;
  spec.round_budget = theorem_bound(BoundKind::kTheorem2, bound_params);

  std::vector<std::uint64_t> sizes(cluster_count);
  for (std::uint64_t m = 0; m < cluster_count; ++m) sizes[m] = members[m].size();

  const std::uint64_t register_size = spec.register_size;
  auto denominators = std::make_shared<std::vector<double>>(cluster_count, 1.0);
  spec.draw_believed = [dist_amplitudes, var_amplitudes, sizes, register_size,
                        copies = spec.median_copies, cost = spec.cost, cache = options.cache,
                        normalize, scale, epsilon = options.epsilon,
                        denominators](RngStream& rng, std::uint64_t m) {
    QueryLedger scratch;
    auto dist = distribution_for(cache, dist_amplitudes[m - 1], register_size);
    AEOutcome numerator = coherent_ae(rng, *dist, copies, scratch, cost);
    double value = scale * numerator.a_hat;
    double fidelity = numerator.median_fidelity;
    double denominator = 1.0;
    if (normalize && sizes[m - 1] > 1) {
      auto var = distribution_for(cache, var_amplitudes[m - 1], register_size);
      AEOutcome sigma = coherent_ae(rng, *var, copies, scratch, cost);
      // The recovered sigma is only resolved to within epsilon, so the ratio
      // denominator never drops below it.
      denominator = std::max(scale * sigma.a_hat, epsilon);
      fidelity *= sigma.median_fidelity;
    }
    (*denominators)[m - 1] = denominator;
    AEOutcome outcome = numerator;
    outcome.a_hat = value / denominator;
    outcome.median_fidelity = fidelity;
    return outcome;
  };
  spec.believed_value = [](std::uint64_t, const AEOutcome& outcome) { return outcome.a_hat; };
  spec.corrupted_value = [denominators, register_size, scale,
                          folded_count = register_size / 2 + 1](RngStream& rng, std::uint64_t m) {
    double junk = scale * folded_amplitude(rng.uniform_index(folded_count), register_size);
    return junk / (*denominators)[m - 1];
  };
  spec.reported_estimate = [](std::uint64_t, const AEOutcome& outcome) { return outcome.a_hat; };
  return spec;
}

}  // namespace

ClassificationOutcome nn_inner_product(RngStream& rng, const TrainingSet& training,
                                       const ClassifyOptions& options) {
  EngineSpec spec = build_inner_product_spec(training, options);
  return run_engine(rng, spec, options, 1);
}

ClassificationOutcome nn_euclidean(RngStream& rng, const TrainingSet& training,
                                   const ClassifyOptions& options) {
  EngineSpec spec = build_euclidean_spec(training, options);
  return run_engine(rng, spec, options, 1);
}

ClassificationOutcome nearest_centroid(RngStream& rng, const TrainingSet& training,
                                       const ClassifyOptions& options, bool normalize) {
  EngineSpec spec = build_centroid_spec(training, options, normalize);
  return run_engine(rng, spec, options, 1);
}

ClassificationOutcome knn(RngStream& rng, const TrainingSet& training,
                          const ClassifyOptions& options, std::uint64_t k_neighbors) {
  if (k_neighbors < 1 || k_neighbors > training.size())
    throw std::invalid_argument("neighbor count must lie in [1, M]");
  EngineSpec spec = build_inner_product_spec(training, options);
  return run_engine(rng, spec, options, k_neighbors);
}

KmeansResult kmeans_iteration(RngStream& rng, const std::vector<SparseVector>& vectors,
                              std::uint64_t k, const std::vector<std::uint64_t>& assignment,
                              const ClassifyOptions& options) {
  if (vectors.empty()) throw std::invalid_argument("vectors must be nonempty");
  if (k < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (assignment.size() != vectors.size())
    throw std::invalid_argument("assignment size must match vector count");
  const std::uint64_t m_count = vectors.size();

  std::vector<std::vector<std::uint64_t>> members(k);
  for (std::uint64_t i = 1; i <= m_count; ++i) {
    std::uint64_t cluster = assignment[i - 1];
    if (cluster < 1 || cluster > k) throw std::invalid_argument("assignment id out of range");
    members[cluster - 1].push_back(i);
  }
  for (const auto& list : members)
    if (list.empty()) throw std::invalid_argument("every cluster must be nonempty");

  std::uint64_t sparsity = 1;
  double r_bound = 0.0;
  for (const SparseVector& v : vectors) {
    sparsity = std::max(sparsity, v.declared_sparsity());
    r_bound = std::max(r_bound, v.r_max());
  }
  std::vector<SparseVector> h;
  h.reserve(m_count);
  for (const SparseVector& v : vectors)
    h.push_back(v.with_sparsity(sparsity).with_r_max(r_bound));
  require_unit(h);
  const double scale = 4.0 * static_cast<double>(sparsity) * r_bound * r_bound;

  auto member_vectors = [&h](const std::vector<std::uint64_t>& list) {
    std::vector<SparseVector> out;
    out.reserve(list.size());
    for (std::uint64_t i : list) out.push_back(h[i - 1]);
    return out;
  };
  std::vector<std::vector<SparseVector>> cluster_vectors(k);
  for (std::uint64_t m = 0; m < k; ++m) cluster_vectors[m] = member_vectors(members[m]);

  KmeansResult result;
  result.assignment.resize(m_count);

  if (options.mode == SimMode::kQuantum) {
    const std::uint64_t register_size = required_register_size(
        options.epsilon, sparsity, r_bound, r_bound, AeMethod::kEuclidean);
    const std::uint64_t copies =
        median_copies_for(corruption_budget(k, options.delta0), kAeSuccessFloor);
    BoundParams bound_params;
    bound_params.training_count = m_count;
    bound_params.cluster_count = k;
    bound_params.sparsity = sparsity;
    bound_params.r_max = r_bound;
    bound_params.epsilon = options.epsilon;
    bound_params.delta0 = options.delta0;
    const double full_bound = theorem_bound(BoundKind::kCorollary2, bound_params);
    const double per_vector_budget = full_bound / static_cast<double>(m_count);

    for (std::uint64_t i = 1; i <= m_count; ++i) {
      EngineSpec spec;
      spec.candidate_count = k;
      spec.cost = kDistanceQueryCost;
      spec.register_size = register_size;
      spec.median_copies = copies;
      spec.round_budget = per_vector_budget;
      spec.label_of = [](std::uint64_t) { return 0; };
      std::vector<double> amplitudes(k);
      for (std::uint64_t m = 1; m <= k; ++m)
        amplitudes[m - 1] = euclidean_probability(h[i - 1], cluster_vectors[m - 1]);
      spec.draw_believed = [amplitudes, register_size, copies, cost = spec.cost,
                            cache = options.cache](RngStream& r, std::uint64_t m) {
        auto dist = distribution_for(cache, amplitudes[m - 1], register_size);
        QueryLedger scratch;
        return coherent_ae(r, *dist, copies, scratch, cost);
      };
      spec.believed_value = [](std::uint64_t, const AEOutcome& outcome) { return outcome.a_hat; };
      spec.corrupted_value = [register_size, folded_count = register_size / 2 + 1](
                                 RngStream& r, std::uint64_t) {
        return folded_amplitude(r.uniform_index(folded_count), register_size);
      };
      spec.reported_estimate = [](std::uint64_t, const AEOutcome& outcome) {
        return outcome.a_hat;
      };
      ClassificationOutcome out = run_quantum(rng, spec, 1);
      result.assignment[i - 1] = out.argmin;
      result.ledger.merge(out.ledger);
      result.aborted = result.aborted || out.aborted;
      result.corruption_flag = result.corruption_flag || out.corruption_flag;
    }
    result.bound_check.theorem_bound = full_bound;
  } else {
    for (std::uint64_t i = 1; i <= m_count; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint64_t best_m = 1;
      for (std::uint64_t m = 1; m <= k; ++m) {
        double dist = scale * euclidean_probability(h[i - 1], cluster_vectors[m - 1]);
        if (dist < best) {
          best = dist;
          best_m = m;
        }
      }
      result.assignment[i - 1] = best_m;
    }
  }

  std::vector<std::vector<std::uint64_t>> new_members(k);
  for (std::uint64_t i = 1; i <= m_count; ++i)
    new_members[result.assignment[i - 1] - 1].push_back(i);
  while (true) {
    std::uint64_t empty_cluster = 0;
    for (std::uint64_t m = 1; m <= k; ++m) {
      if (new_members[m - 1].empty()) {
        empty_cluster = m;
        break;
      }
    }
    if (empty_cluster == 0) break;
    double best_dist = -1.0;
    std::uint64_t best_i = 0;
    for (std::uint64_t i = 1; i <= m_count; ++i) {
      std::uint64_t home = result.assignment[i - 1];
      if (new_members[home - 1].size() < 2) continue;
      double dist =
          scale * euclidean_probability(h[i - 1], member_vectors(new_members[home - 1]));
      if (dist > best_dist) {
        best_dist = dist;
        best_i = i;
      }
    }
    std::uint64_t home = result.assignment[best_i - 1];
    auto& donor = new_members[home - 1];
    donor.erase(std::find(donor.begin(), donor.end(), best_i));
    new_members[empty_cluster - 1].push_back(best_i);
    result.assignment[best_i - 1] = empty_cluster;
    result.reseeded.push_back(empty_cluster);
  }

  result.bound_check.ledger_total = static_cast<double>(result.ledger.total());
  result.bound_check.satisfied =
      result.bound_check.ledger_total <= result.bound_check.theorem_bound ||
      options.mode != SimMode::kQuantum;
  return result;
}

double theorem_bound(BoundKind kind, const BoundParams& params) {
  if (params.training_count < 1)
    throw std::invalid_argument("training count must be at least 1");
  if (params.cluster_count < 1) throw std::invalid_argument("cluster count must be at least 1");
  if (params.sparsity < 1) throw std::invalid_argument("sparsity must be at least 1");
  if (!(params.r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  if (!(params.epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(params.delta0 > 0.0) || params.delta0 >= 1.0)
    throw std::domain_error("delta0 must lie in (0, 1)");
  const double m = static_cast<double>(params.training_count);
  switch (kind) {
    case BoundKind::kTheorem1: {
      double r = register_size_bound(params.epsilon, params.sparsity, params.r_max, params.r_max,
                                     AeMethod::kInnerProduct);
      double copies = static_cast<double>(median_copies_for(
          corruption_budget(params.training_count, params.delta0), kAeSuccessFloor));
      return 1080.0 * std::sqrt(m) * r * copies;
    }
    case BoundKind::kTheorem2: {
      double r = register_size_bound(params.epsilon, params.sparsity, params.r_max, params.r_max,
                                     AeMethod::kEuclidean);
      double copies = static_cast<double>(median_copies_for(
          corruption_budget(params.training_count, params.delta0), kAeChainedSuccessFloor));
      return 900.0 * std::sqrt(m) * r * copies;
    }
    case BoundKind::kCorollary2: {
      double r = register_size_bound(params.epsilon, params.sparsity, params.r_max, params.r_max,
                                     AeMethod::kEuclidean);
      double copies = static_cast<double>(median_copies_for(
          corruption_budget(params.cluster_count, params.delta0), kAeSuccessFloor));
      return 360.0 * m * std::sqrt(static_cast<double>(params.cluster_count)) * r * copies;
    }
  }
  throw std::logic_error("unknown bound kind");
}

ChebyshevReport chebyshev_report(double xi_a, double var_a, double xi_b, double var_b,
                                 double looseness) {
  if (xi_a < 0.0 || xi_b < 0.0) throw std::invalid_argument("distances must be nonnegative");
  if (var_a < 0.0 || var_b < 0.0) throw std::invalid_argument("variances must be nonnegative");
  if (!(looseness >= 1.0)) throw std::invalid_argument("looseness factor must be at least 1");
  ChebyshevReport report;
  const double inf = std::numeric_limits<double>::infinity();
  report.bound_a = xi_a > 0.0 ? var_a / (xi_a * xi_a) : inf;
  report.bound_b = xi_b > 0.0 ? var_b / (xi_b * xi_b) : inf;
  // Normalized distances are compared cross-multiplied so zero variances stay
  // well defined.
  double sigma_a = std::sqrt(var_a);
  double sigma_b = std::sqrt(var_b);
  report.decision = xi_a * sigma_b <= xi_b * sigma_a ? 0 : 1;
  double lo = std::min(report.bound_a, report.bound_b);
  double hi = std::max(report.bound_a, report.bound_b);
  report.advisory = hi <= looseness * lo;
  return report;
}

}  // namespace qnn
