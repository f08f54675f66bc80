#include "qnn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qnn {

namespace {

double common_support_second_moment(const SparseVector& a, const SparseVector& b) {
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  double sum = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  while (ia < ea.size() && ib < eb.size()) {
    if (ea[ia].index < eb[ib].index) {
      ++ia;
    } else if (eb[ib].index < ea[ia].index) {
      ++ib;
    } else {
      double product = ea[ia].magnitude * eb[ib].magnitude;
      sum += product * product;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

}  // namespace

DirectNnResult direct_nn(const SparseVector& u, const TrainingSet& training) {
  DirectNnResult result;
  const std::uint64_t m_count = training.size();
  result.distances_sq.resize(m_count);
  result.dense_accesses = u.dimension() * m_count;
  double best = 0.0;
  for (std::uint64_t j = 1; j <= m_count; ++j) {
    const SparseVector& v = training.vector_at(j);
    if (v.dimension() != u.dimension()) throw std::invalid_argument("dimension mismatch");
    double dist = distance_sq(u, v);
    result.distances_sq[j - 1] = dist;
    result.component_accesses += u.support_size() + v.support_size();
    if (result.argmin == 0 || dist < best) {
      best = dist;
      result.argmin = j;
    }
  }
  return result;
}

MCEstimate mc_inner_product(RngStream& rng, const SparseVector& a, const SparseVector& b,
                            std::uint64_t n_samples) {
  if (n_samples < 1) throw std::invalid_argument("sample count must be at least 1");
  if (a.dimension() != b.dimension()) throw std::invalid_argument("dimension mismatch");
  const std::uint64_t n = a.dimension();
  const std::uint64_t d = std::max(a.declared_sparsity(), b.declared_sparsity());
  const std::uint64_t universe = std::max(n, 2 * d);

  double sum = 0.0;
  for (std::uint64_t t = 0; t < n_samples; ++t) {
    std::uint64_t index = 1 + rng.uniform_index(universe);
    if (index <= n) sum += std::real(std::conj(a.component(index)) * b.component(index));
  }

  MCEstimate estimate;
  estimate.value = static_cast<double>(universe) / static_cast<double>(n_samples) * sum;
  estimate.samples_used = n_samples;
  estimate.component_accesses = 2 * n_samples;
  double ip = std::real(inner_product(a, b));
  double second = common_support_second_moment(a, b);
  estimate.variance_bound =
      (static_cast<double>(universe) * second - ip * ip) / static_cast<double>(n_samples);
  return estimate;
}

MCEstimate mc_centroid_distance(RngStream& rng, const SparseVector& u,
                                std::span<const SparseVector> cluster, double epsilon,
                                double sample_constant) {
  if (cluster.empty()) throw std::invalid_argument("cluster must be nonempty");
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  if (!(sample_constant > 0.0)) throw std::invalid_argument("sample constant must be positive");
  const std::uint64_t n = u.dimension();
  std::uint64_t d = u.declared_sparsity();
  double r = u.r_max();
  for (const SparseVector& v : cluster) {
    if (v.dimension() != n) throw std::invalid_argument("dimension mismatch");
    d = std::max(d, v.declared_sparsity());
    r = std::max(r, v.r_max());
  }
  const std::uint64_t universe = std::max(n, 2 * d);

  const double dr = static_cast<double>(d) * r * r;
  const std::uint64_t n_components =
      static_cast<std::uint64_t>(std::max(1.0, std::ceil(dr * dr / (epsilon * epsilon))));
  const double nc = static_cast<double>(n_components);
  const std::uint64_t n_member_draws = static_cast<std::uint64_t>(
      std::max(1.0, std::ceil(sample_constant * r * r * nc * nc / (epsilon * epsilon))));

  double cross = 0.0;
  double centroid_sq = 0.0;
  for (std::uint64_t t = 0; t < n_components; ++t) {
    std::uint64_t index = 1 + rng.uniform_index(universe);
    if (index > n) continue;
    double mean = 0.0;
    for (std::uint64_t s = 0; s < n_member_draws; ++s) {
      const SparseVector& member = cluster[rng.uniform_index(cluster.size())];
      mean += std::real(member.component(index));
    }
    mean /= static_cast<double>(n_member_draws);
    cross += std::real(u.component(index)) * mean;
    centroid_sq += mean * mean;
  }
  const double blowup = static_cast<double>(universe) / nc;

  MCEstimate estimate;
  double norm_u = u.norm();
  estimate.value =
      std::max(0.0, norm_u * norm_u + blowup * centroid_sq - 2.0 * blowup * cross);
  estimate.samples_used = n_components;
  estimate.component_accesses = n_components + n_components * n_member_draws;
  estimate.variance_bound = 4.0 * r * r / static_cast<double>(n_member_draws);
  return estimate;
}

Table1Costs table1_costs(double n, double m, double m_prime, double sparsity, double r_max,
                         double epsilon, CostRegime regime) {
  if (!(n >= 1.0) || !(m >= 1.0) || !(m_prime >= 1.0) || !(sparsity >= 1.0))
    throw std::invalid_argument("counts must be at least 1");
  if (!(r_max > 0.0)) throw std::invalid_argument("r_max must be positive");
  double eps = regime == CostRegime::kTypical ? 1.0 / std::sqrt(n) : epsilon;
  if (!(eps > 0.0)) throw std::domain_error("epsilon must be positive");
  const double dr4 = sparsity * sparsity * r_max * r_max * r_max * r_max;
  const double dr2 = sparsity * r_max * r_max;
  Table1Costs costs;
  costs.direct = n * m;
  costs.monte_carlo = m * dr4 / (eps * eps);
  costs.inner_product = std::sqrt(m) * std::log(m) * dr4 / eps;
  costs.euclidean = std::sqrt(m_prime) * std::log(m_prime) * dr2 / eps;
  return costs;
}

}  // namespace qnn
