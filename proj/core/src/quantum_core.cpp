#include "qnn/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qnn/statevector.hpp"

namespace qnn {

namespace {

constexpr double kProbabilityTolerance = 1e-10;

std::complex<double> rest_amplitude_for(double magnitude, double phase, double r_max) {
  double ratio = magnitude / r_max;
  double rest = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
  return std::polar(rest, -phase);
}

std::complex<double> value_amplitude_for(double magnitude, double phase, double r_max) {
  return std::polar(magnitude / r_max, phase);
}

void require_unit(const SparseVector& v, const char* role) {
  if (!v.is_unit()) throw std::invalid_argument(std::string(role) + " vector must be unit");
}

std::uint64_t ceil_log2(std::uint64_t n) {
  std::uint64_t bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

std::vector<std::complex<double>> dense_mean(std::span<const SparseVector> cluster) {
  std::vector<std::complex<double>> mean(cluster.front().dimension(), {0.0, 0.0});
  for (const SparseVector& v : cluster) {
    if (v.dimension() != mean.size())
      throw std::invalid_argument("cluster vectors must share one dimension");
    for (const SparseEntry& e : v.entries()) mean[e.index - 1] += std::polar(e.magnitude, e.phase);
  }
  for (auto& c : mean) c /= static_cast<double>(cluster.size());
  return mean;
}

struct ClusterScale {
  std::uint64_t sparsity = 1;
  double r_max = 1.0;
};

ClusterScale cluster_scale(const SparseVector* u, std::span<const SparseVector> cluster) {
  ClusterScale scale;
  scale.sparsity = u ? u->declared_sparsity() : cluster.front().declared_sparsity();
  scale.r_max = u ? u->r_max() : cluster.front().r_max();
  for (const SparseVector& v : cluster) {
    scale.sparsity = std::max(scale.sparsity, v.declared_sparsity());
    scale.r_max = std::max(scale.r_max, v.r_max());
  }
  return scale;
}

/// Amplitudes of one swap-test input on the index/component/flag sub-register.
/// Branches beyond the true support are realized on unused index values so the
/// construction stays injective; they carry component amplitude 0.
std::vector<std::complex<double>> build_substate(const SparseVector& v, bool flag_before_value,
                                                 std::uint64_t index_bits) {
  const std::uint64_t d = v.declared_sparsity();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<std::complex<double>> amps(std::uint64_t{1} << (index_bits + 2), {0.0, 0.0});
  auto place = [&](std::uint64_t index, std::complex<double> rest, std::complex<double> value) {
    std::uint64_t base = (index - 1) << 2;
    if (flag_before_value) {
      amps[base | 0b10] += rest * inv_sqrt_d;
      amps[base | 0b11] += value * inv_sqrt_d;
    } else {
      amps[base | 0b01] += rest * inv_sqrt_d;
      amps[base | 0b11] += value * inv_sqrt_d;
    }
  };
  for (const SparseEntry& e : v.entries())
    place(e.index, rest_amplitude_for(e.magnitude, e.phase, v.r_max()),
          value_amplitude_for(e.magnitude, e.phase, v.r_max()));
  std::uint64_t pads_needed = d - v.support_size();
  for (std::uint64_t cand = 1; pads_needed > 0; ++cand) {
    bool in_support = false;
    for (const SparseEntry& e : v.entries()) {
      if (e.index == cand) {
        in_support = true;
        break;
      }
    }
    if (in_support) continue;
    place(cand, {1.0, 0.0}, {0.0, 0.0});
    --pads_needed;
  }
  return amps;
}

}  // namespace

PreparedState prepare_density_state(const DataOracle& oracle, QueryLedger& ledger,
                                    std::uint64_t j) {
  const SparseVector& v = oracle.vector(j);
  ledger.charge(kPhaseStatePrep, {2, 1});
  PreparedState state;
  state.flag_before_value = (j == 0);
  state.declared_sparsity = v.declared_sparsity();
  state.r_max = v.r_max();
  state.branches.reserve(v.declared_sparsity());
  for (std::uint64_t ell = 1; ell <= v.declared_sparsity(); ++ell) {
    BranchAmplitudes branch;
    branch.index = v.support_index(ell);
    if (ell <= v.support_size()) {
      const SparseEntry& e = v.entries()[ell - 1];
      branch.rest_amplitude = rest_amplitude_for(e.magnitude, e.phase, v.r_max());
      branch.value_amplitude = value_amplitude_for(e.magnitude, e.phase, v.r_max());
    } else {
      branch.rest_amplitude = {1.0, 0.0};
      branch.value_amplitude = {0.0, 0.0};
    }
    state.branches.push_back(branch);
  }
  return state;
}

double swap_test_probability(const SparseVector& u, const SparseVector& v) {
  require_unit(u, "test");
  require_unit(v, "training");
  if (u.declared_sparsity() != v.declared_sparsity())
    throw std::invalid_argument("swap test requires a shared declared sparsity");
  double scale =
      static_cast<double>(u.declared_sparsity()) * u.r_max() * v.r_max();
  std::complex<double> overlap = inner_product(u, v) / scale;
  return 0.5 * (1.0 + std::norm(overlap));
}

double recover_inner_product_sq(double a, std::uint64_t sparsity, double r_0max, double r_jmax) {
  if (a < 0.5) throw std::domain_error("swap-test probability below 1/2");
  double d = static_cast<double>(sparsity);
  return (2.0 * a - 1.0) * d * d * r_0max * r_0max * r_jmax * r_jmax;
}

SparseVector sign_recovering_embed(const SparseVector& v) {
  require_unit(v, "embedded");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<SparseEntry> entries;
  entries.reserve(v.support_size() + 1);
  entries.push_back({1, inv_sqrt2, 0.0});
  for (const SparseEntry& e : v.entries())
    entries.push_back({v.dimension() + e.index, e.magnitude * inv_sqrt2, e.phase});
  return SparseVector(2 * v.dimension(), std::move(entries), v.declared_sparsity() + 1,
                      std::max(1.0, v.r_max()) * inv_sqrt2);
}

VWeights synthesize_v(std::uint64_t m_count) {
  if (m_count == 0) throw std::invalid_argument("m_count must be positive");
  double m = static_cast<double>(m_count);
  VWeights weights;
  weights.m_count = m_count;
  weights.t = std::asin(std::sqrt((m + 1.0) / (2.0 * m)));
  double uniform = std::sin(weights.t) / std::sqrt(m + 1.0);
  weights.amplitudes.assign(m_count + 1, {0.0, -uniform});
  weights.amplitudes[0] = {std::cos(weights.t), -uniform};
  return weights;
}

double euclidean_probability(const SparseVector& u, std::span<const SparseVector> cluster) {
  if (cluster.empty()) throw std::domain_error("cluster must be nonempty");
  require_unit(u, "test");
  for (const SparseVector& v : cluster) require_unit(v, "cluster");
  auto mean = dense_mean(cluster);
  if (u.dimension() != mean.size())
    throw std::invalid_argument("cluster vectors must share one dimension");
  for (const SparseEntry& e : u.entries()) mean[e.index - 1] -= std::polar(e.magnitude, e.phase);
  double dist_sq = 0.0;
  for (const auto& c : mean) dist_sq += std::norm(c);
  ClusterScale scale = cluster_scale(&u, cluster);
  double a = dist_sq / (4.0 * static_cast<double>(scale.sparsity) * scale.r_max * scale.r_max);
  return std::clamp(a, 0.0, 1.0);
}

double intra_cluster_variance_probability(std::span<const SparseVector> cluster) {
  if (cluster.empty()) throw std::domain_error("cluster must be nonempty");
  auto mean = dense_mean(cluster);
  double sigma = 0.0;
  for (const SparseVector& v : cluster) {
    double dev = 0.0;
    auto dense = v.to_dense();
    for (std::size_t i = 0; i < mean.size(); ++i) dev += std::norm(dense[i] - mean[i]);
    sigma += dev;
  }
  sigma /= static_cast<double>(cluster.size());
  ClusterScale scale = cluster_scale(nullptr, cluster);
  double a = sigma / (4.0 * static_cast<double>(scale.sparsity) * scale.r_max * scale.r_max);
  return std::clamp(a, 0.0, 1.0);
}

double statevector_swap_test(const SparseVector& u, const SparseVector& v,
                             std::uint64_t max_qubits) {
  require_unit(u, "test");
  require_unit(v, "training");
  if (u.dimension() != v.dimension())
    throw std::invalid_argument("swap test requires matching dimensions");
  if (u.declared_sparsity() != v.declared_sparsity())
    throw std::invalid_argument("swap test requires a shared declared sparsity");
  const std::uint64_t index_bits = ceil_log2(u.dimension());
  const std::uint64_t sub_bits = index_bits + 2;
  const std::uint64_t qubits = 1 + 2 * sub_bits;
  if (qubits > max_qubits) throw std::length_error("register too large");

  auto psi = build_substate(v, false, index_bits);
  auto phi = build_substate(u, true, index_bits);
  std::vector<std::complex<double>> amps(std::uint64_t{1} << qubits, {0.0, 0.0});
  for (std::uint64_t sp = 0; sp < psi.size(); ++sp) {
    if (psi[sp] == std::complex<double>{0.0, 0.0}) continue;
    for (std::uint64_t sq = 0; sq < phi.size(); ++sq)
      amps[(sp << sub_bits) | sq] = psi[sp] * phi[sq];
  }
  Statevector state(qubits, std::move(amps));
  const std::uint64_t control = 2 * sub_bits;
  state.apply_hadamard(control);
  for (std::uint64_t q = 0; q < sub_bits; ++q) state.apply_cswap(control, sub_bits + q, q);
  state.apply_hadamard(control);
  return state.probability_zero(control);
}

SwapTestValidation statevector_validate(const SparseVector& u, const SparseVector& v,
                                        std::uint64_t max_qubits) {
  SwapTestValidation report;
  report.qubits = 1 + 2 * (ceil_log2(u.dimension()) + 2);
  report.analytic = swap_test_probability(u, v);
  report.statevector = statevector_swap_test(u, v, max_qubits);
  report.difference = std::abs(report.analytic - report.statevector);
  report.agrees = report.difference <= kProbabilityTolerance;
  return report;
}

}  // namespace qnn
