#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qnn/oracle.hpp"
#include "qnn/query_ledger.hpp"
#include "qnn/sparse_vector.hpp"

namespace qnn {

/// One index branch of a prepared density state: the pair multiplying |0> and
/// |1> on the component qubit.
struct BranchAmplitudes {
  std::uint64_t index = 0;
  std::complex<double> rest_amplitude;
  std::complex<double> value_amplitude;
};

/// Half of the swap-test input pair. The flag qubit sits after the component
/// qubit for training-vector states and before it for the test-vector state;
/// the asymmetry confines the swap-test overlap to the component branches.
struct PreparedState {
  std::vector<BranchAmplitudes> branches;
  bool flag_before_value = false;
  std::uint64_t declared_sparsity = 1;
  double r_max = 1.0;
};

struct PreparedStatePair {
  PreparedState psi;
  PreparedState phi;
};

/// Uniform rotation weights used by the centroid-distance circuit.
struct VWeights {
  std::uint64_t m_count = 1;
  double t = 0.0;
  std::vector<std::complex<double>> amplitudes;
};

/// Emits the branch amplitudes of vector j's density state; charges 2 O + 1 F.
PreparedState prepare_density_state(const DataOracle& oracle, QueryLedger& ledger,
                                    std::uint64_t j);

/// Probability of measuring 0 when swap-testing the prepared states of u and v.
double swap_test_probability(const SparseVector& u, const SparseVector& v);

/// Inverts the swap-test relation: (2a-1) d^2 r_0max^2 r_jmax^2.
double recover_inner_product_sq(double a, std::uint64_t sparsity, double r_0max, double r_jmax);

/// Maps v to (|0>|0...0> + |1>|v>)/sqrt(2) in dimension 2N, so the swap test
/// sees the signed inner product through the cosine distance.
SparseVector sign_recovering_embed(const SparseVector& v);

/// First column of the centroid-weighting unitary for M training vectors.
VWeights synthesize_v(std::uint64_t m_count);

/// Success amplitude of the centroid-distance circuit: |u - mean|^2/(4 d r_max^2).
double euclidean_probability(const SparseVector& u, std::span<const SparseVector> cluster);

/// Success amplitude of the variance circuit: sigma_m/(4 d r_max^2) with
/// sigma_m the mean squared member-to-centroid distance.
double intra_cluster_variance_probability(std::span<const SparseVector> cluster);

/// P(0) of the explicit swap-test circuit simulated on a dense register.
double statevector_swap_test(const SparseVector& u, const SparseVector& v,
                             std::uint64_t max_qubits = 16);

struct SwapTestValidation {
  double analytic = 0.0;
  double statevector = 0.0;
  double difference = 0.0;
  std::uint64_t qubits = 0;
  bool agrees = false;
};

/// Cross-checks the analytic swap-test probability against the dense circuit.
SwapTestValidation statevector_validate(const SparseVector& u, const SparseVector& v,
                                        std::uint64_t max_qubits = 16);

}  // namespace qnn
