#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace qnn {

/// Dense statevector over a small qubit register. Qubit q maps to bit q of the
/// amplitude index (qubit 0 is the least significant bit).
class Statevector {
 public:
  explicit Statevector(std::uint64_t qubit_count);
  Statevector(std::uint64_t qubit_count, std::vector<std::complex<double>> amplitudes);

  std::uint64_t qubit_count() const { return qubit_count_; }
  std::uint64_t dimension() const { return static_cast<std::uint64_t>(amplitudes_.size()); }
  const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }

  void apply_hadamard(std::uint64_t qubit);
  void apply_cswap(std::uint64_t control, std::uint64_t a, std::uint64_t b);

  double probability_zero(std::uint64_t qubit) const;
  double norm() const;

 private:
  void check_qubit(std::uint64_t qubit) const;

  std::uint64_t qubit_count_ = 0;
  std::vector<std::complex<double>> amplitudes_;
};

}  // namespace qnn
