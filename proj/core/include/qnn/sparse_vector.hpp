#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qnn {

struct SparseEntry {
  std::uint64_t index = 0;
  double magnitude = 0.0;
  double phase = 0.0;
};

class SparseVector {
 public:
  SparseVector() = default;
  SparseVector(std::uint64_t dimension, std::vector<SparseEntry> entries,
               std::uint64_t declared_sparsity = 0, double r_max = 0.0);

  static SparseVector from_dense(std::span<const double> values, double zero_threshold = 0.0);
  static SparseVector from_dense(std::span<const std::complex<double>> values,
                                 double zero_threshold = 0.0);

  std::uint64_t dimension() const { return dimension_; }
  std::uint64_t declared_sparsity() const { return declared_sparsity_; }
  double r_max() const { return r_max_; }
  std::uint64_t support_size() const { return static_cast<std::uint64_t>(entries_.size()); }
  const std::vector<SparseEntry>& entries() const { return entries_; }

  std::complex<double> component(std::uint64_t index) const;
  std::uint64_t support_index(std::uint64_t ell) const;

  double norm() const;
  bool is_unit() const;
  SparseVector normalized() const;
  double original_norm() const { return original_norm_; }

  SparseVector with_sparsity(std::uint64_t declared) const;
  SparseVector with_r_max(double bound) const;

  std::vector<std::complex<double>> to_dense() const;

 private:
  std::uint64_t dimension_ = 1;
  std::vector<SparseEntry> entries_;
  std::uint64_t declared_sparsity_ = 1;
  double r_max_ = 1.0;
  double original_norm_ = 1.0;
};

std::complex<double> inner_product(const SparseVector& a, const SparseVector& b);
double distance_sq(const SparseVector& a, const SparseVector& b);

}  // namespace qnn
