#pragma once

#include <cstdint>
#include <vector>

#include "qnn/sparse_vector.hpp"

namespace qnn {

struct LabeledVector {
  SparseVector vector;
  int label = 0;
};

class TrainingSet {
 public:
  TrainingSet(SparseVector test_vector, std::vector<LabeledVector> vectors);
  TrainingSet(SparseVector test_vector, std::vector<LabeledVector> vectors,
              std::vector<std::vector<std::uint64_t>> clusters);

  const SparseVector& test_vector() const { return test_vector_; }
  const std::vector<LabeledVector>& vectors() const { return vectors_; }
  std::uint64_t size() const { return static_cast<std::uint64_t>(vectors_.size()); }
  std::uint64_t dimension() const { return test_vector_.dimension(); }

  const SparseVector& vector_at(std::uint64_t j) const;
  int label_at(std::uint64_t j) const;

  bool has_clusters() const { return !clusters_.empty(); }
  std::uint64_t cluster_count() const { return static_cast<std::uint64_t>(clusters_.size()); }
  const std::vector<std::uint64_t>& cluster(std::uint64_t m) const;
  int cluster_label(std::uint64_t m) const;
  std::vector<SparseVector> cluster_vectors(std::uint64_t m) const;

  std::uint64_t shared_sparsity() const;
  double max_r_max() const;
  TrainingSet harmonized() const;

 private:
  SparseVector test_vector_;
  std::vector<LabeledVector> vectors_;
  std::vector<std::vector<std::uint64_t>> clusters_;
};

}  // namespace qnn
