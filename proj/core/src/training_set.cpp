#include "qnn/training_set.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qnn {

TrainingSet::TrainingSet(SparseVector test_vector, std::vector<LabeledVector> vectors)
    : TrainingSet(std::move(test_vector), std::move(vectors), {}) {}

TrainingSet::TrainingSet(SparseVector test_vector, std::vector<LabeledVector> vectors,
                         std::vector<std::vector<std::uint64_t>> clusters)
    : test_vector_(std::move(test_vector)),
      vectors_(std::move(vectors)),
      clusters_(std::move(clusters)) {
  if (vectors_.empty()) throw std::invalid_argument("training set must be nonempty");
  for (const LabeledVector& lv : vectors_) {
    if (lv.vector.dimension() != test_vector_.dimension())
      throw std::invalid_argument("all vectors must share one dimension");
  }
  if (clusters_.empty()) return;
  std::vector<bool> seen(vectors_.size(), false);
  std::uint64_t covered = 0;
  for (const auto& members : clusters_) {
    if (members.empty()) throw std::invalid_argument("clusters must be nonempty");
    for (std::uint64_t idx : members) {
      if (idx >= vectors_.size()) throw std::invalid_argument("cluster member index out of range");
      if (seen[idx]) throw std::invalid_argument("cluster member listed twice");
      seen[idx] = true;
      ++covered;
    }
  }
  if (covered != vectors_.size())
    throw std::invalid_argument("clusters must partition the training set");
}

const SparseVector& TrainingSet::vector_at(std::uint64_t j) const {
  if (j == 0) return test_vector_;
  if (j > vectors_.size()) throw std::out_of_range("vector index out of range");
  return vectors_[j - 1].vector;
}

int TrainingSet::label_at(std::uint64_t j) const {
  if (j == 0 || j > vectors_.size()) throw std::out_of_range("vector index out of range");
  return vectors_[j - 1].label;
}

const std::vector<std::uint64_t>& TrainingSet::cluster(std::uint64_t m) const {
  if (m >= clusters_.size()) throw std::out_of_range("cluster index out of range");
  return clusters_[m];
}

int TrainingSet::cluster_label(std::uint64_t m) const {
  const auto& members = cluster(m);
  std::map<int, std::uint64_t> votes;
  for (std::uint64_t idx : members) ++votes[vectors_[idx].label];
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

std::vector<SparseVector> TrainingSet::cluster_vectors(std::uint64_t m) const {
  const auto& members = cluster(m);
  std::vector<SparseVector> out;
  out.reserve(members.size());
  for (std::uint64_t idx : members) out.push_back(vectors_[idx].vector);
  return out;
}

std::uint64_t TrainingSet::shared_sparsity() const {
  std::uint64_t d = test_vector_.declared_sparsity();
  for (const LabeledVector& lv : vectors_) d = std::max(d, lv.vector.declared_sparsity());
  return d;
}

double TrainingSet::max_r_max() const {
  double r = test_vector_.r_max();
  for (const LabeledVector& lv : vectors_) r = std::max(r, lv.vector.r_max());
  return r;
}

TrainingSet TrainingSet::harmonized() const {
  std::uint64_t d = shared_sparsity();
  std::vector<LabeledVector> vectors;
  vectors.reserve(vectors_.size());
  for (const LabeledVector& lv : vectors_)
    vectors.push_back({lv.vector.with_sparsity(d), lv.label});
  return TrainingSet(test_vector_.with_sparsity(d), std::move(vectors), clusters_);
}

}  // namespace qnn
