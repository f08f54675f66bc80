#include "qnn/sparse_vector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qnn {

namespace {

constexpr double kUnitTolerance = 1e-12;

}  // namespace

SparseVector::SparseVector(std::uint64_t dimension, std::vector<SparseEntry> entries,
                           std::uint64_t declared_sparsity, double r_max) {
  if (dimension == 0) throw std::invalid_argument("dimension must be positive");
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  std::vector<SparseEntry> kept;
  kept.reserve(entries.size());
  for (const SparseEntry& e : entries) {
    if (e.index < 1 || e.index > dimension) throw std::invalid_argument("entry index out of range");
    if (e.magnitude < 0.0) throw std::invalid_argument("entry magnitude must be nonnegative");
    if (!kept.empty() && kept.back().index == e.index)
      throw std::invalid_argument("duplicate entry index");
    if (e.magnitude == 0.0) continue;
    kept.push_back(e);
  }
  if (declared_sparsity == 0) declared_sparsity = std::max<std::uint64_t>(1, kept.size());
  if (declared_sparsity < kept.size() || declared_sparsity > dimension)
    throw std::invalid_argument("declared sparsity must cover the support and fit the dimension");
  double max_mag = 0.0;
  for (const SparseEntry& e : kept) max_mag = std::max(max_mag, e.magnitude);
  if (r_max == 0.0) r_max = max_mag > 0.0 ? max_mag : 1.0;
  if (r_max <= 0.0 || r_max + kUnitTolerance < max_mag)
    throw std::invalid_argument("r_max must be positive and bound every entry magnitude");
  dimension_ = dimension;
  entries_ = std::move(kept);
  declared_sparsity_ = declared_sparsity;
  r_max_ = r_max;
}

SparseVector SparseVector::from_dense(std::span<const double> values, double zero_threshold) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double x = values[i];
    if (std::abs(x) <= zero_threshold) continue;
    entries.push_back({i + 1, std::abs(x), x < 0.0 ? std::numbers::pi : 0.0});
  }
  return SparseVector(std::max<std::uint64_t>(1, values.size()), std::move(entries));
}

SparseVector SparseVector::from_dense(std::span<const std::complex<double>> values,
                                      double zero_threshold) {
  std::vector<SparseEntry> entries;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double r = std::abs(values[i]);
    if (r <= zero_threshold) continue;
    entries.push_back({i + 1, r, std::arg(values[i])});
  }
  return SparseVector(std::max<std::uint64_t>(1, values.size()), std::move(entries));
}

std::complex<double> SparseVector::component(std::uint64_t index) const {
  if (index < 1 || index > dimension_) throw std::out_of_range("component index out of range");
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const SparseEntry& e, std::uint64_t i) { return e.index < i; });
  if (it == entries_.end() || it->index != index) return {0.0, 0.0};
  return std::polar(it->magnitude, it->phase);
}

std::uint64_t SparseVector::support_index(std::uint64_t ell) const {
  if (ell < 1 || ell > declared_sparsity_) throw std::out_of_range("support slot out of range");
  if (entries_.empty()) return 1;
  if (ell > entries_.size()) return entries_.back().index;
  return entries_[ell - 1].index;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const SparseEntry& e : entries_) s += e.magnitude * e.magnitude;
  return std::sqrt(s);
}

bool SparseVector::is_unit() const {
  double s = 0.0;
  for (const SparseEntry& e : entries_) s += e.magnitude * e.magnitude;
  return std::abs(s - 1.0) <= kUnitTolerance;
}

SparseVector SparseVector::normalized() const {
  double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize a zero vector");
  SparseVector out = *this;
  for (SparseEntry& e : out.entries_) e.magnitude /= n;
  out.r_max_ = r_max_ / n;
  out.original_norm_ = original_norm_ * n;
  return out;
}

SparseVector SparseVector::with_sparsity(std::uint64_t declared) const {
  if (declared < entries_.size() || declared == 0 || declared > dimension_)
    throw std::invalid_argument("declared sparsity must cover the support and fit the dimension");
  SparseVector out = *this;
  out.declared_sparsity_ = declared;
  return out;
}

SparseVector SparseVector::with_r_max(double bound) const {
  double max_mag = 0.0;
  for (const SparseEntry& e : entries_) max_mag = std::max(max_mag, e.magnitude);
  if (bound <= 0.0 || bound + kUnitTolerance < max_mag)
    throw std::invalid_argument("r_max must be positive and bound every entry magnitude");
  SparseVector out = *this;
  out.r_max_ = bound;
  return out;
}

std::vector<std::complex<double>> SparseVector::to_dense() const {
  std::vector<std::complex<double>> out(dimension_, {0.0, 0.0});
  for (const SparseEntry& e : entries_) out[e.index - 1] = std::polar(e.magnitude, e.phase);
  return out;
}

std::complex<double> inner_product(const SparseVector& a, const SparseVector& b) {
  if (a.dimension() != b.dimension())
    throw std::invalid_argument("inner product requires matching dimensions");
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::complex<double> acc{0.0, 0.0};
  std::size_t i = 0, j = 0;
  while (i < ea.size() && j < eb.size()) {
    if (ea[i].index < eb[j].index) {
      ++i;
    } else if (ea[i].index > eb[j].index) {
      ++j;
    } else {
      acc += std::conj(std::polar(ea[i].magnitude, ea[i].phase)) *
             std::polar(eb[j].magnitude, eb[j].phase);
      ++i;
      ++j;
    }
  }
  return acc;
}

double distance_sq(const SparseVector& a, const SparseVector& b) {
  double na = a.norm();
  double nb = b.norm();
  double cross = 2.0 * inner_product(a, b).real();
  return std::max(0.0, na * na + nb * nb - cross);
}

}  // namespace qnn
