#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include "qnn/query_ledger.hpp"
#include "qnn/training_set.hpp"

namespace qnn {

inline constexpr const char* kPhaseDirect = "direct";

/// Black-box component access over a training set. Index j = 0 addresses the
/// test vector, j in [1..M] the training vectors. Every query is charged to
/// the supplied ledger under the given phase label.
class DataOracle {
 public:
  explicit DataOracle(TrainingSet data) : data_(std::move(data)) {}

  const TrainingSet& data() const { return data_; }
  std::uint64_t vector_count() const { return data_.size(); }
  std::uint64_t dimension() const { return data_.dimension(); }

  /// Returns component i of vector j (0 outside the support); one O query.
  std::complex<double> query_o(QueryLedger& ledger, std::uint64_t j, std::uint64_t i,
                               const std::string& phase = kPhaseDirect) const;

  /// Returns the index of the ell-th nonzero entry of vector j, repeating the
  /// last support index past the true support; one F query.
  std::uint64_t query_f(QueryLedger& ledger, std::uint64_t j, std::uint64_t ell,
                        const std::string& phase = kPhaseDirect) const;

  /// Uncharged structural access for the simulator side.
  const SparseVector& vector(std::uint64_t j) const { return data_.vector_at(j); }

 private:
  TrainingSet data_;
};

}  // namespace qnn
