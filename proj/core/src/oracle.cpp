#include "qnn/oracle.hpp"

namespace qnn {

std::complex<double> DataOracle::query_o(QueryLedger& ledger, std::uint64_t j, std::uint64_t i,
                                         const std::string& phase) const {
  const SparseVector& v = data_.vector_at(j);
  std::complex<double> value = v.component(i);
  ledger.charge_o(phase);
  return value;
}

std::uint64_t DataOracle::query_f(QueryLedger& ledger, std::uint64_t j, std::uint64_t ell,
                                  const std::string& phase) const {
  const SparseVector& v = data_.vector_at(j);
  std::uint64_t index = v.support_index(ell);
  ledger.charge_f(phase);
  return index;
}

}  // namespace qnn
