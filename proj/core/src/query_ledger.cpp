#include "qnn/query_ledger.hpp"

namespace qnn {

void QueryLedger::charge(const std::string& phase, QueryCounts counts) {
  totals_ += counts;
  phases_[phase] += counts;
}

void QueryLedger::merge(const QueryLedger& other) {
  totals_ += other.totals_;
  for (const auto& [phase, counts] : other.phases_) phases_[phase] += counts;
}

QueryLedger merge_ledgers(const QueryLedger& a, const QueryLedger& b) {
  QueryLedger out = a;
  out.merge(b);
  return out;
}

}  // namespace qnn
