#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace qnn {

struct QueryCounts {
  std::uint64_t o = 0;
  std::uint64_t f = 0;

  QueryCounts& operator+=(const QueryCounts& rhs) {
    o += rhs.o;
    f += rhs.f;
    return *this;
  }
  friend QueryCounts operator+(QueryCounts a, const QueryCounts& b) { return a += b; }
  friend bool operator==(const QueryCounts&, const QueryCounts&) = default;

  std::uint64_t total() const { return o + f; }
};

inline constexpr const char* kPhaseStatePrep = "state_prep";
inline constexpr const char* kPhaseAmplitudeEstimation = "amplitude_estimation";
inline constexpr const char* kPhaseGroverIteration = "grover_iteration";

class QueryLedger {
 public:
  void charge(const std::string& phase, QueryCounts counts);
  void charge_o(const std::string& phase, std::uint64_t n = 1) { charge(phase, {n, 0}); }
  void charge_f(const std::string& phase, std::uint64_t n = 1) { charge(phase, {0, n}); }

  std::uint64_t o_queries() const { return totals_.o; }
  std::uint64_t f_queries() const { return totals_.f; }
  std::uint64_t total() const { return totals_.total(); }
  const std::map<std::string, QueryCounts>& phase_breakdown() const { return phases_; }

  void merge(const QueryLedger& other);

 private:
  QueryCounts totals_;
  std::map<std::string, QueryCounts> phases_;
};

QueryLedger merge_ledgers(const QueryLedger& a, const QueryLedger& b);

}  // namespace qnn
