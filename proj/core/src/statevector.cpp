#include "qnn/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qnn {

namespace {

constexpr std::uint64_t kMaxQubits = 26;

}  // namespace

Statevector::Statevector(std::uint64_t qubit_count) : qubit_count_(qubit_count) {
  if (qubit_count > kMaxQubits) throw std::length_error("register too large");
  amplitudes_.assign(std::uint64_t{1} << qubit_count, {0.0, 0.0});
  amplitudes_[0] = {1.0, 0.0};
}

Statevector::Statevector(std::uint64_t qubit_count, std::vector<std::complex<double>> amplitudes)
    : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {
  if (qubit_count > kMaxQubits) throw std::length_error("register too large");
  if (amplitudes_.size() != (std::uint64_t{1} << qubit_count))
    throw std::invalid_argument("amplitude count must be 2^qubits");
}

void Statevector::check_qubit(std::uint64_t qubit) const {
  if (qubit >= qubit_count_) throw std::out_of_range("qubit index out of range");
}

void Statevector::apply_hadamard(std::uint64_t qubit) {
  check_qubit(qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (std::uint64_t idx = 0; idx < amplitudes_.size(); ++idx) {
    if (idx & bit) continue;
    std::complex<double> lo = amplitudes_[idx];
    std::complex<double> hi = amplitudes_[idx | bit];
    amplitudes_[idx] = (lo + hi) * inv_sqrt2;
    amplitudes_[idx | bit] = (lo - hi) * inv_sqrt2;
  }
}

void Statevector::apply_cswap(std::uint64_t control, std::uint64_t a, std::uint64_t b) {
  check_qubit(control);
  check_qubit(a);
  check_qubit(b);
  if (control == a || control == b || a == b)
    throw std::invalid_argument("cswap qubits must be distinct");
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t abit = std::uint64_t{1} << a;
  const std::uint64_t bbit = std::uint64_t{1} << b;
  for (std::uint64_t idx = 0; idx < amplitudes_.size(); ++idx) {
    if (!(idx & cbit)) continue;
    if (!(idx & abit) || (idx & bbit)) continue;
    std::uint64_t partner = (idx & ~abit) | bbit;
    std::swap(amplitudes_[idx], amplitudes_[partner]);
  }
}

double Statevector::probability_zero(std::uint64_t qubit) const {
  check_qubit(qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  double p = 0.0;
  for (std::uint64_t idx = 0; idx < amplitudes_.size(); ++idx) {
    if (idx & bit) continue;
    p += std::norm(amplitudes_[idx]);
  }
  return p;
}

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& amp : amplitudes_) s += std::norm(amp);
  return std::sqrt(s);
}

}  // namespace qnn
