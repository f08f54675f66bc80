#include "qnn/amplitude_estimation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qnn {

namespace {

using std::numbers::pi;

constexpr std::uint64_t kMaxRegisterSize = std::uint64_t{1} << 24;

/// Squared normalized phase-estimation kernel (sin(pi R s)/(R sin(pi s)))^2,
/// evaluated at the wrapped offset s so values at integer delta are exact.
double kernel(double delta, std::uint64_t register_size) {
  double s = delta - std::round(delta);
  if (s == 0.0) return 1.0;
  double r = static_cast<double>(register_size);
  double num = std::sin(pi * r * s);
  double den = r * std::sin(pi * s);
  double q = num / den;
  return q * q;
}

double binomial_tail_geq(std::uint64_t n, double p, std::uint64_t m) {
  if (m == 0) return 1.0;
  if (m > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  double log_p = std::log(p);
  double log_q = std::log1p(-p);
  double tail = 0.0;
  for (std::uint64_t j = m; j <= n; ++j) {
    double log_term = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(j) + 1.0) -
                      std::lgamma(static_cast<double>(n - j) + 1.0) +
                      static_cast<double>(j) * log_p + static_cast<double>(n - j) * log_q;
    tail += std::exp(log_term);
  }
  return std::min(1.0, tail);
}

std::uint64_t lower_median_rank(std::uint64_t k) { return (k + 1) / 2; }

}  // namespace

void AEConfig::validate() const {
  if (register_size < 1) throw std::invalid_argument("register size must be at least 1");
  if (median_copies < 1) throw std::invalid_argument("median copies must be at least 1");
  if (!(a0 > 0.5) || a0 > 1.0) throw std::invalid_argument("a0 must lie in (1/2, 1]");
}

AeDistribution::AeDistribution(double a, std::uint64_t register_size)
    : a_(a), register_size_(register_size) {
  if (!(a >= 0.0) || a > 1.0) throw std::domain_error("amplitude must lie in [0, 1]");
  if (register_size < 1) throw std::invalid_argument("register size must be at least 1");

  probabilities_.assign(register_size_, 0.0);
  if (a == 0.0) {
    probabilities_[0] = 1.0;
  } else if (a == 1.0 && register_size_ % 2 == 0) {
    probabilities_[register_size_ / 2] = 1.0;
  } else {
    double theta_over_pi = std::asin(std::sqrt(a)) / pi;
    double r = static_cast<double>(register_size_);
    for (std::uint64_t y = 0; y < register_size_; ++y) {
      double grid = static_cast<double>(y) / r;
      probabilities_[y] =
          0.5 * (kernel(grid - theta_over_pi, register_size_) +
                 kernel(grid + theta_over_pi, register_size_));
    }
  }

  cdf_.resize(register_size_);
  double acc = 0.0;
  for (std::uint64_t y = 0; y < register_size_; ++y) {
    acc += probabilities_[y];
    cdf_[y] = acc;
  }

  folded_.assign(folded_size(), 0.0);
  for (std::uint64_t y = 0; y < register_size_; ++y) folded_[fold(y)] += probabilities_[y];
  folded_cdf_.resize(folded_.size());
  acc = 0.0;
  for (std::size_t i = 0; i < folded_.size(); ++i) {
    acc += folded_[i];
    folded_cdf_[i] = acc;
  }

  mode_ = 0;
  for (std::size_t i = 1; i < folded_.size(); ++i)
    if (folded_[i] > folded_[mode_]) mode_ = i;
  lo_ = mode_ > 0 ? mode_ - 1 : 0;
  hi_ = std::min<std::uint64_t>(folded_.size() - 1, mode_ + 1);
  admissible_mass_ = 0.0;
  for (std::uint64_t i = lo_; i <= hi_; ++i) admissible_mass_ += folded_[i];
  admissible_mass_ = std::min(1.0, admissible_mass_);
}

std::uint64_t AeDistribution::sample(RngStream& rng) const {
  double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return register_size_ - 1;
  return static_cast<std::uint64_t>(it - cdf_.begin());
}

double AeDistribution::estimate_of(std::uint64_t y) const {
  double s = std::sin(pi * static_cast<double>(y) / static_cast<double>(register_size_));
  return s * s;
}

double AeDistribution::median_fidelity(std::uint64_t median_copies) const {
  std::uint64_t m = lower_median_rank(median_copies);
  double p_hi = folded_cdf_[hi_];
  double p_lo = lo_ > 0 ? folded_cdf_[lo_ - 1] : 0.0;
  double fidelity =
      binomial_tail_geq(median_copies, p_hi, m) - binomial_tail_geq(median_copies, p_lo, m);
  return std::clamp(fidelity, 0.0, 1.0);
}

std::vector<double> ae_outcome_distribution(double a, std::uint64_t register_size) {
  return AeDistribution(a, register_size).probabilities();
}

AEOutcome sample_ae(RngStream& rng, const AeDistribution& dist, QueryLedger& ledger,
                    QueryCost cost) {
  ledger.charge(kPhaseAmplitudeEstimation, cost.scaled(dist.register_size()));
  AEOutcome outcome;
  outcome.y = dist.sample(rng);
  outcome.a_hat = dist.estimate_of(outcome.y);
  outcome.true_a = dist.a();
  outcome.median_fidelity = dist.admissible_mass();
  return outcome;
}

AEOutcome sample_ae(RngStream& rng, double a, std::uint64_t register_size, QueryLedger& ledger,
                    QueryCost cost) {
  return sample_ae(rng, AeDistribution(a, register_size), ledger, cost);
}

AEOutcome coherent_ae(RngStream& rng, const AeDistribution& dist, std::uint64_t median_copies,
                      QueryLedger& ledger, QueryCost cost) {
  if (median_copies < 1) throw std::invalid_argument("median copies must be at least 1");
  ledger.charge(kPhaseAmplitudeEstimation,
                cost.scaled(2 * median_copies * dist.register_size()));
  std::vector<std::uint64_t> folded(median_copies);
  for (auto& value : folded) value = dist.fold(dist.sample(rng));
  std::sort(folded.begin(), folded.end());
  AEOutcome outcome;
  outcome.y = folded[lower_median_rank(median_copies) - 1];
  outcome.a_hat = dist.estimate_of(outcome.y);
  outcome.true_a = dist.a();
  outcome.median_fidelity = dist.median_fidelity(median_copies);
  return outcome;
}

AEOutcome coherent_ae(RngStream& rng, double a, std::uint64_t register_size,
                      std::uint64_t median_copies, QueryLedger& ledger, QueryCost cost) {
  return coherent_ae(rng, AeDistribution(a, register_size), median_copies, ledger, cost);
}

double register_size_bound(double epsilon, std::uint64_t sparsity, double r_0max, double r_jmax,
                           AeMethod method) {
  if (!(epsilon > 0.0)) throw std::domain_error("epsilon must be positive");
  double d = static_cast<double>(sparsity);
  double raw = 0.0;
  if (method == AeMethod::kInnerProduct) {
    raw = 4.0 * pi * (pi + 1.0) * d * d * r_0max * r_0max * r_jmax * r_jmax / epsilon;
  } else {
    double r = std::max(r_0max, r_jmax);
    raw = 8.0 * pi * (pi + 1.0) * d * r * r / epsilon;
  }
  return std::max(1.0, std::ceil(raw));
}

std::uint64_t required_register_size(double epsilon, std::uint64_t sparsity, double r_0max,
                                     double r_jmax, AeMethod method) {
  double size = register_size_bound(epsilon, sparsity, r_0max, r_jmax, method);
  if (size > static_cast<double>(kMaxRegisterSize))
    throw std::invalid_argument("tolerance demands an impractically large register");
  return static_cast<std::uint64_t>(size);
}

std::uint64_t median_copies_for(double delta, double a0) {
  if (!(delta > 0.0) || delta >= 1.0) throw std::domain_error("delta must lie in (0, 1)");
  if (!(a0 > 0.5) || a0 > 1.0) throw std::invalid_argument("a0 must lie in (1/2, 1]");
  double gap = a0 - 0.5;
  double k = std::ceil(std::log(1.0 / delta) / (2.0 * gap * gap));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(k));
}

double hoeffding_failure_bound(std::uint64_t median_copies, double p) {
  double gap = p - 0.5;
  return std::exp(-2.0 * static_cast<double>(median_copies) * gap * gap);
}

std::shared_ptr<const AeDistribution> AeDistributionCache::get(double a,
                                                               std::uint64_t register_size) {
  std::pair<std::uint64_t, std::uint64_t> key{register_size, std::bit_cast<std::uint64_t>(a)};
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  auto dist = std::make_shared<const AeDistribution>(a, register_size);
  entries_.emplace(key, dist);
  return dist;
}

}  // namespace qnn
