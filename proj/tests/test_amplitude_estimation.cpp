#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qnn/amplitude_estimation.hpp"
#include "qnn/rng.hpp"

using namespace qnn;

namespace {

// Reference distribution built the long way: phase estimation of the Grover
// walk splits evenly between the e^{+2i theta} and e^{-2i theta} eigenvectors,
// and each contributes the squared magnitude of a literal geometric sum.
std::vector<double> phase_estimation_reference(double a, std::uint64_t r) {
  double theta = std::asin(std::sqrt(a));
  std::vector<double> probs(r, 0.0);
  for (std::uint64_t y = 0; y < r; ++y) {
    for (double sign : {1.0, -1.0}) {
      std::complex<double> sum{0.0, 0.0};
      double delta = static_cast<double>(y) / static_cast<double>(r) -
                     sign * theta / std::numbers::pi;
      for (std::uint64_t j = 0; j < r; ++j) {
        double angle = 2.0 * std::numbers::pi * static_cast<double>(j) * delta;
        sum += std::complex<double>(std::cos(angle), std::sin(angle));
      }
      probs[y] += 0.5 * std::norm(sum / static_cast<double>(r));
    }
  }
  return probs;
}

double theorem_error_bound(double a, std::uint64_t r) {
  double rd = static_cast<double>(r);
  return 2.0 * std::numbers::pi * std::sqrt(a * (1.0 - a)) / rd +
         std::numbers::pi * std::numbers::pi / (rd * rd);
}

}  // namespace

TEST_CASE("outcome distribution matches the literal phase-estimation sum") {
  double grid_aligned = std::sin(std::numbers::pi * 3.0 / 16.0);
  grid_aligned *= grid_aligned;
  struct Case {
    double a;
    std::uint64_t r;
  };
  for (Case c : {Case{0.1, 16}, Case{0.25, 64}, Case{0.3, 7}, Case{grid_aligned, 16},
                 Case{0.736, 33}}) {
    std::vector<double> reference = phase_estimation_reference(c.a, c.r);
    std::vector<double> produced = ae_outcome_distribution(c.a, c.r);
    REQUIRE(produced.size() == c.r);
    double mass = 0.0;
    for (std::uint64_t y = 0; y < c.r; ++y) {
      CHECK(produced[y] == doctest::Approx(reference[y]).epsilon(1e-10));
      mass += produced[y];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(ae_outcome_distribution(-0.1, 8), std::domain_error);
  CHECK_THROWS_AS(ae_outcome_distribution(1.1, 8), std::domain_error);
}

TEST_CASE("certainty branches at the amplitude extremes") {
  std::vector<double> zero = ae_outcome_distribution(0.0, 16);
  CHECK(zero[0] == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> one = ae_outcome_distribution(1.0, 16);
  CHECK(one[8] == doctest::Approx(1.0).epsilon(1e-12));

  RngStream rng(5);
  QueryLedger ledger;
  for (int i = 0; i < 20; ++i) {
    AEOutcome out = sample_ae(rng, 0.0, 16, ledger, kDistanceQueryCost);
    CHECK(out.y == 0);
    CHECK(out.a_hat == 0.0);
  }
}

TEST_CASE("grid-aligned amplitude concentrates on its two mirror outcomes") {
  double a = std::sin(std::numbers::pi * 3.0 / 16.0);
  a *= a;
  AeDistribution dist(a, 16);
  const auto& p = dist.probabilities();
  CHECK(p[3] + p[13] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(dist.estimate_of(3) == doctest::Approx(a).epsilon(1e-12));
  CHECK(dist.estimate_of(13) == doctest::Approx(a).epsilon(1e-12));
  CHECK(dist.fold(13) == 3);
}

TEST_CASE("estimates are the squared grid sines, symmetric under reflection") {
  AeDistribution dist(0.3, 32);
  for (std::uint64_t y = 0; y < 32; ++y) {
    double expected = std::sin(std::numbers::pi * static_cast<double>(y) / 32.0);
    expected *= expected;
    CHECK(dist.estimate_of(y) == doctest::Approx(expected).epsilon(1e-12));
    if (y >= 1) CHECK(dist.estimate_of(32 - y) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("one estimation run charges register-size times the iteration cost") {
  RngStream rng(7);
  QueryLedger ledger;
  sample_ae(rng, 0.25, 64, ledger, kInnerProductQueryCost);
  CHECK(ledger.o_queries() == 64 * 8);
  CHECK(ledger.f_queries() == 64 * 4);
  CHECK(ledger.total() == 768);
}

TEST_CASE("single-run error bound holds at the promised rate") {
  RngStream rng(11);
  QueryLedger ledger;
  double a = 0.25;
  std::uint64_t r = 64;
  double bound = theorem_error_bound(a, r);
  int within = 0;
  int trials = 10000;
  AeDistribution dist(a, r);
  for (int i = 0; i < trials; ++i) {
    AEOutcome out = sample_ae(rng, dist, ledger, kDistanceQueryCost);
    if (std::abs(out.a_hat - a) <= bound) ++within;
  }
  double sigma = std::sqrt(kAeSuccessFloor * (1.0 - kAeSuccessFloor) / trials);
  CHECK(static_cast<double>(within) / trials >= kAeSuccessFloor - 3.0 * sigma);
}

TEST_CASE("median voting returns the folded lower median with doubled charges") {
  AeDistribution dist(0.3, 32);

  RngStream rng_single(13);
  QueryLedger single_ledger;
  AEOutcome single = sample_ae(rng_single, dist, single_ledger, kDistanceQueryCost);
  RngStream rng_coherent(13);
  QueryLedger coherent_ledger;
  AEOutcome coherent = coherent_ae(rng_coherent, dist, 1, coherent_ledger, kDistanceQueryCost);
  CHECK(coherent.a_hat == doctest::Approx(single.a_hat).epsilon(1e-15));
  CHECK(coherent_ledger.total() == 2 * single_ledger.total());

  QueryLedger k5;
  RngStream rng5(17);
  coherent_ae(rng5, dist, 5, k5, kDistanceVarianceQueryCost);
  CHECK(k5.o_queries() == 2 * 5 * 32 * 6);
  CHECK(k5.f_queries() == 2 * 5 * 32 * 4);

  RngStream rngz(19);
  QueryLedger zl;
  AEOutcome zero = coherent_ae(rngz, 0.0, 16, 7, zl, kDistanceQueryCost);
  CHECK(zero.y == 0);
  CHECK(zero.median_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("median fidelity obeys the hoeffding floor and tracks simulation") {
  for (double a : {0.1, 0.25, 0.4, 0.7}) {
    for (std::uint64_t r : {std::uint64_t{16}, std::uint64_t{64}}) {
      AeDistribution dist(a, r);
      double p = dist.admissible_mass();
      REQUIRE(p > 0.5);
      for (std::uint64_t k : {std::uint64_t{1}, std::uint64_t{5}, std::uint64_t{24}}) {
        double fidelity = dist.median_fidelity(k);
        CHECK(fidelity >= 1.0 - hoeffding_failure_bound(k, p) - 1e-12);
        CHECK(fidelity <= 1.0 + 1e-12);
      }
    }
  }

  AeDistribution dist(0.25, 16);
  auto [lo, hi] = dist.admissible_range();
  std::uint64_t k = 5;
  double fidelity = dist.median_fidelity(k);
  RngStream rng(29);
  int in_admissible = 0;
  int trials = 4000;
  for (int t = 0; t < trials; ++t) {
    std::vector<std::uint64_t> folded;
    for (std::uint64_t c = 0; c < k; ++c) folded.push_back(dist.fold(dist.sample(rng)));
    std::sort(folded.begin(), folded.end());
    std::uint64_t median = folded[(k - 1) / 2];
    if (median >= lo && median <= hi) ++in_admissible;
  }
  double rate = static_cast<double>(in_admissible) / trials;
  double sigma = std::sqrt(fidelity * (1.0 - fidelity) / trials) + 1e-6;
  CHECK(std::abs(rate - fidelity) <= 4.0 * sigma + 0.01);
}

TEST_CASE("register sizing matches the ceiling formulas") {
  CHECK(required_register_size(1.0, 1, 1.0, 1.0, AeMethod::kInnerProduct) == 53);
  CHECK(required_register_size(1.0, 1, 1.0, 1.0, AeMethod::kEuclidean) == 105);

  std::uint64_t r1 = required_register_size(0.001, 1, 1.0, 1.0, AeMethod::kInnerProduct);
  std::uint64_t r2 = required_register_size(0.001, 2, 1.0, 1.0, AeMethod::kInnerProduct);
  CHECK(r2 >= 4 * r1 - 3);
  CHECK(r2 <= 4 * r1);

  CHECK(register_size_bound(1.0, 1, 1.0, 1.0, AeMethod::kInnerProduct) == 53.0);
  double huge = register_size_bound(1e-9, 64, 10.0, 10.0, AeMethod::kInnerProduct);
  CHECK(huge == std::ceil(4.0 * std::numbers::pi * (std::numbers::pi + 1.0) * 64.0 * 64.0 *
                          1e4 * 1e9));
  CHECK_THROWS_AS(required_register_size(0.0, 1, 1.0, 1.0, AeMethod::kInnerProduct),
                  std::domain_error);
  CHECK_THROWS_AS(required_register_size(1e-12, 8, 1.0, 1.0, AeMethod::kInnerProduct),
                  std::invalid_argument);
}

TEST_CASE("median copy count reproduces the ceiling arithmetic") {
  CHECK(median_copies_for(0.01) == 24);
  CHECK(median_copies_for(0.5) >= 1);
  double delta = 0.01;
  double by_hand = std::ceil(std::log(1.0 / delta) /
                             (2.0 * (kAeChainedSuccessFloor - 0.5) *
                              (kAeChainedSuccessFloor - 0.5)));
  CHECK(median_copies_for(delta, kAeChainedSuccessFloor) ==
        static_cast<std::uint64_t>(by_hand));
  CHECK(hoeffding_failure_bound(24, kAeSuccessFloor) <= 0.01);
  CHECK(hoeffding_failure_bound(24, kAeSuccessFloor) ==
        doctest::Approx(std::exp(-2.0 * 24.0 * (kAeSuccessFloor - 0.5) *
                                 (kAeSuccessFloor - 0.5))).epsilon(1e-12));
}

TEST_CASE("distribution cache shares one object per amplitude and register") {
  AeDistributionCache cache;
  auto first = cache.get(0.25, 32);
  auto second = cache.get(0.25, 32);
  CHECK(first.get() == second.get());
  auto third = cache.get(0.2500001, 32);
  CHECK(first.get() != third.get());
  auto fourth = cache.get(0.25, 64);
  CHECK(first.get() != fourth.get());
}
