#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qnn/csv.hpp"
#include "qnn/oracle.hpp"
#include "qnn/query_ledger.hpp"
#include "qnn/rng.hpp"
#include "qnn/sparse_vector.hpp"
#include "qnn/training_set.hpp"

using namespace qnn;

namespace {

SparseVector unit_e(std::uint64_t index, std::uint64_t dim, std::uint64_t d = 1,
                    double r_max = 1.0) {
  return SparseVector(dim, {{index, 1.0, 0.0}}, d, r_max);
}

SparseVector random_sparse_unit(RngStream& rng, std::uint64_t dim, std::uint64_t support) {
  std::vector<std::uint64_t> picks;
  while (picks.size() < support) {
    std::uint64_t i = 1 + rng.uniform_index(dim);
    bool fresh = true;
    for (std::uint64_t p : picks) fresh &= (p != i);
    if (fresh) picks.push_back(i);
  }
  std::sort(picks.begin(), picks.end());
  std::vector<SparseEntry> entries;
  double norm_sq = 0.0;
  for (std::uint64_t i : picks) {
    double mag = 0.1 + rng.uniform();
    entries.push_back({i, mag, rng.uniform(0.0, 2.0 * std::numbers::pi)});
    norm_sq += mag * mag;
  }
  double inv = 1.0 / std::sqrt(norm_sq);
  double r = 0.0;
  for (auto& e : entries) {
    e.magnitude *= inv;
    r = std::max(r, e.magnitude);
  }
  return SparseVector(dim, entries, support, r);
}

}  // namespace

TEST_CASE("sparse vector construction enforces the declared shape") {
  CHECK_NOTHROW(SparseVector(4, {{1, 0.5, 0.0}, {3, 0.5, 0.0}}, 2, 0.5));
  CHECK_THROWS_AS(SparseVector(4, {{1, 0.5, 0.0}, {3, 0.5, 0.0}}, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {{1, 1.0, 0.0}}, 5, 1.0), std::invalid_argument);
  SparseVector reordered(4, {{3, 0.5, 0.0}, {1, 0.5, 0.0}}, 2, 0.5);
  CHECK(reordered.entries().front().index == 1);
  CHECK(reordered.entries().back().index == 3);
  CHECK_THROWS_AS(SparseVector(4, {{2, 0.5, 0.0}, {2, 0.5, 0.0}}, 2, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {{1, 0.9, 0.0}}, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {{0, 0.5, 0.0}}, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SparseVector(4, {{5, 0.5, 0.0}}, 1, 0.5), std::invalid_argument);
}

TEST_CASE("component evaluates r e^{i phi} and zero outside the support") {
  SparseVector single = unit_e(1, 4);
  CHECK(single.component(1) == std::complex<double>(1.0, 0.0));
  CHECK(single.component(2) == std::complex<double>(0.0, 0.0));

  SparseVector negated(4, {{3, 0.5, std::numbers::pi}}, 1, 0.5);
  CHECK(negated.component(3).real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(negated.component(3).imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(single.component(0), std::out_of_range);
  CHECK_THROWS_AS(single.component(5), std::out_of_range);
}

TEST_CASE("support enumeration pads by repeating the last index") {
  SparseVector v(8, {{2, 0.6, 0.0}, {7, 0.8, 0.0}}, 3, 0.8);
  CHECK(v.support_index(1) == 2);
  CHECK(v.support_index(2) == 7);
  CHECK(v.support_index(3) == 7);
  CHECK_THROWS_AS(v.support_index(0), std::out_of_range);
  CHECK_THROWS_AS(v.support_index(4), std::out_of_range);
}

TEST_CASE("unit flag and normalization") {
  SparseVector balanced(2, {{1, 1.0 / std::sqrt(2.0), 0.0}, {2, 1.0 / std::sqrt(2.0), 0.0}}, 2,
                        1.0);
  CHECK(balanced.is_unit());

  SparseVector doubled(2, {{1, std::sqrt(2.0), 0.0}, {2, std::sqrt(2.0), 0.0}}, 2, 2.0);
  CHECK_FALSE(doubled.is_unit());
  SparseVector unit = doubled.normalized();
  CHECK(unit.is_unit());
  CHECK(unit.original_norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(unit.r_max() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("widening declared bounds keeps the vector valid") {
  SparseVector v = unit_e(1, 4);
  SparseVector wide = v.with_sparsity(3).with_r_max(2.0);
  CHECK(wide.declared_sparsity() == 3);
  CHECK(wide.r_max() == 2.0);
  CHECK_THROWS_AS(v.with_sparsity(0), std::invalid_argument);
  SparseVector two(4, {{1, 0.6, 0.0}, {2, 0.8, 0.0}}, 2, 0.8);
  CHECK_THROWS_AS(two.with_sparsity(1), std::invalid_argument);
  CHECK_THROWS_AS(two.with_r_max(0.5), std::invalid_argument);
}

TEST_CASE("inner product conjugates the left argument") {
  SparseVector a(2, {{1, 1.0, std::numbers::pi / 2.0}}, 1, 1.0);
  SparseVector b = unit_e(1, 2);
  std::complex<double> ip = inner_product(a, b);
  CHECK(ip.real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ip.imag() == doctest::Approx(-1.0).epsilon(1e-12));

  SparseVector mixed(2, {{1, 1.0 / std::sqrt(2.0), 0.0}, {2, 1.0 / std::sqrt(2.0), 0.0}}, 2, 1.0);
  CHECK(inner_product(mixed, b).real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(distance_sq(unit_e(1, 2), unit_e(2, 2, 1)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dense reconstructions from components and from support agree") {
  RngStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    SparseVector a = random_sparse_unit(rng, 12, 3);
    SparseVector b = random_sparse_unit(rng, 12, 4);

    std::vector<std::complex<double>> via_component(12);
    for (std::uint64_t i = 1; i <= 12; ++i) via_component[i - 1] = a.component(i);

    std::vector<std::complex<double>> via_support(12);
    for (std::uint64_t ell = 1; ell <= a.declared_sparsity(); ++ell) {
      std::uint64_t idx = a.support_index(ell);
      via_support[idx - 1] = a.component(idx);
    }

    std::complex<double> ip_component{0.0, 0.0};
    std::complex<double> ip_support{0.0, 0.0};
    for (std::uint64_t i = 0; i < 12; ++i) {
      ip_component += std::conj(via_component[i]) * b.component(i + 1);
      ip_support += std::conj(via_support[i]) * b.component(i + 1);
    }
    CHECK(std::abs(ip_component - ip_support) < 1e-12);
    CHECK(std::abs(ip_component - inner_product(a, b)) < 1e-12);
  }
}

TEST_CASE("training set shape checks") {
  std::vector<LabeledVector> vectors{{unit_e(1, 4), 0}, {unit_e(2, 4), 1}};
  TrainingSet plain(unit_e(1, 4), vectors);
  CHECK(plain.size() == 2);
  CHECK(plain.dimension() == 4);
  CHECK(plain.vector_at(0).component(1) == std::complex<double>(1.0, 0.0));
  CHECK(plain.label_at(1) == 0);
  CHECK(plain.label_at(2) == 1);
  CHECK_THROWS_AS(plain.vector_at(3), std::out_of_range);
  CHECK_THROWS_AS(TrainingSet(unit_e(1, 4), {}), std::invalid_argument);
  CHECK_THROWS_AS(TrainingSet(unit_e(1, 3), vectors), std::invalid_argument);

  TrainingSet clustered(unit_e(1, 4), vectors, {{0}, {1}});
  CHECK(clustered.cluster_count() == 2);
  CHECK(clustered.cluster_label(0) == 0);
  CHECK(clustered.cluster_vectors(1).size() == 1);
  CHECK_THROWS_AS(TrainingSet(unit_e(1, 4), vectors, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(TrainingSet(unit_e(1, 4), vectors, {{0, 1}, {1}}), std::invalid_argument);
}

TEST_CASE("component oracle reads values and charges one query each") {
  TrainingSet data(unit_e(1, 4),
                   {{SparseVector(4, {{3, 0.5, std::numbers::pi}}, 1, 0.5).with_r_max(1.0), 1}});
  DataOracle oracle(data);
  QueryLedger ledger;

  CHECK(oracle.query_o(ledger, 0, 1) == std::complex<double>(1.0, 0.0));
  CHECK(oracle.query_o(ledger, 0, 2) == std::complex<double>(0.0, 0.0));
  CHECK(oracle.query_o(ledger, 1, 3).real() == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ledger.o_queries() == 3);
  CHECK(ledger.f_queries() == 0);
  CHECK_THROWS_AS(oracle.query_o(ledger, 2, 1), std::out_of_range);
  CHECK_THROWS_AS(oracle.query_o(ledger, 0, 5), std::out_of_range);
}

TEST_CASE("support oracle enumerates and pads, charging f queries") {
  SparseVector two(8, {{2, 0.6, 0.0}, {7, 0.8, 0.0}}, 3, 0.8);
  TrainingSet data(unit_e(1, 8).with_sparsity(3), {{two.normalized().with_sparsity(3), 0}});
  DataOracle oracle(data);
  QueryLedger ledger;

  CHECK(oracle.query_f(ledger, 1, 1) == 2);
  CHECK(oracle.query_f(ledger, 1, 2) == 7);
  CHECK(oracle.query_f(ledger, 1, 3) == 7);
  CHECK(ledger.f_queries() == 3);
  CHECK(ledger.o_queries() == 0);
  CHECK_THROWS_AS(oracle.query_f(ledger, 1, 4), std::out_of_range);
  CHECK(oracle.vector(0).dimension() == 8);
  CHECK(ledger.f_queries() == 3);
}

TEST_CASE("ledgers merge component-wise with phase maps unioned") {
  QueryLedger a;
  a.charge(kPhaseStatePrep, {3, 1});
  QueryLedger empty;
  QueryLedger same = merge_ledgers(a, empty);
  CHECK(same.o_queries() == 3);
  CHECK(same.f_queries() == 1);

  QueryLedger b;
  b.charge(kPhaseGroverIteration, {2, 2});
  QueryLedger sum = merge_ledgers(a, b);
  CHECK(sum.o_queries() == 5);
  CHECK(sum.f_queries() == 3);
  CHECK(sum.phase_breakdown().at(kPhaseStatePrep) == QueryCounts{3, 1});
  CHECK(sum.phase_breakdown().at(kPhaseGroverIteration) == QueryCounts{2, 2});

  QueryLedger grover;
  for (int i = 0; i < 12; ++i) grover.charge(kPhaseGroverIteration, {6, 6});
  CHECK(grover.o_queries() == 72);
  CHECK(grover.f_queries() == 72);

  QueryCounts total{0, 0};
  for (const auto& [phase, counts] : sum.phase_breakdown()) total += counts;
  CHECK(total == QueryCounts{sum.o_queries(), sum.f_queries()});
}

TEST_CASE("csv formatting uses 12 significant digits and atomic writes round-trip") {
  CHECK(csv::format_double(0.5) == "0.5");
  CHECK(csv::format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(csv::format_double(12345678901234.0) == "1.23456789012e+13");

  csv::Table table({"x", "y"});
  table.add_row({"1", "2"});
  table.add_row({"3", "4"});
  std::filesystem::path path = std::filesystem::temp_directory_path() / "qnn_csv_test.csv";
  csv::write_file_atomic(path, table.to_string());
  auto rows = csv::read_rows(path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"x", "y"});
  CHECK(rows[2] == std::vector<std::string>{"3", "4"});
  std::filesystem::remove(path);
}
