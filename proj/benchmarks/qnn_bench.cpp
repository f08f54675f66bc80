#include <benchmark/benchmark.h>

#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qnn/amplitude_estimation.hpp"
#include "qnn/baselines.hpp"
#include "qnn/classify.hpp"
#include "qnn/experiments.hpp"
#include "qnn/minfind.hpp"
#include "qnn/quantum_core.hpp"
#include "qnn/query_ledger.hpp"
#include "qnn/rng.hpp"
#include "qnn/sparse_vector.hpp"
#include "qnn/training_set.hpp"

namespace {

using namespace qnn;

std::vector<std::complex<double>> unit_dense(RngStream& rng, std::uint64_t dimension,
                                             std::uint64_t support) {
  std::vector<std::complex<double>> dense(dimension, {0.0, 0.0});
  std::vector<std::uint64_t> order(dimension);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < support; ++i)
    std::swap(order[i], order[i + rng.uniform_index(dimension - i)]);
  double norm_sq = 0.0;
  for (std::uint64_t i = 0; i < support; ++i) {
    const double re = rng.normal(0.0, 1.0);
    const double im = rng.normal(0.0, 1.0);
    dense[order[i]] = {re, im};
    norm_sq += re * re + im * im;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& c : dense) c *= inv;
  return dense;
}

SparseVector unit_sparse(RngStream& rng, std::uint64_t dimension, std::uint64_t support) {
  return SparseVector::from_dense(unit_dense(rng, dimension, support));
}

void BM_AeDistributionBuild(benchmark::State& state) {
  const auto register_size = static_cast<std::uint64_t>(state.range(0));
  double a = 0.3;
  for (auto _ : state) {
    AeDistribution dist(a, register_size);
    benchmark::DoNotOptimize(dist.folded_mode());
    a = a < 0.7 ? a + 1e-4 : 0.3;
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AeDistributionBuild)->Range(1 << 8, 1 << 16)->Complexity(benchmark::oN);

void BM_SampleAe(benchmark::State& state) {
  RngStream rng(1);
  const AeDistribution dist(0.37, static_cast<std::uint64_t>(state.range(0)));
  QueryLedger ledger;
  for (auto _ : state)
    benchmark::DoNotOptimize(sample_ae(rng, dist, ledger, kInnerProductQueryCost).a_hat);
}
BENCHMARK(BM_SampleAe)->Range(1 << 8, 1 << 16);

void BM_CoherentAe(benchmark::State& state) {
  RngStream rng(2);
  const AeDistribution dist(0.37, 1 << 12);
  const auto copies = static_cast<std::uint64_t>(state.range(0));
  QueryLedger ledger;
  for (auto _ : state)
    benchmark::DoNotOptimize(coherent_ae(rng, dist, copies, ledger, kDistanceQueryCost).a_hat);
}
BENCHMARK(BM_CoherentAe)->Arg(5)->Arg(25)->Arg(105);

void BM_SwapTestProbability(benchmark::State& state) {
  RngStream rng(3);
  const auto dimension = static_cast<std::uint64_t>(state.range(0));
  std::vector<SparseVector> pair = {unit_sparse(rng, dimension, dimension / 2),
                                    unit_sparse(rng, dimension, dimension / 2)};
  for (auto _ : state) benchmark::DoNotOptimize(swap_test_probability(pair[0], pair[1]));
}
BENCHMARK(BM_SwapTestProbability)->Range(8, 512);

void BM_StatevectorSwapTest(benchmark::State& state) {
  RngStream rng(4);
  const auto dimension = static_cast<std::uint64_t>(state.range(0));
  const SparseVector u = unit_sparse(rng, dimension, dimension / 2);
  const SparseVector v = unit_sparse(rng, dimension, dimension / 2);
  for (auto _ : state) benchmark::DoNotOptimize(statevector_swap_test(u, v));
}
BENCHMARK(BM_StatevectorSwapTest)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_EuclideanProbability(benchmark::State& state) {
  RngStream rng(5);
  const auto cluster_size = static_cast<std::uint64_t>(state.range(0));
  std::vector<SparseVector> group;
  group.push_back(unit_sparse(rng, 64, 8));
  for (std::uint64_t j = 0; j < cluster_size; ++j) group.push_back(unit_sparse(rng, 64, 8));
  for (auto _ : state) {
    const std::span<const SparseVector> cluster(group.data() + 1, cluster_size);
    benchmark::DoNotOptimize(euclidean_probability(group[0], cluster));
  }
}
BENCHMARK(BM_EuclideanProbability)->Range(2, 64);

void BM_DurrHoyerExact(benchmark::State& state) {
  RngStream rng(6);
  const auto count = static_cast<std::uint64_t>(state.range(0));
  std::vector<double> values(count);
  for (auto& v : values) v = rng.uniform();
  for (auto _ : state) {
    QueryLedger ledger;
    benchmark::DoNotOptimize(durr_hoyer_min(rng, values, ledger).argmin);
  }
}
BENCHMARK(BM_DurrHoyerExact)->Range(16, 1024);

void BM_McInnerProduct(benchmark::State& state) {
  RngStream rng(7);
  const SparseVector a = unit_sparse(rng, 256, 16);
  const SparseVector b = unit_sparse(rng, 256, 16);
  const auto samples = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_inner_product(rng, a, b, samples).value);
}
BENCHMARK(BM_McInnerProduct)->Range(4, 256);

void BM_QuantumNnClassify(benchmark::State& state) {
  RngStream gen(8);
  std::vector<LabeledVector> vectors;
  for (int j = 0; j < 16; ++j) vectors.push_back({unit_sparse(gen, 8, 2), j % 2});
  const TrainingSet training(unit_sparse(gen, 8, 2), std::move(vectors));
  AeDistributionCache cache;
  ClassifyOptions options;
  options.epsilon = 0.1;
  options.mode = SimMode::kQuantum;
  options.cache = &cache;
  RngStream rng(9);
  for (auto _ : state)
    benchmark::DoNotOptimize(nn_inner_product(rng, training, options).argmin);
}
BENCHMARK(BM_QuantumNnClassify);

void BM_NoisySplitClassify(benchmark::State& state) {
  RngStream gen(10);
  const HalfmoonSummary moon = gen_halfmoon(gen, 400, 0.05);
  NoiseModel noise;
  noise.epsilon = 1e-3;
  RngStream rng(11);
  for (auto _ : state) {
    const SplitClassification split =
        classify_noisy_split(rng, moon.data, SweepMethod::kNearestNeighbor, 0.5, noise);
    benchmark::DoNotOptimize(split.assigned.size());
  }
}
BENCHMARK(BM_NoisySplitClassify);

}  // namespace

BENCHMARK_MAIN();
