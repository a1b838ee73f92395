// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "detsamp/dpp.hpp"
#include "detsamp/ffs.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/reference.hpp"

namespace {

using namespace detsamp;

constexpr std::size_t kSites = 1024;

void report_flops(benchmark::State& state, const FlopLedger& ledger) {
  state.counters["flops"] = benchmark::Counter(static_cast<double>(ledger.total()),
                                               benchmark::Counter::kAvgIterations);
}

void BM_Ffs(benchmark::State& state) {
  RngStream rng(1);
  const auto u = random_orthonormal(kSites, static_cast<std::size_t>(state.range(0)), rng);
  FlopLedger ledger;
  for (auto _ : state) benchmark::DoNotOptimize(ffs_sample(u, rng, ledger));
  report_flops(state, ledger);
}
BENCHMARK(BM_Ffs)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMicrosecond);

void BM_Hkpv(benchmark::State& state) {
  RngStream rng(2);
  const auto u = random_orthonormal(kSites, static_cast<std::size_t>(state.range(0)), rng);
  FlopLedger ledger;
  for (auto _ : state) benchmark::DoNotOptimize(hkpv_sample(u, rng, ledger));
  report_flops(state, ledger);
}
BENCHMARK(BM_Hkpv)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMicrosecond);

void BM_FfsMarginal(benchmark::State& state) {
  RngStream rng(3);
  const auto u = random_orthonormal(kSites, static_cast<std::size_t>(state.range(0)), rng);
  FlopLedger ledger;
  for (auto _ : state) benchmark::DoNotOptimize(ffs_marginal_sample(u, 4, rng, ledger));
  report_flops(state, ledger);
}
BENCHMARK(BM_FfsMarginal)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

// One Markov sweep: N proposals.
void BM_MarkovSweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(4);
  const auto u = random_orthonormal(kSites, n, rng);
  MarkovOptions opts;
  opts.keep = 1;
  opts.thin = n;
  opts.initial = SlaterChain::random_start(u, rng).config();
  FlopLedger ledger;
  for (auto _ : state) {
    auto stream = markov_sample_stream(u, {}, opts, rng, ledger);
    opts.initial = stream.back();
    benchmark::DoNotOptimize(stream);
  }
  report_flops(state, ledger);
}
BENCHMARK(BM_MarkovSweep)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMicrosecond);

void BM_DppSample(benchmark::State& state) {
  RngStream rng(5);
  SyntheticSpec spec;
  spec.items = static_cast<std::size_t>(state.range(0));
  const DppSampler sampler(kernel_from_vectors(synthetic_vectors(spec, rng)));
  FlopLedger ledger;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(rng, ledger));
  report_flops(state, ledger);
}
BENCHMARK(BM_DppSample)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
