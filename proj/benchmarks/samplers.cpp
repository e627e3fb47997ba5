//---------------------------------------------------------------------------//
// Copyright 2026 the bstrings authors.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file samplers.cpp
//! Per-replicate cost of the samplers behind each experiment.
//---------------------------------------------------------------------------//
#include <benchmark/benchmark.h>

#include "bstrings/cmpp.hpp"
#include "bstrings/exact.hpp"
#include "bstrings/sequences.hpp"

using namespace bstrings;

namespace
{
void dense_bern(benchmark::State& state)
{
    auto n = static_cast<std::size_t>(state.range(0));
    RandomStream s(1);
    for (auto _ : state)
    {
        auto bits = gen_bern(1, 0, n, s);
        benchmark::DoNotOptimize(count_strings(bits, 5));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(dense_bern)->Range(1 << 10, 1 << 20);

void sparse_bern1(benchmark::State& state)
{
    auto n = static_cast<std::uint64_t>(state.range(0));
    RandomStream s(2);
    for (auto _ : state)
    {
        auto t = sample_success_times(SequenceModel::bern1, 1, 0.5, n, s);
        benchmark::DoNotOptimize(count_gaps(t, 4));
    }
}
BENCHMARK(sparse_bern1)->Range(1 << 10, 1 << 30);

void recurrence(benchmark::State& state)
{
    RandomStream s(3);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_bern1_counts_recurrence(1, 0.5, 4, s));
}
BENCHMARK(recurrence);

void realize_beta_bern(benchmark::State& state)
{
    auto spec = beta_bern_spec(1, 2);
    RealizeOptions opts{epsilon_for(1, 4), 6};
    RandomStream s(4);
    for (auto _ : state)
        benchmark::DoNotOptimize(counts_from_marks(realize(spec, opts, s), 4));
}
BENCHMARK(realize_beta_bern);

void mixture_counts(benchmark::State& state)
{
    MixtureSpec mix{1, mixing_law_for(SequenceModel::bern, 1, 2)};
    RandomStream s(5);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_mixture_counts(mix, 4, s));
}
BENCHMARK(mixture_counts);

void feller_permutation(benchmark::State& state)
{
    auto n = static_cast<std::size_t>(state.range(0));
    RandomStream s(6);
    for (auto _ : state)
        benchmark::DoNotOptimize(feller_draw(n, s));
}
BENCHMARK(feller_permutation)->Arg(200)->Arg(10'000);

void enumeration(benchmark::State& state)
{
    auto m = static_cast<int>(state.range(0));
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(
            enumerate_truncated(2, 1, SequenceModel::bern, m, 4));
    }
}
BENCHMARK(enumeration)->Arg(12)->Arg(18);
}  // namespace

BENCHMARK_MAIN();
