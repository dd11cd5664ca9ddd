#include <benchmark/benchmark.h>

#include "beamlu/beam.hpp"
#include "beamlu/block_lu.hpp"
#include "beamlu/gallery.hpp"
#include "beamlu/svd.hpp"

using namespace beamlu;

namespace {

Matrix bench_matrix(std::size_t n) {
    return generate(MatrixSpec::random_cond(n, 1e4, 42));
}

FactorOptions cheap_trace() {
    FactorOptions opts;
    opts.trace_norms = {NormKind::max(), NormKind::frobenius()};
    return opts;
}

void BM_SvdSmall(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = bench_matrix(n);
    for (auto _ : state) benchmark::DoNotOptimize(svd_small(a, n));
}
BENCHMARK(BM_SvdSmall)->Arg(16)->Arg(32)->Arg(64);

void BM_BlockLU(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = bench_matrix(n);
    const BlockingScheme bl = BlockingScheme::uniform(n, 8);
    const FactorOptions opts = cheap_trace();
    for (auto _ : state)
        benchmark::DoNotOptimize(factor_block_lu(a, bl, DiagFactorizer::unitary, opts));
}
BENCHMARK(BM_BlockLU)->Arg(64)->Arg(128)->Arg(256);

void BM_BeamFactor(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = bench_matrix(n);
    const BlockingScheme bl = BlockingScheme::uniform(n, 8);
    const FactorOptions opts = cheap_trace();
    for (auto _ : state)
        benchmark::DoNotOptimize(beam_factor(a, bl, 1e-6, true, opts));
}
BENCHMARK(BM_BeamFactor)->Arg(64)->Arg(128)->Arg(256);

void BM_BeamSolve(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = bench_matrix(n);
    const BeamFactorization f =
        beam_factor(a, BlockingScheme::uniform(n, 8), 1e-6, true, cheap_trace());
    const std::vector<double> b(n, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(beam_solve(f, b, {2, 1e-13}, a));
}
BENCHMARK(BM_BeamSolve)->Arg(64)->Arg(128)->Arg(256);

void BM_SpectralNorm(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const Matrix a = bench_matrix(n);
    for (auto _ : state) benchmark::DoNotOptimize(norm(a, NormKind::spectral()));
}
BENCHMARK(BM_SpectralNorm)->Arg(64)->Arg(128)->Arg(256);

} // namespace

BENCHMARK_MAIN();
