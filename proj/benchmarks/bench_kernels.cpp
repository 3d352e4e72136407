#include <benchmark/benchmark.h>

#include <cstdint>

#include "steig/factor.hpp"
#include "steig/matrix.hpp"
#include "steig/spectral.hpp"
#include "steig/symeig.hpp"

namespace {

using steig::SymMatrix;

// Cheap deterministic fill, independent of the test-side generators.
double noise(uint64_t& s) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return double(s >> 11) / double(1ull << 53) - 0.5;
}

SymMatrix random_symmetric(int n, uint64_t seed) {
    SymMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) m.set(i, j, noise(seed));
    return m;
}

SymMatrix random_spd(int n, uint64_t seed) {
    SymMatrix g = random_symmetric(n, seed);
    SymMatrix m(n);
    for (int j = 0; j < n; ++j)
        for (int i = j; i < n; ++i) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += g(i, k) * g(j, k);
            m.set(i, j, s + (i == j ? 0.1 * n : 0.0));
        }
    return m;
}

void BM_PivotedCholesky(benchmark::State& state) {
    const int n = int(state.range(0));
    const SymMatrix b = random_spd(n, 7);
    for (auto _ : state) {
        auto f = steig::pivoted_cholesky(b);
        benchmark::DoNotOptimize(f.rank);
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_PivotedCholesky)->Arg(50)->Arg(200)->Arg(500)->Complexity();

void BM_LdltRook(benchmark::State& state) {
    const int n = int(state.range(0));
    const SymMatrix a = random_symmetric(n, 11);
    for (auto _ : state) {
        auto f = steig::ldlt_rook(a);
        benchmark::DoNotOptimize(f.perm.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_LdltRook)->Arg(50)->Arg(200)->Arg(500)->Complexity();

void BM_SymEig(benchmark::State& state) {
    const int n = int(state.range(0));
    const SymMatrix w = random_symmetric(n, 13);
    for (auto _ : state) {
        auto e = steig::sym_eig(w);
        benchmark::DoNotOptimize(e.theta.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SymEig)->Arg(50)->Arg(200)->Arg(400)->Complexity();

void BM_SpectralTransEig(benchmark::State& state) {
    const int n = int(state.range(0));
    const SymMatrix a = random_symmetric(n, 17);
    const SymMatrix b = random_spd(n, 19);
    const double sigma = -2.0 * steig::norm2_estimate(a).value / steig::norm2_estimate(b).value;
    for (auto _ : state) {
        auto r = steig::spectral_trans_eig(a, b, sigma);
        benchmark::DoNotOptimize(r.pairs.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_SpectralTransEig)->Arg(50)->Arg(150)->Arg(300)->Complexity();

} // namespace

BENCHMARK_MAIN();
