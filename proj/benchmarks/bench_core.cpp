#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "dloc/disorder.hpp"
#include "dloc/fft.hpp"
#include "dloc/graphs.hpp"
#include "dloc/normbench.hpp"
#include "dloc/rng.hpp"
#include "dloc/spectral.hpp"

using namespace dloc;

static void BM_fft2d(benchmark::State& state) {
    const int m = int(state.range(0));
    const int n = 1 << m;
    std::vector<cplx> data(std::size_t(n) * n);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = cplx(std::sin(0.1 * i), 0.0);
    for (auto _ : state) {
        fft2d_forward(data.data(), n);
        fft2d_backward(data.data(), n);
        benchmark::DoNotOptimize(data.data());
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_fft2d)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_resolvent_modulus(benchmark::State& state) {
    const ResolventProbe probe{cplx(1.3, 0.0), std::ldexp(1.0, -20), TorusGrid(int(state.range(0)))};
    for (auto _ : state) benchmark::DoNotOptimize(resolvent_modulus(probe));
}
BENCHMARK(BM_resolvent_modulus)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);

static void BM_hamiltonian_apply(benchmark::State& state) {
    const LatticeBox box(int(state.range(0)));
    const Hamiltonian h(sample_disorder(3, box, DecayProfile(0.25)), 0.5);
    std::vector<cplx> in(box.size()), out(box.size());
    for (std::size_t i = 0; i < in.size(); ++i) in[i] = gaussian_pair(5, Stream::test_vector, i, 0)[0];
    for (auto _ : state) {
        h.apply(in.data(), out.data());
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * in.size());
}
BENCHMARK(BM_hamiltonian_apply)->Arg(40)->Arg(200);

static void BM_wick_hafnian(benchmark::State& state) {
    static const DyadicPartition p(4, DecayProfile(0.25), TorusGrid(7));
    const int k = int(state.range(0));
    std::vector<Site> sites;
    ScaleAssignment s;
    for (int i = 0; i < k; ++i) {
        sites.push_back(i % 2 ? Site{2, 1} : Site{3, 0});
        s.j.push_back(1 + i % 2);
    }
    for (auto _ : state) benchmark::DoNotOptimize(wick_expectation(sites, s, p, p.profile()));
}
BENCHMARK(BM_wick_hafnian)->Arg(4)->Arg(8)->Arg(12);

static void BM_lanczos(benchmark::State& state) {
    const LatticeBox box(int(state.range(0)));
    const Hamiltonian h(sample_disorder(1, box, DecayProfile(0.4)), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(nearest_eigenpairs(h, 2.0, 16, 1));
}
BENCHMARK(BM_lanczos)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
