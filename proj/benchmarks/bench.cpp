#include "polyimage/complement.hpp"
#include "polyimage/interior_complement.hpp"
#include "polyimage/separator.hpp"
#include "polyimage/verify.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace polyimage;

namespace {

Polyhedron wedge() {
    auto row = [](long a0, long a1) { return LinearForm{{Scalar(a0), Scalar(a1)}, Scalar(0)}; };
    return Polyhedron{2, {row(0, -1), row(1, -1), row(-1, -1)}, false};
}

Scalar dyadic(std::mt19937_64& g, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo << 16, hi << 16);
    Scalar q(d(g), 1L << 16);
    q.canonicalize();
    return q;
}

const MapChain& wedge_chain() {
    static const MapChain chain = synthesize_interior_complement(wedge()).chain;
    return chain;
}

void SeparatorValue(benchmark::State& state) {
    int r = static_cast<int>(state.range(0)), s = static_cast<int>(state.range(1));
    const RationalSeparator& sep = build_separator(r, s);
    std::mt19937_64 g(1);
    Vec x;
    for (int i = 0; i < r; ++i) x.push_back(dyadic(g, -8, 8));
    Scalar top = *std::max_element(x.begin(), x.end());
    for (int j = 0; j < s; ++j) x.push_back(top + dyadic(g, 1, 6));
    for (auto _ : state) benchmark::DoNotOptimize(sep.value(x));
}
BENCHMARK(SeparatorValue)->Args({2, 2})->Args({3, 3})->Args({4, 4});

void SeparatorExpansion(benchmark::State& state) {
    int r = static_cast<int>(state.range(0)), s = static_cast<int>(state.range(1));
    for (auto _ : state) {
        // A fresh top node each round; its children stay memoized.
        RationalSeparator sep = compose_step(build_separator(r - 1, s), build_separator(2, s));
        benchmark::DoNotOptimize(sep.den_root().terms().size());
    }
}
BENCHMARK(SeparatorExpansion)->Args({3, 2})->Args({3, 3})->Unit(benchmark::kMillisecond);

void ChainEvalExact(benchmark::State& state) {
    CompiledChain c(wedge_chain());
    std::mt19937_64 g(2);
    Vec x{dyadic(g, -10, 10), dyadic(g, -10, 10)};
    for (auto _ : state) benchmark::DoNotOptimize(c.eval(x));
}
BENCHMARK(ChainEvalExact);

void ChainEvalDouble(benchmark::State& state) {
    CompiledChain c(wedge_chain());
    double x[2] = {1.25, -3.5}, y[2];
    for (auto _ : state) benchmark::DoNotOptimize(c.eval(x, y));
}
BENCHMARK(ChainEvalDouble);

void Containment(benchmark::State& state) {
    SamplingOptions opts;
    opts.threads = 1;
    RegionSpec forbidden{wedge(), RegionMode::Interior, {}};
    for (auto _ : state)
        benchmark::DoNotOptimize(check_containment(wedge_chain(), RegionSpec::universe(2), forbidden,
                                                   static_cast<std::size_t>(state.range(0)), 3, opts));
}
BENCHMARK(Containment)->Arg(1000)->Unit(benchmark::kMillisecond);

void SynthesizeComplement(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(synthesize_complement(wedge()));
}
BENCHMARK(SynthesizeComplement)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
