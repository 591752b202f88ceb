#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "mdsc/flcount.hpp"
#include "mdsc/io.hpp"
#include "mdsc/polyalg.hpp"
#include "mdsc/simchan.hpp"

using namespace mdsc;

namespace {

const CodeDescriptor& code(const char* name) {
    static std::map<std::string, CodeDescriptor> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, load_descriptor(std::string(MDSC_DATA_DIR) + "/" + name + ".json")).first;
    return it->second;
}

DesignTriple triple(const CodeDescriptor& d) { return {*d.K, *d.Lf, *d.Mr}; }

void BM_CountCycles(benchmark::State& st) {
    const auto& d = code("md1");
    auto G = build_labeled_protograph(triple(d), d.params, true);
    CountOptions opt{st.range(0) != 0};
    for (auto _ : st) benchmark::DoNotOptimize(count_cycles(G, {6, 8}, opt));
}

void BM_EnumerateCycles(benchmark::State& st) {
    const auto& d = code("md1");
    auto H = build_labeled_protograph(triple(d), d.params, false).lifted();
    CountOptions opt{st.range(0) != 0};
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_cycles(H, 8, opt));
}

void BM_JoinConcats(benchmark::State& st) {
    const auto& d = code("md1");
    auto H = build_labeled_protograph(triple(d), d.params, false).lifted();
    auto c6 = enumerate_cycles(H, 6);
    CountOptions opt{st.range(0) != 0};
    for (auto _ : st) benchmark::DoNotOptimize(join_concats(c6, c6, true, opt));
}

void BM_FerSweep(benchmark::State& st) {
    const auto& d = code("md7");
    auto H = build_md_matrix(triple(d), d.params);
    SweepOptions opt{st.range(0) != 0};
    for (auto _ : st)
        benchmark::DoNotOptimize(fer_sweep(H, design_rate(d.params).value(), {3.0}, 32, DecoderConfig{}, 1, opt));
}

void BM_Convolution(benchmark::State& st) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<CoefficientArray> arrays;
    for (int k = 0; k < 6; ++k) {
        CoefficientArray a({0, 0, 0, 0}, {5, 5, 4, 4});
        for (double& x : a.values) x = u(rng);
        arrays.push_back(a);
    }
    for (auto _ : st) benchmark::DoNotOptimize(st.range(0) ? conv_fft(arrays) : conv_direct(arrays));
}

}  // namespace

BENCHMARK(BM_CountCycles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateCycles)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JoinConcats)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FerSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Convolution)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
