#include <fellbundle/instances.hpp>
#include <fellbundle/jmap.hpp>
#include <fellbundle/zwindow.hpp>

#include <benchmark/benchmark.h>

using namespace fell;

namespace {

BundlePtr pair_line_bundle(int n) {
    FiberSpec dims;
    const auto g = make_pair_groupoid(n);
    for (int u : g->units()) dims.dim[u] = 1;
    return make_trivial_bundle(g, dims);
}

void BM_Convolve(benchmark::State& state) {
    const auto bundle = pair_line_bundle(static_cast<int>(state.range(0)));
    CounterRng rng(1);
    const Section f = random_section(bundle, rng);
    const Section g = random_section(bundle, rng);
    for (auto _ : state) benchmark::DoNotOptimize(convolve(f, g));
}
BENCHMARK(BM_Convolve)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_ReducedNorm(benchmark::State& state) {
    const auto bundle = pair_line_bundle(static_cast<int>(state.range(0)));
    CounterRng rng(2);
    const Section f = random_section(bundle, rng);
    const auto grams = build_all_induced(*bundle);
    for (auto _ : state) benchmark::DoNotOptimize(reduced_norm(f, grams));
}
BENCHMARK(BM_ReducedNorm)->Arg(2)->Arg(4)->Arg(6);

void BM_BuildInduced(benchmark::State& state) {
    const auto bundle = make_random_instance(BundleKind::CrossedProduct,
                                             static_cast<int>(state.range(0)), 11);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_all_induced(*bundle));
}
BENCHMARK(BM_BuildInduced)->Arg(1)->Arg(2)->Arg(3);

void BM_JRecoverSection(benchmark::State& state) {
    const auto bundle = make_random_instance(BundleKind::CrossedProduct,
                                             static_cast<int>(state.range(0)), 13);
    CounterRng rng(3);
    const Section f = random_section(bundle, rng);
    const OperatorFamily family = represent_family(f);
    for (auto _ : state) benchmark::DoNotOptimize(j_recover_section(family));
}
BENCHMARK(BM_JRecoverSection)->Arg(1)->Arg(2)->Arg(3);

void BM_ZWindowNorm(benchmark::State& state) {
    const auto inst = random_z_instance(8, 9, 7);
    const int window = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(z_window_norm(inst, window));
}
BENCHMARK(BM_ZWindowNorm)->Arg(32)->Arg(128)->Arg(256);

void BM_VerificationSuite(benchmark::State& state) {
    const auto bundle = make_random_instance(BundleKind::Twist, 1, 17);
    for (auto _ : state)
        benchmark::DoNotOptimize(run_suite(bundle, static_cast<int>(state.range(0)), 0));
}
BENCHMARK(BM_VerificationSuite)->Arg(1)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
