// Microbenchmarks for the hot paths: stratum enumeration, exponential-sum
// histograms, the first-page computation, window counting, and lattice
// reduction. Run with --benchmark_filter=... to narrow.

#include <arclab/arcs.hpp>
#include <arclab/expsum.hpp>
#include <arclab/minor.hpp>
#include <arclab/poly.hpp>
#include <arclab/specseq.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace arcs = arclab::arcs;
namespace es = arclab::expsum;
namespace mn = arclab::minor;
namespace sq = arclab::specseq;
namespace poly = arclab::poly;

namespace {

es::MorInstance fermat_p5() {
    return es::make_instance(5, 3, 2, 2,
                             {{{3, 0}, 1}, {{0, 3}, 1}, {{0, 0}, 1}}, {1, 4});
}

mn::LaurentMat random_mat(int n, int prec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> g(static_cast<std::size_t>(n * n),
                                    std::vector<int>(static_cast<std::size_t>(prec)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (auto& v : g[static_cast<std::size_t>(i * n + j)]) v = static_cast<int>(rng() % 5);
            g[static_cast<std::size_t>(j * n + i)] = g[static_cast<std::size_t>(i * n + j)];
        }
    return mn::make_laurent_mat(5, n, prec, std::move(g));
}

}  // namespace

static void bm_arc_level(benchmark::State& state) {
    const auto b = arcs::tail_from_index(5, 6, 9377);
    for (auto _ : state) benchmark::DoNotOptimize(arcs::arc_level(b));
}
BENCHMARK(bm_arc_level);

static void bm_enumerate_strata(benchmark::State& state) {
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(arcs::enumerate_strata(5, 6, 100000000ULL, threads));
}
BENCHMARK(bm_enumerate_strata)->Arg(1)->Arg(8);

static void bm_build_histogram(benchmark::State& state) {
    const auto inst = fermat_p5();
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(es::build_histogram(inst, 100000000ULL, threads));
}
BENCHMARK(bm_build_histogram)->Arg(1)->Arg(8)->Unit(benchmark::kMillisecond);

static void bm_sweep(benchmark::State& state) {
    const auto inst = fermat_p5();
    const auto hist = es::build_histogram(inst, 100000000ULL, 8);
    for (auto _ : state) benchmark::DoNotOptimize(es::sweep(hist, 100000000ULL, 8));
}
BENCHMARK(bm_sweep)->Unit(benchmark::kMillisecond);

static void bm_e1_page(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sq::e1_page(n, 3, 4));
}
BENCHMARK(bm_e1_page)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void bm_count_window(benchmark::State& state) {
    const auto inst = fermat_p5();
    const auto f0 = mn::sym_form(inst);
    const auto b = arcs::tail_from_index(5, 6, 9377);
    for (auto _ : state)
        benchmark::DoNotOptimize(mn::count_Nalpha(f0, b, 2, 100000000ULL, 1));
}
BENCHMARK(bm_count_window)->Unit(benchmark::kMillisecond);

static void bm_count_system(benchmark::State& state) {
    const auto inst = fermat_p5();
    const auto f0 = mn::sym_form(inst);
    const auto b = arcs::tail_from_index(5, 6, 9377);
    for (auto _ : state)
        benchmark::DoNotOptimize(mn::count_system(f0, b, 2, 100000000ULL, 1));
}
BENCHMARK(bm_count_system)->Unit(benchmark::kMillisecond);

static void bm_lattice_minima(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto gamma = random_mat(n, 8, 42);
    for (auto _ : state) benchmark::DoNotOptimize(mn::lattice_minima(gamma, 3, 3));
}
BENCHMARK(bm_lattice_minima)->Arg(1)->Arg(2)->Arg(4);

BENCHMARK_MAIN();
