#include <benchmark/benchmark.h>

#include "qtails/jones.hpp"
#include "qtails/knot_table.hpp"
#include "qtails/nahm.hpp"
#include "qtails/qseries.hpp"

using namespace qtails;

static void BM_EulerFunction(benchmark::State& state) {
    const expq_t N = 4 * state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(euler_function(N));
    }
}
BENCHMARK(BM_EulerFunction)->Arg(50)->Arg(100)->Arg(200);

static void BM_SeriesMul(benchmark::State& state) {
    const expq_t N = 4 * state.range(0);
    QSeries e = euler_function(N);
    QSeries inv = e.inverse_unit();
    for (auto _ : state) {
        benchmark::DoNotOptimize(e * inv);
    }
}
BENCHMARK(BM_SeriesMul)->Arg(50)->Arg(100)->Arg(200);

static void BM_EnumerateAdm(benchmark::State& state) {
    NahmData nd = nahm_data(faces(parse_pd(knot_lookup("6_2").pd)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_adm_collect(nd, state.range(0)));
    }
}
BENCHMARK(BM_EnumerateAdm)->Arg(10)->Arg(20)->Arg(30);

static void BM_Phi0(benchmark::State& state) {
    NahmData nd = nahm_data(faces(parse_pd(knot_lookup("6_2").pd)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(phi0(nd, state.range(0)));
    }
}
BENCHMARK(BM_Phi0)->Arg(10)->Arg(20)->Arg(30);

static void BM_JonesBraid(benchmark::State& state) {
    BraidWord b = parse_braid(knot_lookup("4_1").braid);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jones_braid(b, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_JonesBraid)->Arg(2)->Arg(5)->Arg(8);

BENCHMARK_MAIN();
