#include <benchmark/benchmark.h>

#include "polyagg/aggregation.hpp"
#include "polyagg/bicomodule.hpp"
#include "polyagg/category.hpp"
#include "polyagg/copresheaf.hpp"
#include "polyagg/generators.hpp"
#include "polyagg/io.hpp"
#include "polyagg/poly.hpp"
#include "polyagg/span.hpp"

namespace {

using namespace polyagg;

void BM_HomCount(benchmark::State& state) {
    Poly p = parse_poly("y^4 + 2y^2 + 3");
    Poly q = parse_poly("y^3 + y + 1");
    for (auto _ : state) benchmark::DoNotOptimize(hom_count(p, q));
}
BENCHMARK(BM_HomCount);

void BM_CopresheafHoms(benchmark::State& state) {
    Rng rng(11);
    CatPtr c = random_category(rng);
    Copresheaf p = random_copresheaf(rng, c);
    Copresheaf x = random_copresheaf(rng, c);
    for (auto _ : state) benchmark::DoNotOptimize(copresheaf_homs(p, x, 1000000));
}
BENCHMARK(BM_CopresheafHoms);

void BM_ComposeBicomodules(benchmark::State& state) {
    Rng rng(5);
    CatPtr c = random_category(rng);
    CatPtr d = random_category(rng);
    Bicomodule m = random_bicomodule(rng, c, d);
    Bicomodule n = random_bicomodule(rng, d, c);
    for (auto _ : state) benchmark::DoNotOptimize(compose_bicomodules(m, n, 1000000));
}
BENCHMARK(BM_ComposeBicomodules);

void BM_AggregateAlong(benchmark::State& state) {
    Rng rng(3);
    CatPtr c = std::make_shared<FinCategory>(chain_category(3));
    Schema s = random_schema(rng, c);
    Instance inst = random_instance(rng, s);
    for (auto _ : state) benchmark::DoNotOptimize(aggregate_along(s, inst, 0));
}
BENCHMARK(BM_AggregateAlong);

void BM_SkeletonFin(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(skeleton_fin(int(state.range(0))));
}
BENCHMARK(BM_SkeletonFin)->Arg(3)->Arg(4);

} // namespace

BENCHMARK_MAIN();
