// Microbenchmarks for the hot paths: expansion, cell location, the two
// closed-form index computations, the generic containment search, and the
// rotation-orbit routines.

#include <benchmark/benchmark.h>

#include "partq/cf.hpp"
#include "partq/experiments.hpp"
#include "partq/lochs.hpp"
#include "partq/partitions.hpp"
#include "partq/point.hpp"
#include "partq/sturmian.hpp"
#include "partq/weights.hpp"

namespace {

using namespace partq;

void bm_cf_expand_512(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 1, 512);
    for (auto _ : state) {
        CFExpansion e = cf_expand(x.value);
        benchmark::DoNotOptimize(e.size());
    }
}
BENCHMARK(bm_cf_expand_512);

void bm_cf_expand_4096(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 2, 4096);
    for (auto _ : state) {
        CFExpansion e = cf_expand(x.value);
        benchmark::DoNotOptimize(e.size());
    }
}
BENCHMARK(bm_cf_expand_4096);

void bm_cell_farey_deep(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 3, 65536);
    CFExpansion e = cf_expand(x.value);
    const BigInt depth(10000);
    for (auto _ : state) {
        FareyCell cell = cell_farey(e, depth);
        benchmark::DoNotOptimize(cell.interval.lo);
    }
}
BENCHMARK(bm_cell_farey_deep);

void bm_lochs_cf_to_farey_closed(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 4, 2048);
    CFExpansion e = cf_expand(x.value);
    for (auto _ : state) {
        LochsRecord rec = lochs_cf_to_farey(e, 100);
        benchmark::DoNotOptimize(rec.L);
    }
}
BENCHMARK(bm_lochs_cf_to_farey_closed);

void bm_lochs_farey_to_cf_closed(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 5, 2048);
    CFExpansion e = cf_expand(x.value);
    const BigInt depth(100000);
    for (auto _ : state) {
        LochsRecord rec = lochs_farey_to_cf(e, depth);
        benchmark::DoNotOptimize(rec.L);
    }
}
BENCHMARK(bm_lochs_farey_to_cf_closed);

void bm_lochs_generic_binary_to_farey(benchmark::State& state) {
    UnitPoint x = sample_dyadic(99, 6, 512);
    PartitionFamily source = PartitionFamily::bary(BigInt(2));
    PartitionFamily target = PartitionFamily::farey();
    const BigInt depth(60);
    const BigInt cap = lochs_default_cap(canonical_weight(source), canonical_weight(target), depth);
    for (auto _ : state) {
        LochsRecord rec = lochs_generic(x, source, target, depth, cap);
        benchmark::DoNotOptimize(rec.L);
    }
}
BENCHMARK(bm_lochs_generic_binary_to_farey);

void bm_rotation_code_500(benchmark::State& state) {
    UnitPoint alpha = sample_dyadic(99, 7, 512);
    for (auto _ : state) {
        std::string word = rotation_code(alpha, 500);
        benchmark::DoNotOptimize(word.size());
    }
}
BENCHMARK(bm_rotation_code_500);

void bm_three_distance_profile_1e6(benchmark::State& state) {
    UnitPoint alpha = explicit_point(make_rational(BigInt(414213562), BigInt(1000000007)));
    const BigInt depth(1000000);
    for (auto _ : state) {
        auto profile = three_distance_profile(alpha, depth);
        benchmark::DoNotOptimize(profile.size());
    }
}
BENCHMARK(bm_three_distance_profile_1e6);

void bm_enumerate_farey_level(benchmark::State& state) {
    PartitionFamily farey = PartitionFamily::farey();
    for (auto _ : state) {
        auto cells = enumerate_cells(farey, 300);
        benchmark::DoNotOptimize(cells.size());
    }
}
BENCHMARK(bm_enumerate_farey_level);

}  // namespace

BENCHMARK_MAIN();
