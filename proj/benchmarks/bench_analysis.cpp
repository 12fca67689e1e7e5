#include <benchmark/benchmark.h>

#include <walkforge/dimension.hpp>
#include <walkforge/model_io.hpp>
#include <walkforge/orbit.hpp>
#include <walkforge/pipeline.hpp>
#include <walkforge/symmetry.hpp>

using namespace walkforge;

namespace
{

void BM_DimensionSimpleWalk(benchmark::State& state)
{
    const Model m = load_model(std::string(WALKFORGE_DATA_DIR) + "/simple_walk.yaml");
    for (auto _ : state) {
        auto r = dimension::dimension(m);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_DimensionSimpleWalk)->Unit(benchmark::kMillisecond);

void BM_DimensionFamilyModel(benchmark::State& state)
{
    const Model m = family_model(Family::time, 0b10110101, 0b01011110);
    for (auto _ : state) {
        auto r = dimension::dimension(m);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_DimensionFamilyModel)->Unit(benchmark::kMillisecond);

void BM_OrbitDarco(benchmark::State& state)
{
    for (auto _ : state) {
        auto r = orbit::reproduce_darco(static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_OrbitDarco)->Arg(15)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_OrbitTimeInhom(benchmark::State& state)
{
    for (auto _ : state) {
        auto r = orbit::reproduce_time_inhom(static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_OrbitTimeInhom)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_FilterChain(benchmark::State& state)
{
    const Model m = family_model(Family::space, 0b01010101, 0b11111111);
    pipeline::PipelineConfig c;
    c.filters_only = true;
    for (auto _ : state) {
        auto r = pipeline::classify_model(m, c);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_FilterChain)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
