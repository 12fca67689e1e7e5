#include <benchmark/benchmark.h>

#include <walkforge/enumerate.hpp>
#include <walkforge/funceq.hpp>
#include <walkforge/model_io.hpp>

using namespace walkforge;

namespace
{

Model data_model(const std::string& name)
{
    return load_model(std::string(WALKFORGE_DATA_DIR) + "/" + name);
}

void BM_QuarterPlaneModular(benchmark::State& state)
{
    const Model m = data_model("darco.yaml");
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto s = count_walks(m, N, CoefficientDomain::modular(default_prime), EvaluationPoint::ones(2));
        benchmark::DoNotOptimize(s);
    }
    state.SetComplexityN(N);
}
BENCHMARK(BM_QuarterPlaneModular)->Arg(125)->Arg(250)->Arg(500)->Unit(benchmark::kMillisecond)->Complexity();

void BM_HalfSpaceModular(benchmark::State& state)
{
    const Model m = data_model("example1.yaml");
    const int N = static_cast<int>(state.range(0));
    for (auto _ : state) {
        auto s = count_walks(m, N, CoefficientDomain::modular(default_prime), EvaluationPoint::ones(2));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_HalfSpaceModular)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_QuarterPlaneExact(benchmark::State& state)
{
    const Model m = data_model("darco.yaml");
    for (auto _ : state) {
        auto s = count_walks(m, static_cast<int>(state.range(0)), CoefficientDomain::integer(), EvaluationPoint::ones(2));
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_QuarterPlaneExact)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_SymbolicFull(benchmark::State& state)
{
    const Model m = data_model("time_inhomogeneous.yaml");
    for (auto _ : state) {
        auto s = count_walks_full(m, static_cast<int>(state.range(0)), CoefficientDomain::rational());
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SymbolicFull)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_FunceqSolve(benchmark::State& state)
{
    const Model m = data_model("example1.yaml");
    const auto system = funceq::build_system(m, EvaluationPoint::ones(2));
    for (auto _ : state) {
        auto f = funceq::solve(system, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(f);
    }
}
BENCHMARK(BM_FunceqSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
