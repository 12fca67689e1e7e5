#include <benchmark/benchmark.h>

#include <random>

#include <walkforge/enumerate.hpp>
#include <walkforge/guess.hpp>
#include <walkforge/model_io.hpp>
#include <walkforge/modular_linalg.hpp>

using namespace walkforge;

namespace
{

std::vector<std::uint32_t> terms_of(const std::string& name, int N)
{
    const Model m = load_model(std::string(WALKFORGE_DATA_DIR) + "/" + name);
    return count_walks(m, N - 1, CoefficientDomain::modular(default_prime), EvaluationPoint::ones(2))
        .modular_coefficients();
}

void BM_FitOdeDarco(benchmark::State& state)
{
    const auto terms = terms_of("darco.yaml", 400);
    for (auto _ : state) {
        auto eq = guess::fit_differential(terms, default_prime, 8, 30);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_FitOdeDarco)->Unit(benchmark::kMillisecond);

void BM_FitAlgebraicExample1(benchmark::State& state)
{
    const auto terms = terms_of("example1.yaml", 400);
    for (auto _ : state) {
        auto eq = guess::fit_algebraic(terms, default_prime, 8, 40);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_FitAlgebraicExample1)->Unit(benchmark::kMillisecond);

void BM_NoEquation(benchmark::State& state)
{
    std::mt19937 rng(1);
    std::vector<std::uint32_t> terms(2000);
    for (auto& v : terms) {
        v = rng() % default_prime;
    }
    for (auto _ : state) {
        auto eq = guess::fit_differential(terms, default_prime, 12, 60);
        benchmark::DoNotOptimize(eq);
    }
}
BENCHMARK(BM_NoEquation)->Unit(benchmark::kMillisecond);

void BM_Nullspace(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(2);
    ModMatrix m(n + 10, n);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            m.at(i, j) = rng() % default_prime;
        }
    }
    for (auto _ : state) {
        auto k = nullspace(m, default_prime);
        benchmark::DoNotOptimize(k);
    }
}
BENCHMARK(BM_Nullspace)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
