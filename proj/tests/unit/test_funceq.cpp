#include <gtest/gtest.h>

#include <random>

#include <walkforge/funceq.hpp>
#include <walkforge/model_io.hpp>

#include "random_models.hpp"

using namespace walkforge;
using namespace walkforge::funceq;

namespace
{

Model data_model(const std::string& name)
{
    return load_model(std::string(WALKFORGE_DATA_DIR) + "/" + name);
}

struct Mono
{
    int t, x, y;
    Rational c;
};

XTPoly poly(std::initializer_list<Mono> monos)
{
    XTPoly p;
    for (const auto& m : monos) {
        add_term(p, m.t, m.x, m.y, m.c);
    }
    trim(p);
    return p;
}

XTPoly truncate(XTPoly p, int N)
{
    if (p.size() > static_cast<std::size_t>(N) + 1) {
        p.resize(static_cast<std::size_t>(N) + 1);
    }
    trim(p);
    return p;
}

// g(0, y, t)
XTPoly at_x0(const XTPoly& f)
{
    XTPoly out;
    for (std::size_t t = 0; t < f.size(); ++t) {
        if (!f[t].empty()) {
            for (const auto& [e, c] : f[t][0]) {
                add_term(out, static_cast<int>(t), 0, e, c);
            }
        }
    }
    trim(out);
    return out;
}

std::vector<Rational> totals(const std::vector<XTPoly>& f, int N)
{
    std::vector<Rational> out(static_cast<std::size_t>(N) + 1);
    for (const auto& fs : f) {
        for (std::size_t t = 0; t < fs.size(); ++t) {
            for (const auto& x : fs[t]) {
                for (const auto& [e, c] : x) {
                    out[t] += c;
                }
            }
        }
    }
    return out;
}

std::vector<Rational> dp_totals(const Model& m, int N, const EvaluationPoint& eval)
{
    return count_walks(m, N, CoefficientDomain::rational(), eval).sum_spatial().univariate_coefficients();
}

Model depth_two_model()
{
    return parse_model(R"(
label: depth-two
dimension: 2
nonneg_axes: 1
moduli: [2]
residue_polys:
  - {position_coeffs: [1, 0]}
start: [1, 0]
step_sets:
  "0": ["-2 1", "1 0", "0 -1 2"]
  "1": ["1 1", "-1 0", "2 -1", "-2 -1"]
)");
}

} // namespace

TEST(FunctionalSystem, ExampleOneEquations)
{
    auto sys = build_system(data_model("example1.yaml"), EvaluationPoint::symbolic(2));
    ASSERT_EQ(sys.size, 2U);
    ASSERT_EQ(sys.depth, 1);
    EXPECT_TRUE(sys.symbolic_y);
    // F0 = 1 + t(y + 1/y + x) F1 + t/x (F1 - F1(0,y))
    EXPECT_EQ(sys.a[0], poly({{0, 0, 0, 1}}));
    EXPECT_TRUE(sys.a[1].empty());
    EXPECT_TRUE(sys.B[0][0][0].empty());
    EXPECT_EQ(sys.B[0][0][1], poly({{0, 0, 1, 1}, {0, 0, -1, 1}, {0, 1, 0, 1}}));
    EXPECT_EQ(sys.B[1][0][1], poly({{0, 0, 0, 1}}));
    EXPECT_TRUE(sys.B[1][0][0].empty());
    // F1 = t(y + 1/y + x) F0 + tx(y + 1/y) F1 + t/x (F0 - F0(0,y)) + t/x (y + 1/y)(F1 - F1(0,y))
    EXPECT_EQ(sys.B[0][1][0], poly({{0, 0, 1, 1}, {0, 0, -1, 1}, {0, 1, 0, 1}}));
    EXPECT_EQ(sys.B[0][1][1], poly({{0, 1, 1, 1}, {0, 1, -1, 1}}));
    EXPECT_EQ(sys.B[1][1][0], poly({{0, 0, 0, 1}}));
    EXPECT_EQ(sys.B[1][1][1], poly({{0, 0, 1, 1}, {0, 0, -1, 1}}));
}

TEST(FunctionalSystem, ExampleOneKernelDeterminant)
{
    auto sys = build_system(data_model("example1.yaml"), EvaluationPoint::symbolic(2));
    auto km = kernel_matrix(sys);
    XTPoly y2det = mul(poly({{0, 0, 2, 1}}), determinant(km.K));
    // x^2y^2 - t^2 (x+y)^2 (1+xy)^2 - t x (1+x^2) y (1+y^2)
    XTPoly xy = poly({{0, 1, 0, 1}, {0, 0, 1, 1}});
    XTPoly one_xy = poly({{0, 0, 0, 1}, {0, 1, 1, 1}});
    XTPoly sq = mul(mul(xy, xy), mul(one_xy, one_xy));
    XTPoly expected = add(poly({{0, 2, 2, 1}}), scale(mul(poly({{2, 0, 0, 1}}), sq), -1));
    expected = add(expected, scale(mul(poly({{1, 1, 1, 1}, {1, 3, 1, 1}}), poly({{0, 0, 0, 1}, {0, 0, 2, 1}})), -1));
    EXPECT_EQ(y2det, expected) << to_string(y2det);
}

TEST(FunctionalSystem, ExampleOneEliminatedEquation)
{
    const int N = 16;
    auto sys = build_system(data_model("example1.yaml"), EvaluationPoint::symbolic(2));
    auto f = solve(sys, N);
    XTPoly xy = poly({{0, 1, 0, 1}, {0, 0, 1, 1}});
    XTPoly one_xy = poly({{0, 0, 0, 1}, {0, 1, 1, 1}});
    XTPoly sq = mul(mul(xy, xy), mul(one_xy, one_xy));
    XTPoly kernel = add(poly({{0, 2, 2, 1}}), scale(mul(poly({{2, 0, 0, 1}}), sq), -1));
    kernel = add(kernel, scale(mul(poly({{1, 1, 1, 1}, {1, 3, 1, 1}}), poly({{0, 0, 0, 1}, {0, 0, 2, 1}})), -1));
    XTPoly lhs = truncate(mul(kernel, f[1]), N);
    XTPoly rhs = mul(poly({{1, 1, 1, 1}}), mul(xy, one_xy));
    rhs = add(rhs, scale(mul(poly({{1, 1, 2, 1}}), at_x0(f[0])), -1));
    XTPoly inner = add(poly({{0, 1, 0, 1}, {0, 1, 2, 1}}), mul(poly({{1, 0, 0, 1}}), mul(xy, one_xy)));
    rhs = add(rhs, scale(mul(mul(poly({{1, 0, 1, 1}}), inner), at_x0(f[1])), -1));
    EXPECT_EQ(lhs, truncate(rhs, N));
}

TEST(FunctionalSystem, ExampleOneMatchesEnumeration)
{
    Model m = data_model("example1.yaml");
    const int N = 100;
    auto f = solve(build_system(m, EvaluationPoint::ones(2)), N);
    EXPECT_EQ(totals(f, N), dp_totals(m, N, EvaluationPoint::ones(2)));
}

TEST(FunctionalSystem, SymbolicSeriesMatchEnumeration)
{
    Model m = data_model("example1.yaml");
    const int N = 20;
    auto fs = solve_series(build_system(m, EvaluationPoint::symbolic(2)), N);
    auto dp = count_walks(m, N, CoefficientDomain::rational(), EvaluationPoint::symbolic(2));
    std::map<Series::Exponent, Rational> sum;
    for (const auto& s : fs) {
        EXPECT_EQ(s.variables(), dp.variables());
        for (const auto& [e, c] : s.terms()) {
            sum[e] += c;
        }
    }
    std::erase_if(sum, [](const auto& kv) { return kv.second == 0; });
    EXPECT_EQ(sum, dp.terms());
}

TEST(FunctionalSystem, PerClassSeriesMatchEndpointCounts)
{
    Model m = data_model("example1.yaml");
    const int N = 9;
    auto f = solve(build_system(m, EvaluationPoint::symbolic(2)), N);
    auto bf = brute_force_all(m, N);
    for (int n = 0; n <= N; ++n) {
        std::vector<std::map<std::pair<int, int>, Rational>> expected(2);
        for (const auto& [pos, c] : bf[static_cast<std::size_t>(n)]) {
            expected[m.class_at(pos, n)][{static_cast<int>(pos[0]), static_cast<int>(pos[1])}] = c;
        }
        for (std::size_t s = 0; s < 2; ++s) {
            std::map<std::pair<int, int>, Rational> got;
            if (f[s].size() > static_cast<std::size_t>(n)) {
                for (std::size_t x = 0; x < f[s][static_cast<std::size_t>(n)].size(); ++x) {
                    for (const auto& [e, c] : f[s][static_cast<std::size_t>(n)][x]) {
                        got[{static_cast<int>(x), e}] = c;
                    }
                }
            }
            EXPECT_EQ(got, expected[s]) << "n=" << n << " class " << s;
        }
    }
}

TEST(FunctionalSystem, RandomHalfSpaceModelsMatchEnumeration)
{
    std::mt19937_64 rng(2024);
    testkit::RandomModelOptions opt;
    opt.nonneg_axes = 1;
    opt.allow_weights = true;
    for (int trial = 0; trial < 10; ++trial) {
        Model m = testkit::random_model(rng, opt);
        const int N = 60;
        auto f = solve(build_system(m, EvaluationPoint::ones(2)), N);
        EXPECT_EQ(totals(f, N), dp_totals(m, N, EvaluationPoint::ones(2))) << serialize(m);
        auto eval = EvaluationPoint::parse("y=2/3", 2);
        f = solve(build_system(m, eval), 25);
        EXPECT_EQ(totals(f, 25), dp_totals(m, 25, eval)) << serialize(m);
    }
}

TEST(FunctionalSystem, ThreeDimensionalHalfSpace)
{
    std::mt19937_64 rng(7);
    testkit::RandomModelOptions opt;
    opt.dimension = 3;
    opt.nonneg_axes = 1;
    opt.max_steps = 6;
    for (int trial = 0; trial < 4; ++trial) {
        Model m = testkit::random_model(rng, opt);
        auto eval = EvaluationPoint::parse("y1=symbolic,y2=3", 3);
        auto f = solve(build_system(m, eval), 15);
        auto one = EvaluationPoint::parse("y2=3", 3);
        EXPECT_EQ(totals(f, 15), dp_totals(m, 15, one)) << serialize(m);
    }
}

TEST(FunctionalSystem, LongStepsMatchBruteForce)
{
    Model m = depth_two_model();
    const int N = 12;
    auto sys = build_system(m, EvaluationPoint::ones(2));
    EXPECT_EQ(sys.depth, 2);
    auto f = solve(sys, N);
    std::vector<Rational> bf;
    for (const auto& counts : brute_force_all(m, N)) {
        Rational s = 0;
        for (const auto& [pos, c] : counts) {
            s += c;
        }
        bf.push_back(s);
    }
    EXPECT_EQ(totals(f, N), bf);
    EXPECT_EQ(totals(solve(sys, 40), 40), dp_totals(m, 40, EvaluationPoint::ones(2)));
}

TEST(FunctionalSystem, RejectsUnsupportedModels)
{
    EXPECT_THROW(build_system(data_model("darco.yaml"), EvaluationPoint::ones(2)), Error);
    EXPECT_THROW(build_system(data_model("diagonal_pair.yaml"), EvaluationPoint::ones(2)), Error);
    EXPECT_THROW(build_system(data_model("example1.yaml"), EvaluationPoint::parse("y=0", 2)), Error);
    Model m3 = testkit::random_model(*std::make_unique<std::mt19937_64>(1), {3, 1});
    EXPECT_THROW(build_system(m3, EvaluationPoint::symbolic(3)), Error);
}

TEST(Delta, Identities)
{
    auto f = solve(build_system(data_model("example1.yaml"), EvaluationPoint::symbolic(2)), 10);
    for (const auto& fs : f) {
        for (const auto& fx : fs) {
            // f = f(0) + x Delta f
            XPoly rebuilt = {fx.empty() ? YPoly{} : fx[0]};
            for (const auto& c : delta(fx)) {
                rebuilt.push_back(c);
            }
            if (fx.empty()) {
                rebuilt.clear();
            }
            EXPECT_EQ(rebuilt, fx);
            EXPECT_EQ(delta(delta(fx), 2), delta(fx, 3));
        }
    }
    auto series = solve_series(build_system(data_model("example1.yaml"), EvaluationPoint::symbolic(2)), 10);
    Series d = delta(series[1]);
    for (const auto& [e, c] : series[1].terms()) {
        if (e[0] > 0) {
            EXPECT_EQ(d.coefficient({e[0] - 1, e[1], e[2]}), c);
        }
    }
    EXPECT_EQ(d.terms().size(), static_cast<std::size_t>(std::count_if(series[1].terms().begin(), series[1].terms().end(),
                                                                        [](const auto& kv) { return kv.first[0] > 0; })));
}

TEST(KernelResidual, VanishesForSolution)
{
    std::vector<Model> models = {data_model("example1.yaml"), depth_two_model()};
    std::mt19937_64 rng(99);
    testkit::RandomModelOptions opt;
    opt.nonneg_axes = 1;
    for (int i = 0; i < 5; ++i) {
        models.push_back(testkit::random_model(rng, opt));
    }
    for (const auto& m : models) {
        const int N = 12;
        auto sys = build_system(m, EvaluationPoint::symbolic(2));
        auto km = kernel_matrix(sys);
        auto f = solve(sys, N);
        for (const auto& r : kernel_residual(sys, km, f, N)) {
            EXPECT_TRUE(is_zero(r)) << serialize(m) << to_string(r);
        }
        // perturbing one coefficient breaks the identity
        add_term(f[0], 3, 1, 0, 1);
        bool all_zero = true;
        for (const auto& r : kernel_residual(sys, km, f, N)) {
            all_zero = all_zero && is_zero(r);
        }
        EXPECT_FALSE(all_zero);
    }
}

TEST(DeterminantIdentity, SmallCases)
{
    auto r = lemma2_check(1, 2, {5}, 101);
    EXPECT_EQ(r.determinant, 101U - 10U);
    EXPECT_TRUE(r.equal());
    r = lemma2_check(1, 1, {7}, 13);
    EXPECT_EQ(r.determinant, 1U);
    EXPECT_EQ(r.sign, 1);
    EXPECT_THROW(lemma2_check(2, 2, {1}, 101), Error);
    EXPECT_THROW(lemma2_check(1, 2, {0}, 101), Error);
    EXPECT_THROW(lemma2_check(1, 3, {1}, 101), Error);
}

TEST(DeterminantIdentity, RandomTrials)
{
    std::mt19937_64 rng(5);
    int seen_minus = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        const int k = std::uniform_int_distribution<int>(1, 4)(rng);
        std::uint32_t p = std::uniform_int_distribution<std::uint32_t>(1000, 1000000)(rng);
        while (!is_prime(p) || p % static_cast<std::uint32_t>(k) != 1 % static_cast<std::uint32_t>(k)) {
            ++p;
        }
        std::vector<std::uint32_t> lambdas;
        for (int i = 0; i < n; ++i) {
            lambdas.push_back(std::uniform_int_distribution<std::uint32_t>(1, p - 1)(rng));
        }
        auto r = lemma2_check(n, k, lambdas, p);
        EXPECT_TRUE(r.equal()) << n << " " << k << " " << p;
        EXPECT_NE(r.determinant, 0U);
        seen_minus += r.sign < 0;
    }
    EXPECT_GT(seen_minus, 0);
}
