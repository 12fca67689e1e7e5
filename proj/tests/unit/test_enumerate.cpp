#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include <walkforge/enumerate.hpp>
#include <walkforge/model_io.hpp>

#include "random_models.hpp"

using namespace walkforge;

namespace
{

Model data_model(const std::string& name)
{
    return load_model(std::string(WALKFORGE_DATA_DIR) + "/" + name);
}

std::vector<Rational> coeffs(const Series& s)
{
    return s.sum_spatial().univariate_coefficients();
}

std::vector<Rational> ints(std::initializer_list<int> v)
{
    return {v.begin(), v.end()};
}

// Brute-force totals per length.
std::vector<Rational> brute_totals(const Model& m, int n)
{
    std::vector<Rational> out;
    for (const auto& counts : brute_force_all(m, n)) {
        Rational s = 0;
        for (const auto& [pos, c] : counts) {
            s += c;
        }
        out.push_back(s);
    }
    return out;
}

} // namespace

TEST(ReduceState, Examples)
{
    auto s = reduce_state(data_model("example1.yaml"), EvaluationPoint::ones(2));
    EXPECT_EQ(s.tracked_axes, std::vector<int>{0});
    EXPECT_EQ(s.collapsed_axes, std::vector<int>{1});
    EXPECT_EQ(s.collapsed_moduli, std::vector<int>{2});
    EXPECT_EQ(s.time_modulus, 1);

    s = reduce_state(data_model("darco.yaml"), EvaluationPoint::ones(2));
    EXPECT_EQ(s.tracked_axes, (std::vector<int>{0, 1}));
    EXPECT_TRUE(s.collapsed_axes.empty());

    s = reduce_state(data_model("time_inhomogeneous.yaml"), EvaluationPoint::ones(2));
    EXPECT_EQ(s.tracked_axes, (std::vector<int>{0, 1}));
    EXPECT_EQ(s.time_modulus, 2);

    s = reduce_state(data_model("diagonal_pair.yaml"), EvaluationPoint::parse("x=1", 2));
    EXPECT_TRUE(s.tracked_axes.empty());
    EXPECT_EQ(s.collapsed_axes, (std::vector<int>{0, 1}));

    auto spec = data_model("example1.yaml").spec();
    spec.residue_polys[0].position_coeffs = {1, 2};
    s = reduce_state(Model(spec), EvaluationPoint::ones(2));
    EXPECT_EQ(s.dropped_axes, std::vector<int>{1});
}

TEST(CountWalks, ExampleOneFirstTerms)
{
    Model m = data_model("example1.yaml");
    auto s = count_walks(m, 2, CoefficientDomain::integer(), EvaluationPoint::ones(2));
    auto c = s.univariate_coefficients();
    EXPECT_EQ(c[0], 1);
    EXPECT_EQ(c[1], 3);
    EXPECT_EQ(c, brute_totals(m, 2));
}

TEST(CountWalks, SimpleQuarterPlane)
{
    auto s = count_walks(data_model("simple_walk.yaml"), 2, CoefficientDomain::integer(), EvaluationPoint::ones(2));
    EXPECT_EQ(s.univariate_coefficients(), ints({1, 2, 6}));
}

TEST(CountWalks, AllStepsLeave)
{
    auto m = parse_model("dimension: 2\nnonneg_axes: 2\nmoduli: [1]\nresidue_polys: [{position_coeffs: [0, 0]}]\n"
                         "start: [0, 0]\nstep_sets: {\"0\": [\"-1 0\", \"0 -1\", \"-1 -1\"]}\n");
    auto s = count_walks(m, 5, CoefficientDomain::integer(), EvaluationPoint::ones(2));
    EXPECT_EQ(s.univariate_coefficients(), ints({1, 0, 0, 0, 0, 0}));
}

TEST(CountWalks, FullExampleOne)
{
    Model m = data_model("example1.yaml");
    auto full = count_walks_full(m, 1, CoefficientDomain::integer());
    const auto& f0 = full.per_class[0];
    const auto& f1 = full.per_class[1];
    EXPECT_EQ(f0.terms().size(), 1U);
    EXPECT_EQ(f0.coefficient({0, 0, 0}), 1);
    EXPECT_EQ(f1.terms().size(), 3U);
    EXPECT_EQ(f1.coefficient({1, 0, 1}), 1);
    EXPECT_EQ(f1.coefficient({0, 1, 1}), 1);
    EXPECT_EQ(f1.coefficient({0, -1, 1}), 1);
}

TEST(CountWalks, FullOrderZero)
{
    auto spec = data_model("example1.yaml").spec();
    spec.start = {2, -1};
    auto full = count_walks_full(Model(spec), 0, CoefficientDomain::integer());
    EXPECT_EQ(full.total.terms().size(), 1U);
    EXPECT_EQ(full.total.coefficient({2, -1, 0}), 1);
}

TEST(CountWalks, ParitySplit)
{
    Model m = data_model("darco.yaml");
    auto full = count_walks_full(m, 3, CoefficientDomain::integer());
    for (std::size_t r = 0; r < 2; ++r) {
        for (const auto& [e, c] : full.per_class[r].terms()) {
            EXPECT_EQ(static_cast<std::size_t>((e[0] + e[1]) % 2), r);
        }
    }
}

TEST(BruteForce, Examples)
{
    Model m = data_model("example1.yaml");
    auto one = brute_force(m, 1);
    EndpointCounts expected{{{0, 1}, 1}, {{1, 0}, 1}, {{0, -1}, 1}};
    EXPECT_EQ(one, expected);
    EXPECT_EQ(brute_force(m, 0), (EndpointCounts{{{0, 0}, 1}}));
    EXPECT_EQ(brute_force(data_model("diagonal_pair.yaml"), 2), (EndpointCounts{{{2, 2}, 1}}));
    EXPECT_THROW(brute_force(m, brute_force_max_length + 1), Error);
}

TEST(CountWalks, OracleEquivalenceRandom)
{
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        testkit::RandomModelOptions opt;
        opt.allow_weights = trial % 3 == 0;
        opt.time_only = trial % 4 == 1;
        opt.space_only = trial % 4 == 2;
        Model m = testkit::random_model(rng, opt);
        const int n = 8;
        auto full = count_walks_full(m, n, CoefficientDomain::integer());
        auto brute = brute_force_all(m, n);
        for (int len = 0; len <= n; ++len) {
            for (const auto& [pos, c] : brute[static_cast<std::size_t>(len)]) {
                Series::Exponent e(pos.begin(), pos.end());
                e.push_back(len);
                EXPECT_EQ(full.total.coefficient(e), c) << serialize(m);
            }
        }
        std::size_t brute_terms = 0;
        for (const auto& b : brute) {
            brute_terms += b.size();
        }
        EXPECT_EQ(full.total.terms().size(), brute_terms);
        // specialization and modular consistency
        auto exact = count_walks(m, n, CoefficientDomain::integer(), EvaluationPoint::ones(2));
        EXPECT_EQ(exact.univariate_coefficients(), coeffs(full.total));
        auto mod = count_walks(m, n, CoefficientDomain::modular(101), EvaluationPoint::ones(2));
        EXPECT_EQ(mod, exact.reduce_mod(101));
        auto mod_big = count_walks(m, n, CoefficientDomain::modular(2147483647U), EvaluationPoint::ones(2));
        EXPECT_EQ(mod_big, exact.reduce_mod(2147483647U));
    }
}

TEST(CountWalks, EvaluationPoints)
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 15; ++trial) {
        Model m = testkit::random_model(rng, {.dimension = 2, .max_steps = 4});
        const int n = 6;
        auto full = count_walks_full(m, n, CoefficientDomain::rational());
        for (const char* text : {"x=2,y=1/3", "x=symbolic,y=-1", "x=3,y=symbolic"}) {
            auto eval = EvaluationPoint::parse(text, 2);
            auto s = count_walks(m, n, CoefficientDomain::rational(), eval);
            // substitute into the full series by hand
            Series expect(CoefficientDomain::rational(), s.variables(), n);
            for (const auto& [e, c] : full.total.terms()) {
                Rational v = c;
                Series::Exponent out;
                for (std::size_t a = 0; a < 2; ++a) {
                    if (eval.values[a]) {
                        Rational f = 1;
                        const Rational base = e[a] >= 0 ? *eval.values[a] : 1 / *eval.values[a];
                        for (int i = 0; i < std::abs(e[a]); ++i) {
                            f *= base;
                        }
                        v *= f;
                    } else {
                        out.push_back(e[a]);
                    }
                }
                out.push_back(e.back());
                expect.add_term(out, v);
            }
            EXPECT_EQ(s, expect) << text << "\n" << serialize(m);
        }
    }
}

TEST(CountWalks, IntegerDomainRejectsFractionalEvaluation)
{
    Model m = data_model("example1.yaml");
    EXPECT_THROW(count_walks(m, 3, CoefficientDomain::integer(), EvaluationPoint::parse("x=1,y=2", 2)), Error);
    EXPECT_NO_THROW(count_walks(m, 3, CoefficientDomain::modular(45007), EvaluationPoint::parse("x=1,y=2", 2)));
}

TEST(CountWalks, CellLimit)
{
    Model m = data_model("darco.yaml");
    EXPECT_THROW(count_walks_full(m, 50, CoefficientDomain::integer(), {.cell_limit = 100}), Error);
}

TEST(SeriesJson, RoundTrip)
{
    Model m = data_model("example1.yaml");
    auto full = count_walks_full(m, 4, CoefficientDomain::integer()).total;
    EXPECT_EQ(Series::from_json(full.to_json()), full);
    auto mod = count_walks(m, 30, CoefficientDomain::modular(45007), EvaluationPoint::ones(2));
    EXPECT_EQ(Series::from_json(mod.to_json()), mod);
}
