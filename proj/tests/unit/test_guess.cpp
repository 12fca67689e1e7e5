#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include <walkforge/enumerate.hpp>
#include <walkforge/guess.hpp>
#include <walkforge/model_io.hpp>
#include <walkforge/modular_linalg.hpp>

using namespace walkforge;
using namespace walkforge::guess;

namespace
{

constexpr std::uint32_t P = 45007;

Model data_model(const std::string& name)
{
    return load_model(std::string(WALKFORGE_DATA_DIR) + "/" + name);
}

std::vector<std::uint32_t> model_terms(const std::string& name, int n)
{
    return count_walks(data_model(name), n - 1, CoefficientDomain::modular(P), EvaluationPoint::ones(2)).modular_coefficients();
}

std::vector<std::uint32_t> reduce(const std::vector<BigInt>& v, std::uint32_t p)
{
    std::vector<std::uint32_t> out;
    for (const auto& x : v) {
        out.push_back(static_cast<std::uint32_t>(x % p));
    }
    return out;
}

std::vector<BigInt> central_binomials(int n)
{
    std::vector<BigInt> out = {1};
    for (int k = 1; k < n; ++k) {
        out.push_back(out.back() * (4 * k - 2) / k);
    }
    return out;
}

std::vector<BigInt> catalan(int n)
{
    std::vector<BigInt> out;
    auto c = central_binomials(n);
    for (int k = 0; k < n; ++k) {
        out.push_back(c[static_cast<std::size_t>(k)] / (k + 1));
    }
    return out;
}

// u = lambda v for some nonzero lambda
bool proportional(const std::vector<std::vector<std::uint32_t>>& u, const std::vector<std::vector<std::int64_t>>& v, std::uint32_t p)
{
    PrimeField f(p);
    if (u.size() != v.size()) {
        return false;
    }
    std::optional<std::uint32_t> lambda;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].size() != v[i].size()) {
            return false;
        }
        for (std::size_t j = 0; j < u[i].size(); ++j) {
            const auto vv = f.from_int(v[i][j]);
            if (vv == 0 || u[i][j] == 0) {
                if (vv != u[i][j]) {
                    return false;
                }
                continue;
            }
            const auto l = f.mul(u[i][j], f.inv(vv));
            if (lambda && *lambda != l) {
                return false;
            }
            lambda = l;
        }
    }
    return lambda.has_value();
}

bool all_zero(const std::vector<std::uint32_t>& v)
{
    return std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; });
}

} // namespace

TEST(ModularLinalg, PlantedKernel)
{
    std::mt19937_64 rng(3);
    PrimeField f(P);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t cols = 3 + trial % 7;
        const std::size_t rows = cols + 4;
        std::vector<std::uint32_t> x(cols);
        for (auto& c : x) {
            c = static_cast<std::uint32_t>(rng() % P);
        }
        x.back() = 1;
        ModMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            std::uint32_t s = 0;
            for (std::size_t c = 0; c + 1 < cols; ++c) {
                m.at(r, c) = static_cast<std::uint32_t>(rng() % P);
                s = f.add(s, f.mul(m.at(r, c), x[c]));
            }
            m.at(r, cols - 1) = f.neg(s);
        }
        auto basis = nullspace(m, P);
        ASSERT_EQ(basis.size(), 1U);
        EXPECT_EQ(basis[0], x);
        EXPECT_EQ(rank(m, P), cols - 1);
        auto v = first_kernel_vector(m, P);
        ASSERT_TRUE(v);
        EXPECT_EQ(*v, x);
    }
}

TEST(ModularLinalg, KernelVectorsAnnihilate)
{
    std::mt19937_64 rng(11);
    PrimeField f(7);
    for (int trial = 0; trial < 50; ++trial) {
        ModMatrix m(4, 6);
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 6; ++c) {
                m.at(r, c) = static_cast<std::uint32_t>(rng() % 3 == 0 ? rng() % 7 : 0);
            }
        }
        auto basis = nullspace(m, 7);
        EXPECT_EQ(basis.size() + rank(m, 7), 6U);
        for (const auto& v : basis) {
            for (std::size_t r = 0; r < 4; ++r) {
                std::uint32_t s = 0;
                for (std::size_t c = 0; c < 6; ++c) {
                    s = f.add(s, f.mul(m.at(r, c), v[c]));
                }
                EXPECT_EQ(s, 0U);
            }
        }
        // the first kernel vector ends at the first free column
        auto v = first_kernel_vector(m, 7);
        ASSERT_TRUE(v);
        std::size_t last = 0;
        for (std::size_t c = 0; c < 6; ++c) {
            if ((*v)[c] != 0) {
                last = c;
            }
        }
        EXPECT_EQ((*v)[last], 1U);
        EXPECT_EQ(*v, basis.front());
    }
}

TEST(ModularLinalg, DeterminantMatchesLeibniz)
{
    std::mt19937_64 rng(5);
    PrimeField f(101);
    for (int trial = 0; trial < 30; ++trial) {
        ModMatrix m(3, 3);
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                m.at(r, c) = static_cast<std::uint32_t>(rng() % 101);
            }
        }
        std::vector<int> perm = {0, 1, 2};
        std::uint32_t det = 0;
        do {
            int inversions = 0;
            for (int i = 0; i < 3; ++i) {
                for (int j = i + 1; j < 3; ++j) {
                    inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
                }
            }
            std::uint32_t term = 1;
            for (std::size_t i = 0; i < 3; ++i) {
                term = f.mul(term, m.at(i, static_cast<std::size_t>(perm[i])));
            }
            det = inversions % 2 ? f.sub(det, term) : f.add(det, term);
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_EQ(determinant(m, 101), det);
    }
}

TEST(FitRecurrence, GeometricSeries)
{
    std::vector<std::uint32_t> a = {1};
    PrimeField f(P);
    for (int n = 1; n < 60; ++n) {
        a.push_back(f.mul(a.back(), 2));
    }
    auto eq = fit_recurrence(a, P, 1, 0);
    ASSERT_TRUE(eq);
    EXPECT_EQ(eq->order, 1);
    EXPECT_EQ(eq->degree, 0);
    EXPECT_EQ(eq->coefficients, (std::vector<std::vector<std::uint32_t>>{{P - 2}, {1}}));
    EXPECT_EQ(eq->status, Status::verified);
    EXPECT_GE(eq->terms_verified, held_out_margin(60));
}

TEST(FitRecurrence, CentralBinomials)
{
    auto a = reduce(central_binomials(200), P);
    auto eq = fit_recurrence(a, P, 3, 3);
    ASSERT_TRUE(eq);
    EXPECT_EQ(eq->order, 1);
    EXPECT_EQ(eq->degree, 1);
    // (n+1) a(n+1) - (4n+2) a(n)
    EXPECT_TRUE(proportional(eq->coefficients, {{-2, -4}, {1, 1}}, P)) << eq->to_string();
    EXPECT_TRUE(all_zero(residuals(*eq, a)));
}

TEST(FitRecurrence, RandomSequenceHasNoSmallRecurrence)
{
    std::mt19937_64 rng(17);
    std::vector<std::uint32_t> a(10000);
    for (auto& c : a) {
        c = static_cast<std::uint32_t>(rng() % P);
    }
    EXPECT_FALSE(fit_recurrence(a, P, 8, 8));
    EXPECT_FALSE(fit_differential(a, P, 8, 8));
    EXPECT_FALSE(fit_algebraic(a, P, 8, 8));
}

TEST(FitDifferential, GeometricOneOverOneMinusT)
{
    std::vector<std::uint32_t> a(60, 1);
    auto eq = fit_differential(a, P, 3, 3);
    ASSERT_TRUE(eq);
    // (1 - t) F' - F
    EXPECT_TRUE(proportional(eq->coefficients, {{-1, 0}, {1, -1}}, P)) << eq->to_string();
}

TEST(FitAlgebraic, OneOverOneMinusT)
{
    std::vector<std::uint32_t> a(60, 1);
    auto eq = fit_algebraic(a, P, 3, 3);
    ASSERT_TRUE(eq);
    // (1 - t) F - 1
    EXPECT_TRUE(proportional(eq->coefficients, {{-1, 0}, {1, -1}}, P)) << eq->to_string();
}

TEST(FitAlgebraic, CatalanFromFiftyTerms)
{
    auto a = reduce(catalan(50), P);
    auto eq = fit_algebraic(a, P, 2, 2);
    ASSERT_TRUE(eq);
    // t F^2 - F + 1
    EXPECT_TRUE(proportional(eq->coefficients, {{1, 0}, {-1, 0}, {0, 1}}, P)) << eq->to_string();
    EXPECT_EQ(eq->status, Status::verified);

    auto more = reduce(catalan(1000), P);
    EXPECT_EQ(verify(*eq, more), Status::verified);
    EXPECT_EQ(eq->terms_verified, 1000 - eq->terms_used);

    auto broken = *eq;
    broken.coefficients[1][0] = (broken.coefficients[1][0] + 1) % P;
    EXPECT_EQ(verify(broken, more), Status::refuted);

    auto exact = *eq;
    EXPECT_EQ(verify(exact, std::vector<std::uint32_t>(more.begin(), more.begin() + eq->terms_used)), Status::unverified);

    const std::uint32_t q = 1000003;
    EXPECT_TRUE(confirm_with_prime(*eq, reduce(catalan(50), q), q));
}

TEST(FitAlgebraic, ExampleOneFromFourHundredTerms)
{
    auto a = model_terms("example1.yaml", 400);
    auto eq = fit_algebraic(a, P, 8, 40);
    ASSERT_TRUE(eq);
    EXPECT_EQ(eq->status, Status::verified);
    EXPECT_EQ(eq->order, 4);
    EXPECT_EQ(eq->degree, 7);
    auto more = model_terms("example1.yaml", 800);
    EXPECT_EQ(verify(*eq, more), Status::verified);
    EXPECT_TRUE(all_zero(residuals(*eq, more)));
}

TEST(FitDifferential, DArcoModel)
{
    auto a = model_terms("darco.yaml", 400);
    auto eq = fit_differential(a, P, 8, 30);
    ASSERT_TRUE(eq);
    EXPECT_EQ(eq->status, Status::verified);
    EXPECT_EQ(eq->order, 3);
    EXPECT_EQ(eq->degree, 9);
    EXPECT_TRUE(all_zero(residuals(*eq, a)));

    // independently guessed recurrence and the one implied by the ODE agree on the data
    auto rec = ode_to_recurrence(*eq);
    EXPECT_EQ(verify(rec, a), Status::verified);
    auto direct = fit_recurrence(a, P, 12, 12);
    ASSERT_TRUE(direct);
    EXPECT_EQ(direct->status, Status::verified);
    EXPECT_TRUE(all_zero(residuals(*direct, a)));
}

TEST(OdeToRecurrence, CentralBinomials)
{
    auto a = reduce(central_binomials(300), P);
    auto ode = fit_differential(a, P, 3, 3);
    ASSERT_TRUE(ode);
    auto rec = ode_to_recurrence(*ode);
    EXPECT_EQ(verify(rec, a), Status::verified);
    auto broken = rec;
    broken.coefficients[0][0] = (broken.coefficients[0][0] + 1) % P;
    EXPECT_EQ(verify(broken, a), Status::refuted);
}

TEST(Fit, InsufficientTermsAndDeterminism)
{
    auto a = reduce(catalan(50), P);
    EXPECT_THROW(fit_algebraic(a, P, 8, 8), InsufficientTerms);
    EXPECT_THROW(fit_recurrence(a, 10, 1, 1), Error);
    auto b = reduce(central_binomials(300), P);
    auto e1 = fit_differential(b, P, 4, 6);
    auto e2 = fit_differential(b, P, 4, 6);
    ASSERT_TRUE(e1 && e2);
    EXPECT_EQ(e1->to_json(), e2->to_json());
}

TEST(Fit, SeriesOverloadsAndJson)
{
    auto s = count_walks(data_model("example1.yaml"), 399, CoefficientDomain::modular(P), EvaluationPoint::ones(2));
    auto eq = fit_algebraic(s, 6, 20);
    ASSERT_TRUE(eq);
    auto back = GuessedEquation::from_json(eq->to_json());
    EXPECT_EQ(back.to_json(), eq->to_json());
    EXPECT_EQ(verify(back, s), Status::verified);
    auto exact = count_walks(data_model("example1.yaml"), 50, CoefficientDomain::integer(), EvaluationPoint::ones(2));
    EXPECT_THROW(fit_algebraic(exact, 2, 2), Error);
    EXPECT_EQ(parse_kind("ode"), EquationKind::differential);
    EXPECT_THROW(parse_kind("poly"), Error);
}
