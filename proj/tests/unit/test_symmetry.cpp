#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <set>

#include <walkforge/model_io.hpp>
#include <walkforge/symmetry.hpp>

using namespace walkforge;

namespace
{

std::uint64_t count_for(const std::vector<OrbitCount>& counts, SymmetryConvention c, bool empty)
{
    for (const auto& oc : counts) {
        if (oc.convention == c && oc.include_empty == empty) {
            return oc.orbits;
        }
    }
    ADD_FAILURE() << "missing convention";
    return 0;
}

} // namespace

TEST(Symmetry, DiagonalReflectionSharesCanonicalForm)
{
    const auto gens = convention_generators(SymmetryConvention::diagonal);
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        const unsigned a = 1 + rng() % 255;
        const unsigned b = 1 + rng() % 255;
        for (auto fam : {Family::space, Family::time}) {
            const Model m = family_model(fam, a, b);
            const Model r = apply(diagonal_reflection(), m);
            const Model c = canonical_form(m, gens);
            EXPECT_EQ(canonical_key(c), canonical_key(canonical_form(r, gens)));
            EXPECT_EQ(canonical_key(canonical_form(c, gens)), canonical_key(c));
            EXPECT_LE(canonical_key(c), canonical_key(m));
        }
    }
}

TEST(Symmetry, FixedPointIsItsOwnCanonicalForm)
{
    // {N, E} and {S, W} are both symmetric under x <-> y
    const Model m = family_model(Family::space, 0b101, 0b1010000);
    EXPECT_EQ(canonical_key(apply(diagonal_reflection(), m)), canonical_key(m));
    EXPECT_EQ(canonical_key(canonical_form(m, {diagonal_reflection()})), canonical_key(m));
}

TEST(Symmetry, IncompatibleSymmetriesRejected)
{
    const Model m = family_model(Family::space, 3, 5);
    EXPECT_THROW(apply(Symmetry{{0, 1}, {-1, 1}, 0}, m), ModelError);
    EXPECT_THROW(apply(Symmetry{{0, 0}, {1, 1}, 0}, m), ModelError);
}

TEST(Symmetry, GroupClosure)
{
    EXPECT_EQ(close_group({diagonal_reflection()}, 2, 2).size(), 2U);
    EXPECT_EQ(close_group({diagonal_reflection(), pair_swap()}, 2, 2).size(), 4U);
    EXPECT_EQ(close_group({}, 2, 2).size(), 1U);
}

TEST(Symmetry, PairOrbitCounts)
{
    const auto counts = pair_orbit_counts();
    ASSERT_EQ(counts.size(), 8U);
    // Burnside: (255^2 + 31^2) / 2 fixed by reflection on nonempty pairs
    EXPECT_EQ(count_for(counts, SymmetryConvention::diagonal, false), 32993U);
    EXPECT_EQ(count_for(counts, SymmetryConvention::diagonal, true), (65536U + 1024U) / 2);
    EXPECT_EQ(count_for(counts, SymmetryConvention::none, true), 65536U);
    EXPECT_EQ(count_for(counts, SymmetryConvention::none, false), 65025U);
    // pair swap fixes the 256 diagonal pairs; both together also fix (A, rA)
    EXPECT_EQ(count_for(counts, SymmetryConvention::swap, true), (65536U + 256U) / 2);
    EXPECT_EQ(count_for(counts, SymmetryConvention::diagonal_and_swap, true), (65536U + 1024U + 256U + 256U) / 4);
    for (const auto& oc : counts) {
        EXPECT_EQ(oc.ordered_pairs, oc.include_empty ? 65536U : 65025U);
    }
}

TEST(Symmetry, ModelSpaceMatchesOrbitCount)
{
    FamilyConfig cfg;
    cfg.family = Family::space;
    const auto all = enumerate_model_space(cfg);
    EXPECT_EQ(all.size(), 32993U);
    std::set<std::string> keys;
    for (const auto& m : all) {
        keys.insert(canonical_key(m));
    }
    EXPECT_EQ(keys.size(), all.size());
}

TEST(Symmetry, SamplingIsDeterministic)
{
    FamilyConfig cfg;
    cfg.family = Family::time;
    cfg.seed = 1;
    cfg.limit = 10;
    const auto a = enumerate_model_space(cfg);
    const auto b = enumerate_model_space(cfg);
    ASSERT_EQ(a.size(), 10U);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].label(), b[i].label());
    }
    cfg.seed = 2;
    const auto c = enumerate_model_space(cfg);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        differs = differs || a[i].label() != c[i].label();
    }
    EXPECT_TRUE(differs);
}

TEST(Symmetry, HomogeneousExcluded)
{
    FamilyConfig cfg;
    cfg.family = Family::space;
    cfg.exclude_homogeneous = true;
    const auto all = enumerate_model_space(cfg);
    for (const auto& m : all) {
        EXPECT_NE(m.step_set(0), m.step_set(1));
        EXPECT_EQ(classify_inhomogeneity(m), Inhomogeneity::space_inhomogeneous);
    }
    // the 31 reflection-symmetric and 224/2 other homogeneous orbits are dropped
    EXPECT_EQ(all.size(), 32993U - 31U - 112U);
}

TEST(Symmetry, FamilyTags)
{
    EXPECT_EQ(classify_inhomogeneity(family_model(Family::time, 3, 5)), Inhomogeneity::time_inhomogeneous);
    EXPECT_EQ(classify_inhomogeneity(family_model(Family::space, 3, 3)), Inhomogeneity::homogeneous);
    EXPECT_EQ(family_label(Family::space, 1, 0b11), "space:{N}:{N,NE}");
    EXPECT_EQ(parse_family("time"), Family::time);
    EXPECT_THROW(parse_family("mixed"), Error);
    EXPECT_EQ(parse_convention("diagonal+swap"), SymmetryConvention::diagonal_and_swap);
}
