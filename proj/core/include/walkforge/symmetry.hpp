#ifndef WALKFORGE_SYMMETRY_HPP
#define WALKFORGE_SYMMETRY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <walkforge/model.hpp>

namespace walkforge
{

/// Signed axis permutation v'_a = signs[a] * v[permutation[a]], optionally
/// combined with a cyclic relabelling r -> r + class_shift of the residue
/// classes (single-modulus models only).
struct Symmetry
{
    std::vector<int> permutation;
    std::vector<int> signs;
    int class_shift = 0;

    friend bool operator==(const Symmetry&, const Symmetry&) = default;
};

Symmetry identity_symmetry(int dimension);
/// (x, y) -> (y, x).
Symmetry diagonal_reflection();
/// Exchanges S_0 and S_1 of a two-class model.
Symmetry pair_swap(int dimension = 2);

/// Composition: (a * b)(M) = a(b(M)).
Symmetry compose(const Symmetry& a, const Symmetry& b, int shift_modulus);

/// Throws ModelError if the symmetry does not map the region to itself or
/// changes a residue polynomial modulo its modulus.
Model apply(const Symmetry& g, const Model& model);

std::vector<Symmetry> close_group(const std::vector<Symmetry>& generators, int dimension, int shift_modulus);

/// Representative with the lexicographically least canonical_key() over
/// the group generated by `symmetries`; keeps the input label.
Model canonical_form(const Model& model, const std::vector<Symmetry>& symmetries);

enum class SymmetryConvention { none, diagonal, swap, diagonal_and_swap };

std::string to_string(SymmetryConvention c);
SymmetryConvention parse_convention(const std::string& text);

/// Quarter-plane, small steps, k = 1, m = 2, start at the origin;
/// p = i + j for the space family and p = n for the time family.
enum class Family { space, time };

std::string to_string(Family f);
Family parse_family(const std::string& text);

/// Bit b of a mask selects compass direction b (N = bit 0, ..., NW = bit 7).
Model family_model(Family family, unsigned mask0, unsigned mask1);
std::string family_label(Family family, unsigned mask0, unsigned mask1);

struct FamilyConfig
{
    Family family = Family::space;
    SymmetryConvention convention = SymmetryConvention::diagonal;
    bool include_empty = false;
    bool exclude_homogeneous = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> limit;
};

/// One canonical representative per orbit, ordered by (mask0, mask1).
/// With a seed, a uniform sample of size limit (still in that order);
/// without one, the first limit representatives.
std::vector<Model> enumerate_model_space(const FamilyConfig& config);

std::vector<Symmetry> convention_generators(SymmetryConvention c);

struct OrbitCount
{
    SymmetryConvention convention;
    bool include_empty;
    std::uint64_t ordered_pairs;
    std::uint64_t orbits;
};

/// Orbits of ordered step-set pairs under each convention, with and without
/// empty step sets, computed by explicit enumeration.
std::vector<OrbitCount> pair_orbit_counts();

} // namespace walkforge

#endif
