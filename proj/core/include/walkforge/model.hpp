#ifndef WALKFORGE_MODEL_HPP
#define WALKFORGE_MODEL_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <walkforge/arith.hpp>

namespace walkforge
{

/// Raised for semantically invalid models (start outside the region,
/// residue keys out of range, arity mismatches, ...).
class ModelError : public Error
{
public:
    using Error::Error;
};

struct Step
{
    std::vector<int> displacement;
    Rational weight{1};

    friend bool operator==(const Step&, const Step&) = default;
};

/// Affine form constant + <position_coeffs, (i, j_1, ..., j_{d-1})> + time_coeff * n.
struct ResiduePolynomial
{
    std::int64_t constant = 0;
    std::vector<std::int64_t> position_coeffs;
    std::int64_t time_coeff = 0;

    std::int64_t evaluate(std::span<const std::int64_t> position, std::int64_t n) const;

    friend bool operator==(const ResiduePolynomial&, const ResiduePolynomial&) = default;
};

struct ResidueVector
{
    std::vector<int> entries;

    friend auto operator<=>(const ResidueVector&, const ResidueVector&) = default;
};

/// Plain description used to build a Model.
struct ModelSpec
{
    int dimension = 2;
    int nonneg_axes = 0;
    std::vector<int> moduli;
    std::vector<ResiduePolynomial> residue_polys;
    /// Missing residue vectors denote empty step sets.
    std::map<ResidueVector, std::vector<Step>> step_sets;
    std::vector<std::int64_t> start;
    std::string label;
};

/// An inhomogeneous lattice walk model in Z_{>=0}^p x Z^q.
///
/// Residue classes are numbered 0..class_count()-1 in lexicographic order
/// of their residue vectors. Step sets are kept sorted in canonical step
/// order (see step_less), so two models are equal iff they describe the
/// same walks with the same weights. Instances are immutable.
class Model
{
public:
    explicit Model(ModelSpec spec);

    int dimension() const noexcept { return dimension_; }
    int nonneg_axes() const noexcept { return nonneg_axes_; }
    int free_axes() const noexcept { return dimension_ - nonneg_axes_; }
    const std::vector<int>& moduli() const noexcept { return moduli_; }
    const std::vector<ResiduePolynomial>& residue_polys() const noexcept { return residue_polys_; }
    const std::vector<std::int64_t>& start() const noexcept { return start_; }
    const std::string& label() const noexcept { return label_; }

    std::size_t class_count() const noexcept { return step_sets_.size(); }
    ResidueVector residue_vector(std::size_t class_index) const;
    std::size_t class_index(const ResidueVector& r) const;
    /// Class selecting the next step at `position` after n steps.
    std::size_t class_at(std::span<const std::int64_t> position, std::int64_t n) const;
    std::size_t start_class() const { return class_at(start_, 0); }

    const std::vector<Step>& step_set(std::size_t class_index) const { return step_sets_.at(class_index); }
    const std::vector<std::vector<Step>>& step_sets() const noexcept { return step_sets_; }
    bool in_region(std::span<const std::int64_t> position) const;
    /// Largest |component| over all steps.
    int max_step_length() const;

    ModelSpec spec() const;
    Model with_label(std::string label) const;

    friend bool operator==(const Model&, const Model&) = default;

private:
    int dimension_;
    int nonneg_axes_;
    std::vector<int> moduli_;
    std::vector<ResiduePolynomial> residue_polys_;
    std::vector<std::vector<Step>> step_sets_;
    std::vector<std::int64_t> start_;
    std::string label_;
};

/// Canonical step order: the eight 2D unit steps in compass order
/// N, NE, E, SE, S, SW, W, NW first, then all other displacements
/// lexicographically; ties broken by weight.
bool step_less(const Step& a, const Step& b);

/// Compass index 0..7 of a 2D unit step, or -1.
int compass_index(std::span<const int> displacement);
const std::vector<std::string>& compass_names();
std::vector<int> compass_displacement(int index);

/// Sparse Laurent polynomial in x, y_1, ..., y_{d-1}.
using SparseLaurent = std::map<std::vector<int>, Rational>;

/// The subsets S_r^s of each step set and their weighted Laurent encodings.
struct TransitionTable
{
    std::size_t class_count = 0;
    /// target[r][i]: class reached by step i of S_r.
    std::vector<std::vector<std::size_t>> target;
    /// subsets[r][s]: indices (into S_r) of the steps moving class r to s.
    std::vector<std::vector<std::vector<std::size_t>>> subsets;
    /// laurent[r][s] = sum of w_r(u) x^u y^v over subsets[r][s].
    std::vector<std::vector<SparseLaurent>> laurent;

    std::vector<Step> steps(const Model& model, std::size_t r, std::size_t s) const;
};

TransitionTable transition_table(const Model& model);

/// Class reached from class r by a step with the given displacement; well
/// defined because residue polynomials are affine.
std::size_t target_class(const Model& model, std::size_t r, std::span<const int> displacement);

enum class Inhomogeneity { homogeneous, time_inhomogeneous, space_inhomogeneous, mixed };

Inhomogeneity classify_inhomogeneity(const Model& model);
std::string to_string(Inhomogeneity tag);

} // namespace walkforge

#endif
