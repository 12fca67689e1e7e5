#ifndef WALKFORGE_DIMENSION_HPP
#define WALKFORGE_DIMENSION_HPP

#include <optional>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include <walkforge/lp.hpp>
#include <walkforge/model.hpp>

namespace walkforge::dimension
{

/// Position of a step in the disjoint union of the step sets.
struct StepRef
{
    std::size_t cls = 0;
    std::size_t index = 0;
};

/// Steps of all classes in class order, then step order.
std::vector<StepRef> step_union(const Model& model);

/// One case of the Eulerian-path condition: a path from `start` to `end`
/// whose edges live on `active`, kept connected by a spanning tree of
/// edges that must each be used at least once.
struct EulerianSystem
{
    std::size_t start = 0;
    std::size_t end = 0;
    std::vector<bool> active;
    std::vector<std::pair<std::size_t, std::size_t>> tree;
};

/// Largest class count accepted by the case split.
inline constexpr std::size_t max_classes = 6;

std::vector<EulerianSystem> eulerian_systems(const Model& model);

/// Linear constraints of one case on the step counts.
lp::Program system_program(const Model& model, const EulerianSystem& system);

/// Whether a walk from the start point uses each step of the disjoint union
/// the given number of times (the region is ignored).
bool realizable(const Model& model, const std::vector<std::int64_t>& counts);

/// sum_u a_u u_i >= 0 for every constrained axis i, as coefficient rows.
std::vector<std::vector<std::int64_t>> endpoint_inequalities(const Model& model);

struct Implication
{
    bool implied = false;
    /// Farkas multipliers, one list per system, when implied.
    std::vector<std::vector<Rational>> farkas;
    /// When not implied: the LP point, the system it came from, and an
    /// integral realizable counterexample if one was found.
    std::optional<std::vector<Rational>> rational_witness;
    std::size_t witness_system = 0;
    std::optional<std::vector<BigInt>> integer_witness;
};

Implication implies(const Model& model, const std::vector<EulerianSystem>& systems, const std::vector<int>& kept,
                    int target);

struct Rejection
{
    std::vector<int> subset;
    int target = 0;
    Implication implication;
};

struct DimensionReport
{
    std::vector<std::vector<std::int64_t>> inequalities;
    std::vector<int> implying_subset;
    int delta = 0;
    /// Certificates of the omitted inequalities for the chosen subset.
    std::vector<std::pair<int, Implication>> certificates;
    /// Smaller subsets that fail, each with one non-implied target.
    std::vector<Rejection> rejections;

    nlohmann::json to_json() const;
};

DimensionReport dimension(const Model& model);

} // namespace walkforge::dimension

#endif
