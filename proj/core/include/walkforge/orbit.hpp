#ifndef WALKFORGE_ORBIT_HPP
#define WALKFORGE_ORBIT_HPP

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include <walkforge/birational.hpp>
#include <walkforge/model.hpp>

namespace walkforge::orbit
{

using Group = std::vector<GroupElement>;

/// sum over g of sgn(g) g(f).
TruncatedLaurent orbit_sum(const TruncatedLaurent& f, const Group& group);
LaurentPoly orbit_sum(const LaurentPoly& p, const Group& group, int x_floor);

/// [x^{>0} y^{>0}].
TruncatedLaurent positive_part(const TruncatedLaurent& f);
LaurentPoly positive_part(const LaurentPoly& p);

/// Substitution image of a Laurent polynomial.
LaurentPoly apply(const BirationalMap& g, const LaurentPoly& p, int x_floor);

LaurentPoly to_laurent(const SparseLaurent& p);

/// x + 1/x.
Expr x_plus_inverse();
/// (1/x, y), (x, 1/y).
BirationalMap flip_x();
BirationalMap flip_y();

/// Kind of boundary value a term of a quarter-plane equation involves.
enum class Boundary { x_axis, y_axis, corner };

std::string to_string(Boundary b);

/// Term coefficient * x y F_source(boundary) of the equation for F_equation,
/// after multiplying the equation by xy; coefficient excludes the factor t.
struct BoundaryTerm
{
    std::size_t equation = 0;
    std::size_t source = 0;
    Boundary kind = Boundary::x_axis;
    LaurentPoly coefficient;
};

/// Boundary terms of the quarter-plane equations
/// F_s = [s = start] + t sum_r S_r^s F_r - t sum_r [y<0]S_r^s F_r(x,0)
///       - t sum_r [x<0]S_r^s F_r(0,y) + t sum_r [x<0,y<0]S_r^s F_r(0,0).
/// Requires a 2D model with both axes constrained, unit steps and residue
/// classes independent of the position of the boundary point being
/// replaced (checked).
std::vector<BoundaryTerm> boundary_terms(const Model& model);

/// xy F_r(x,0), xy F_r(0,y) or xy F_r(0,0) multiplied by the coefficient.
TruncatedLaurent boundary_series(const BoundaryTerm& term, const TruncatedLaurent& F_source);

/// Residual of every quarter-plane equation on the enumerated series; zero
/// when the equations are right.
std::vector<TruncatedLaurent> equation_residuals(const Model& model, const std::vector<TruncatedLaurent>& F);

struct Check
{
    std::string name;
    bool holds = false;
    /// (t, x, y) of the first differing coefficient.
    std::optional<std::tuple<int, int, int>> first_difference;
    std::string detail;

    nlohmann::json to_json() const;
};

struct ComparisonReport
{
    std::string example;
    int terms = 0;
    int x_floor = 0;
    bool match = false;
    std::optional<std::tuple<int, int, int>> first_mismatch;
    Rational expected;
    Rational computed;
    std::size_t coefficients_compared = 0;
    std::vector<Check> checks;
    double seconds = 0;

    nlohmann::json to_json() const;
};

/// Groups of the two worked examples.
Group darco_group();
Group time_inhom_group_even();
Group time_inhom_group_odd();

Model darco_model();
Model time_inhom_model();

struct ReproduceOptions
{
    /// Flips the sign of one nontrivial group element in the closed formula.
    bool flip_sign = false;
    /// Also evaluate the relations and boundary cancellations up to this order (-1 skips).
    int check_order = -1;
};

/// F_1 of the parity walk by its closed orbit-sum formula versus enumeration.
ComparisonReport reproduce_darco(int N, const ReproduceOptions& options = {});
/// F_0 of the alternating walk by its closed orbit-sum formula versus enumeration.
ComparisonReport reproduce_time_inhom(int N, const ReproduceOptions& options = {});

/// Orbit sums of every boundary term under the group attached to its equation.
std::vector<Check> boundary_cancellation(const Model& model, const std::vector<Group>& groups, int N, int x_floor);

} // namespace walkforge::orbit

#endif
