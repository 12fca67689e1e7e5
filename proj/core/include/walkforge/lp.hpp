#ifndef WALKFORGE_LP_HPP
#define WALKFORGE_LP_HPP

#include <optional>
#include <vector>

#include <walkforge/arith.hpp>

namespace walkforge::lp
{

enum class Sense { le, ge, eq };

struct Constraint
{
    std::vector<Rational> coeffs;
    Sense sense = Sense::eq;
    Rational rhs;
};

/// Feasibility of { x >= 0 : every constraint holds } over the rationals.
struct Program
{
    std::size_t variables = 0;
    std::vector<Constraint> constraints;

    void add(std::vector<Rational> coeffs, Sense sense, Rational rhs);
};

struct Result
{
    bool feasible = false;
    /// A feasible point (basic solution) when feasible.
    std::vector<Rational> point;
    /// One multiplier per constraint when infeasible: y >= 0 on ">=" rows,
    /// y <= 0 on "<=" rows, y^T A <= 0 and y^T b > 0.
    std::vector<Rational> farkas;
};

/// Phase I of the simplex method with Bland's rule in exact arithmetic.
Result solve(const Program& program);

bool satisfies(const Program& program, const std::vector<Rational>& x);
bool check_farkas(const Program& program, const std::vector<Rational>& y);

/// Integral feasible point by depth-first branch and bound; gives up after
/// `node_limit` LP solves.
std::optional<std::vector<BigInt>> integer_point(const Program& program, int node_limit = 2000);

} // namespace walkforge::lp

#endif
