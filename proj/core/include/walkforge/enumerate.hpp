#ifndef WALKFORGE_ENUMERATE_HPP
#define WALKFORGE_ENUMERATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <walkforge/model.hpp>
#include <walkforge/series.hpp>

namespace walkforge
{

/// Value substituted for each spatial variable x, y_1, ...; nullopt keeps
/// the variable symbolic.
struct EvaluationPoint
{
    std::vector<std::optional<Rational>> values;

    static EvaluationPoint ones(int dimension);
    static EvaluationPoint symbolic(int dimension);
    /// "symbolic", or "x=1,y=2/3,..." where a value may also be "symbolic";
    /// unlisted variables are set to 1.
    static EvaluationPoint parse(const std::string& text, int dimension);
    std::string to_string(int dimension) const;
};

struct StateDescriptor
{
    /// Axes stored exactly: all constrained axes and every symbolic free axis.
    std::vector<int> tracked_axes;
    /// Free axes set to a constant but used by a residue polynomial, kept
    /// modulo collapsed_moduli[i].
    std::vector<int> collapsed_axes;
    std::vector<int> collapsed_moduli;
    /// Free axes set to a constant and absent from every residue polynomial.
    std::vector<int> dropped_axes;
    /// Period of the residue classes in n (1 if no polynomial uses n).
    int time_modulus = 1;
};

StateDescriptor reduce_state(const Model& model, const EvaluationPoint& eval);

struct EnumerationLimits
{
    /// Largest number of DP cells (and hence coefficients) allocated.
    std::size_t cell_limit = 100'000'000;
};

/// Weighted walk counts up to length N, as a series in t and the symbolic
/// variables of `eval`.
Series count_walks(const Model& model, int N, const CoefficientDomain& domain, const EvaluationPoint& eval,
                   const EnumerationLimits& limits = {});

/// F_r(x, y, t): walks whose endpoint (i, j) after n steps has p(i, j, n) = r.
struct FullCounts
{
    Series total;
    std::vector<Series> per_class;
};

FullCounts count_walks_full(const Model& model, int N, const CoefficientDomain& domain,
                            const EnumerationLimits& limits = {});

inline constexpr int brute_force_max_length = 14;

using EndpointCounts = std::map<std::vector<std::int64_t>, Rational>;

/// Exhaustive enumeration of all walks of length exactly n.
EndpointCounts brute_force(const Model& model, int n);
/// Endpoint counts for every length 0..n in one pass.
std::vector<EndpointCounts> brute_force_all(const Model& model, int n);

} // namespace walkforge

#endif
