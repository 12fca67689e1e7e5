#ifndef WALKFORGE_SERIES_HPP
#define WALKFORGE_SERIES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include <walkforge/arith.hpp>

namespace walkforge
{

/// Truncated power series in t whose coefficients may be Laurent
/// polynomials in spatial variables.
///
/// Variables are listed spatial-first; the last variable is always "t"
/// and its exponent never exceeds order(). Zero coefficients are never
/// stored. In the modular domain coefficients are kept reduced in [0, p).
class Series
{
public:
    using Exponent = std::vector<int>;

    Series(CoefficientDomain domain, std::vector<std::string> variables, int order);

    static Series univariate(CoefficientDomain domain, const std::vector<Rational>& coefficients);

    const CoefficientDomain& domain() const noexcept { return domain_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    int order() const noexcept { return order_; }
    std::size_t spatial_count() const noexcept { return variables_.size() - 1; }
    bool is_univariate() const noexcept { return variables_.size() == 1; }

    void add_term(const Exponent& exponent, const Rational& value);
    Rational coefficient(const Exponent& exponent) const;
    const std::map<Exponent, Rational>& terms() const noexcept { return terms_; }

    /// Dense coefficient list [t^0..t^order] of a univariate series.
    std::vector<Rational> univariate_coefficients() const;
    /// Same, as residues; requires the modular domain.
    std::vector<std::uint32_t> modular_coefficients() const;

    /// Sets every spatial variable to 1.
    Series sum_spatial() const;
    /// Reduces an exact series modulo p.
    Series reduce_mod(std::uint32_t p) const;

    nlohmann::json to_json() const;
    static Series from_json(const nlohmann::json& j);

    friend bool operator==(const Series& a, const Series& b)
    {
        return a.domain_ == b.domain_ && a.variables_ == b.variables_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

private:
    Rational normalize(const Rational& value) const;

    CoefficientDomain domain_;
    std::vector<std::string> variables_;
    int order_;
    std::map<Exponent, Rational> terms_;
};

/// Names of the spatial variables of a d-dimensional model: x, y for
/// d = 2 and x, y1, ..., y(d-1) otherwise.
std::vector<std::string> spatial_variable_names(int dimension);

/// 64-bit FNV-1a digest of the textual coefficient list.
std::uint64_t fingerprint(const Series& s);

} // namespace walkforge

#endif
