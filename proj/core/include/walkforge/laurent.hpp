#ifndef WALKFORGE_LAURENT_HPP
#define WALKFORGE_LAURENT_HPP

#include <climits>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include <walkforge/series.hpp>

namespace walkforge::orbit
{

/// Exponents of x and y.
using Monomial = std::pair<int, int>;
/// Laurent polynomial in x, y; terms with x-exponent below the active floor are dropped.
using LaurentPoly = std::map<Monomial, Rational>;

inline constexpr int no_floor = INT_MIN;

void add_to(LaurentPoly& p, const Monomial& m, const Rational& c);
LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly scale(const LaurentPoly& a, const Rational& c);
LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b, int x_floor = no_floor);
LaurentPoly monomial(int a, int b, const Rational& c = 1);

/// 1/p expanded in decreasing powers of x: the terms of highest x-degree
/// must form a single monomial, and the expansion stops at x_floor (which
/// must be finite unless p is a monomial).
LaurentPoly reciprocal(const LaurentPoly& p, int x_floor);
/// p^k for any integer k, negative powers via reciprocal.
LaurentPoly power(const LaurentPoly& p, int k, int x_floor);

int max_x_degree(const LaurentPoly& p);

/// Power series in t up to t^order with LaurentPoly coefficients.
class TruncatedLaurent
{
public:
    explicit TruncatedLaurent(int order, int x_floor = no_floor);

    static TruncatedLaurent constant(const LaurentPoly& p, int order, int x_floor = no_floor);
    /// Series over (x, y, t) with any coefficient domain except modular.
    static TruncatedLaurent from_series(const Series& s, int x_floor = no_floor);

    int order() const noexcept { return order_; }
    int x_floor() const noexcept { return x_floor_; }
    const std::vector<LaurentPoly>& coefficients() const noexcept { return coeffs_; }
    const LaurentPoly& at(int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }

    void add_term(int n, int a, int b, const Rational& c);
    Rational coefficient(int n, int a, int b) const;

    TruncatedLaurent operator+(const TruncatedLaurent& o) const;
    TruncatedLaurent operator-(const TruncatedLaurent& o) const;
    TruncatedLaurent operator*(const TruncatedLaurent& o) const;
    TruncatedLaurent scaled(const Rational& c) const;
    /// Multiplies by t^k.
    TruncatedLaurent times_t(int k) const;
    /// Multiplies by x^dx y^dy.
    TruncatedLaurent shifted(int dx, int dy) const;
    /// 1/f; the t^0 coefficient must admit a reciprocal.
    TruncatedLaurent inverse() const;
    /// Keeps the terms with x-exponent >= min_x.
    TruncatedLaurent restricted(int min_x) const;

    bool is_zero() const;
    std::size_t term_count() const;
    /// First (t, x, y) where the two differ, in (t, x, y) order.
    std::optional<std::tuple<int, int, int>> first_difference(const TruncatedLaurent& o) const;

    Series to_series() const;

private:
    int order_;
    int x_floor_;
    std::vector<LaurentPoly> coeffs_;
};

} // namespace walkforge::orbit

#endif
