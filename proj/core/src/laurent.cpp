#include <walkforge/laurent.hpp>

#include <algorithm>

namespace walkforge::orbit
{

void add_to(LaurentPoly& p, const Monomial& m, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = p.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            p.erase(it);
        }
    }
}

LaurentPoly add(const LaurentPoly& a, const LaurentPoly& b)
{
    LaurentPoly out = a;
    for (const auto& [m, c] : b) {
        add_to(out, m, c);
    }
    return out;
}

LaurentPoly scale(const LaurentPoly& a, const Rational& c)
{
    LaurentPoly out;
    if (c == 0) {
        return out;
    }
    for (const auto& [m, v] : a) {
        out.emplace(m, v * c);
    }
    return out;
}

LaurentPoly mul(const LaurentPoly& a, const LaurentPoly& b, int x_floor)
{
    LaurentPoly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            const int x = ma.first + mb.first;
            if (x < x_floor) {
                continue;
            }
            add_to(out, {x, ma.second + mb.second}, ca * cb);
        }
    }
    return out;
}

LaurentPoly monomial(int a, int b, const Rational& c)
{
    LaurentPoly p;
    add_to(p, {a, b}, c);
    return p;
}

int max_x_degree(const LaurentPoly& p)
{
    if (p.empty()) {
        throw Error("degree of the zero polynomial");
    }
    return p.rbegin()->first.first;
}

LaurentPoly reciprocal(const LaurentPoly& p, int x_floor)
{
    if (p.empty()) {
        throw Error("reciprocal of zero");
    }
    const int top = max_x_degree(p);
    LaurentPoly lead;
    LaurentPoly rest;
    for (const auto& [m, c] : p) {
        (m.first == top ? lead : rest).emplace(m, c);
    }
    if (lead.size() != 1) {
        throw Error("reciprocal is not expandable in decreasing powers of x: leading part has several terms");
    }
    const auto [lm, lc] = *lead.begin();
    const LaurentPoly inv_lead = monomial(-lm.first, -lm.second, 1 / lc);
    if (rest.empty()) {
        return inv_lead;
    }
    if (x_floor == no_floor) {
        throw Error("reciprocal of a non-monomial needs a finite x-precision floor");
    }
    // 1/(L (1 + R/L)) = (1/L) sum_k (-R/L)^k, each factor lowering the x-degree
    const LaurentPoly q = scale(mul(rest, inv_lead), -1);
    LaurentPoly out;
    LaurentPoly term = inv_lead;
    while (!term.empty()) {
        out = add(out, term);
        term = mul(term, q, x_floor);
    }
    return out;
}

LaurentPoly power(const LaurentPoly& p, int k, int x_floor)
{
    LaurentPoly base = k < 0 ? reciprocal(p, x_floor) : p;
    LaurentPoly out = monomial(0, 0);
    for (int e = std::abs(k); e > 0; e >>= 1) {
        if (e & 1) {
            out = mul(out, base, x_floor);
        }
        if (e > 1) {
            base = mul(base, base, x_floor);
        }
    }
    return out;
}

TruncatedLaurent::TruncatedLaurent(int order, int x_floor)
    : order_(order), x_floor_(x_floor), coeffs_(static_cast<std::size_t>(std::max(order, -1) + 1))
{
    if (order < 0) {
        throw Error("truncation order must be nonnegative");
    }
}

TruncatedLaurent TruncatedLaurent::constant(const LaurentPoly& p, int order, int x_floor)
{
    TruncatedLaurent out(order, x_floor);
    for (const auto& [m, c] : p) {
        out.add_term(0, m.first, m.second, c);
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::from_series(const Series& s, int x_floor)
{
    if (s.variables().size() != 3) {
        throw Error("expected a series in x, y and t");
    }
    if (s.domain().kind == CoefficientDomain::Kind::modular) {
        throw Error("orbit computations use exact coefficients");
    }
    TruncatedLaurent out(s.order(), x_floor);
    for (const auto& [e, c] : s.terms()) {
        out.add_term(e[2], e[0], e[1], c);
    }
    return out;
}

void TruncatedLaurent::add_term(int n, int a, int b, const Rational& c)
{
    if (n < 0 || n > order_ || a < x_floor_) {
        return;
    }
    add_to(coeffs_[static_cast<std::size_t>(n)], {a, b}, c);
}

Rational TruncatedLaurent::coefficient(int n, int a, int b) const
{
    if (n < 0 || n > order_) {
        return 0;
    }
    const auto& p = coeffs_[static_cast<std::size_t>(n)];
    auto it = p.find({a, b});
    return it == p.end() ? Rational(0) : it->second;
}

TruncatedLaurent TruncatedLaurent::operator+(const TruncatedLaurent& o) const
{
    TruncatedLaurent out(std::min(order_, o.order_), std::max(x_floor_, o.x_floor_));
    for (int n = 0; n <= out.order_; ++n) {
        for (const auto* src : {this, &o}) {
            for (const auto& [m, c] : src->at(n)) {
                out.add_term(n, m.first, m.second, c);
            }
        }
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::scaled(const Rational& c) const
{
    TruncatedLaurent out(order_, x_floor_);
    for (int n = 0; n <= order_; ++n) {
        out.coeffs_[static_cast<std::size_t>(n)] = scale(at(n), c);
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::operator-(const TruncatedLaurent& o) const
{
    return *this + o.scaled(-1);
}

TruncatedLaurent TruncatedLaurent::operator*(const TruncatedLaurent& o) const
{
    TruncatedLaurent out(std::min(order_, o.order_), std::max(x_floor_, o.x_floor_));
    for (int n1 = 0; n1 <= out.order_; ++n1) {
        if (at(n1).empty()) {
            continue;
        }
        for (int n2 = 0; n1 + n2 <= out.order_; ++n2) {
            if (o.at(n2).empty()) {
                continue;
            }
            auto prod = mul(at(n1), o.at(n2), out.x_floor_);
            auto& dst = out.coeffs_[static_cast<std::size_t>(n1 + n2)];
            if (dst.empty()) {
                dst = std::move(prod);
            } else {
                for (const auto& [m, c] : prod) {
                    add_to(dst, m, c);
                }
            }
        }
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::times_t(int k) const
{
    TruncatedLaurent out(order_, x_floor_);
    for (int n = 0; n + k <= order_; ++n) {
        if (n + k >= 0) {
            out.coeffs_[static_cast<std::size_t>(n + k)] = at(n);
        }
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::shifted(int dx, int dy) const
{
    TruncatedLaurent out(order_, x_floor_ == no_floor ? no_floor : x_floor_ + std::min(dx, 0));
    for (int n = 0; n <= order_; ++n) {
        for (const auto& [m, c] : at(n)) {
            out.add_term(n, m.first + dx, m.second + dy, c);
        }
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::inverse() const
{
    const LaurentPoly inv0 = reciprocal(at(0), x_floor_);
    TruncatedLaurent out(order_, x_floor_);
    out.coeffs_[0] = inv0;
    for (int n = 1; n <= order_; ++n) {
        LaurentPoly acc;
        for (int k = 1; k <= n; ++k) {
            if (!at(k).empty() && !out.at(n - k).empty()) {
                acc = add(acc, mul(at(k), out.at(n - k), x_floor_));
            }
        }
        out.coeffs_[static_cast<std::size_t>(n)] = scale(mul(inv0, acc, x_floor_), -1);
    }
    return out;
}

TruncatedLaurent TruncatedLaurent::restricted(int min_x) const
{
    TruncatedLaurent out(order_, std::max(x_floor_, min_x));
    for (int n = 0; n <= order_; ++n) {
        for (const auto& [m, c] : at(n)) {
            out.add_term(n, m.first, m.second, c);
        }
    }
    return out;
}

bool TruncatedLaurent::is_zero() const
{
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const auto& p) { return p.empty(); });
}

std::size_t TruncatedLaurent::term_count() const
{
    std::size_t n = 0;
    for (const auto& p : coeffs_) {
        n += p.size();
    }
    return n;
}

std::optional<std::tuple<int, int, int>> TruncatedLaurent::first_difference(const TruncatedLaurent& o) const
{
    const int N = std::min(order_, o.order_);
    for (int n = 0; n <= N; ++n) {
        LaurentPoly diff = add(at(n), scale(o.at(n), -1));
        if (!diff.empty()) {
            const auto& m = diff.begin()->first;
            return std::make_tuple(n, m.first, m.second);
        }
    }
    return std::nullopt;
}

Series TruncatedLaurent::to_series() const
{
    Series s(CoefficientDomain::rational(), {"x", "y", "t"}, order_);
    for (int n = 0; n <= order_; ++n) {
        for (const auto& [m, c] : at(n)) {
            s.add_term({m.first, m.second, n}, c);
        }
    }
    return s;
}

} // namespace walkforge::orbit
