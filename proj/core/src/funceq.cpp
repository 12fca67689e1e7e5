#include <walkforge/funceq.hpp>

#include <algorithm>

namespace walkforge::funceq
{

namespace
{

Rational rational_pow(const Rational& c, int e)
{
    if (e < 0) {
        if (c == 0) {
            throw Error("evaluation point sets a variable to 0 where negative powers occur");
        }
        return rational_pow(1 / c, -e);
    }
    Rational r(1);
    for (int i = 0; i < e; ++i) {
        r *= c;
    }
    return r;
}

void add_to(YPoly& acc, int e, const Rational& c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = acc.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            acc.erase(it);
        }
    }
}

void mul_add(YPoly& acc, const YPoly& a, const YPoly& b)
{
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            add_to(acc, ea + eb, ca * cb);
        }
    }
}

void trim_x(XPoly& p)
{
    while (!p.empty() && p.back().empty()) {
        p.pop_back();
    }
}

XPoly& slot(XTPoly& p, int t)
{
    if (p.size() <= static_cast<std::size_t>(t)) {
        p.resize(static_cast<std::size_t>(t) + 1);
    }
    return p[static_cast<std::size_t>(t)];
}

YPoly& slot(XPoly& p, int x)
{
    if (p.size() <= static_cast<std::size_t>(x)) {
        p.resize(static_cast<std::size_t>(x) + 1);
    }
    return p[static_cast<std::size_t>(x)];
}

// acc += b * Delta^shift f
void mul_add_shifted(XPoly& acc, const XPoly& b, const XPoly& f, int shift)
{
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i].empty()) {
            continue;
        }
        for (std::size_t j = static_cast<std::size_t>(shift); j < f.size(); ++j) {
            if (!f[j].empty()) {
                mul_add(slot(acc, static_cast<int>(i + j) - shift), b[i], f[j]);
            }
        }
    }
}

} // namespace

void add_term(XTPoly& p, int t_degree, int x_degree, int y_degree, const Rational& c)
{
    add_to(slot(slot(p, t_degree), x_degree), y_degree, c);
}

void trim(XTPoly& p)
{
    for (auto& x : p) {
        trim_x(x);
    }
    while (!p.empty() && p.back().empty()) {
        p.pop_back();
    }
}

bool is_zero(const XTPoly& p)
{
    for (const auto& x : p) {
        for (const auto& y : x) {
            if (!y.empty()) {
                return false;
            }
        }
    }
    return true;
}

XTPoly add(const XTPoly& a, const XTPoly& b)
{
    XTPoly out = a;
    for (std::size_t t = 0; t < b.size(); ++t) {
        for (std::size_t x = 0; x < b[t].size(); ++x) {
            for (const auto& [e, c] : b[t][x]) {
                add_term(out, static_cast<int>(t), static_cast<int>(x), e, c);
            }
        }
    }
    trim(out);
    return out;
}

XTPoly scale(const XTPoly& a, const Rational& c)
{
    XTPoly out;
    for (std::size_t t = 0; t < a.size(); ++t) {
        for (std::size_t x = 0; x < a[t].size(); ++x) {
            for (const auto& [e, v] : a[t][x]) {
                add_term(out, static_cast<int>(t), static_cast<int>(x), e, v * c);
            }
        }
    }
    trim(out);
    return out;
}

namespace
{

XTPoly mul_truncated(const XTPoly& a, const XTPoly& b, int max_t)
{
    XTPoly out;
    for (std::size_t ta = 0; ta < a.size(); ++ta) {
        for (std::size_t tb = 0; tb < b.size(); ++tb) {
            const int t = static_cast<int>(ta + tb);
            if (max_t >= 0 && t > max_t) {
                break;
            }
            if (a[ta].empty() || b[tb].empty()) {
                continue;
            }
            mul_add_shifted(slot(out, t), a[ta], b[tb], 0);
        }
    }
    trim(out);
    return out;
}

XTPoly shift(const XTPoly& a, int dt, int dx)
{
    XTPoly out;
    for (std::size_t t = 0; t < a.size(); ++t) {
        for (std::size_t x = 0; x < a[t].size(); ++x) {
            for (const auto& [e, c] : a[t][x]) {
                add_term(out, static_cast<int>(t) + dt, static_cast<int>(x) + dx, e, c);
            }
        }
    }
    return out;
}

} // namespace

XTPoly mul(const XTPoly& a, const XTPoly& b)
{
    return mul_truncated(a, b, -1);
}

FunctionalSystem build_system(const Model& model, const EvaluationPoint& eval)
{
    if (model.nonneg_axes() != 1) {
        throw Error("functional equations are built for half-space models (exactly one constrained axis)");
    }
    const int d = model.dimension();
    if (eval.values.size() != static_cast<std::size_t>(d)) {
        throw Error("evaluation point has the wrong number of entries");
    }
    int ys = -1;
    for (int a = 1; a < d; ++a) {
        if (!eval.values[static_cast<std::size_t>(a)]) {
            if (ys >= 0) {
                throw Error("at most one y variable may stay symbolic");
            }
            ys = a;
        }
    }
    FunctionalSystem sys;
    sys.size = model.class_count();
    sys.symbolic_y = ys >= 0;
    auto table = transition_table(model);
    for (const auto& set : model.step_sets()) {
        for (const auto& s : set) {
            sys.depth = std::max(sys.depth, -s.displacement[0]);
        }
    }
    sys.B.assign(static_cast<std::size_t>(sys.depth) + 1,
                 std::vector<std::vector<XTPoly>>(sys.size, std::vector<XTPoly>(sys.size)));
    auto factor = [&](const std::vector<std::int64_t>& v) {
        Rational c = 1;
        for (int a = 1; a < d; ++a) {
            if (a != ys) {
                c *= rational_pow(*eval.values[static_cast<std::size_t>(a)], static_cast<int>(v[static_cast<std::size_t>(a)]));
            }
        }
        return c;
    };
    for (std::size_t r = 0; r < sys.size; ++r) {
        for (std::size_t s = 0; s < sys.size; ++s) {
            for (const auto& [disp, w] : table.laurent[r][s]) {
                std::vector<std::int64_t> v(disp.begin(), disp.end());
                const Rational c = w * factor(v);
                const int u = disp[0];
                const int ye = ys >= 0 ? disp[static_cast<std::size_t>(ys)] : 0;
                if (u >= 0) {
                    add_term(sys.B[0][s][r], 0, u, ye, c);
                } else {
                    add_term(sys.B[static_cast<std::size_t>(-u)][s][r], 0, 0, ye, c);
                }
            }
        }
    }
    sys.a.assign(sys.size, {});
    const auto& st = model.start();
    add_term(sys.a[model.start_class()], 0, static_cast<int>(st[0]), ys >= 0 ? static_cast<int>(st[static_cast<std::size_t>(ys)]) : 0,
             factor(st));
    return sys;
}

std::vector<XTPoly> solve(const FunctionalSystem& sys, int N)
{
    if (N < 0) {
        throw Error("number of terms must be nonnegative");
    }
    std::vector<XTPoly> f(sys.size, XTPoly(static_cast<std::size_t>(N) + 1));
    for (std::size_t s = 0; s < sys.size; ++s) {
        if (!sys.a[s].empty()) {
            f[s][0] = sys.a[s][0];
        }
    }
    for (int n = 0; n < N; ++n) {
        for (std::size_t s = 0; s < sys.size; ++s) {
            XPoly next;
            if (sys.a[s].size() > static_cast<std::size_t>(n) + 1) {
                next = sys.a[s][static_cast<std::size_t>(n) + 1];
            }
            for (std::size_t i = 0; i < sys.B.size(); ++i) {
                for (std::size_t r = 0; r < sys.size; ++r) {
                    const auto& b = sys.B[i][s][r];
                    for (std::size_t j = 0; j < b.size() && j <= static_cast<std::size_t>(n); ++j) {
                        mul_add_shifted(next, b[j], f[r][static_cast<std::size_t>(n) - j], static_cast<int>(i));
                    }
                }
            }
            trim_x(next);
            f[s][static_cast<std::size_t>(n) + 1] = std::move(next);
        }
    }
    return f;
}

Series to_series(const XTPoly& p, bool symbolic_y, int order)
{
    std::vector<std::string> vars = symbolic_y ? std::vector<std::string>{"x", "y", "t"} : std::vector<std::string>{"x", "t"};
    Series out(CoefficientDomain::rational(), vars, order);
    for (std::size_t t = 0; t < p.size() && t <= static_cast<std::size_t>(order); ++t) {
        for (std::size_t x = 0; x < p[t].size(); ++x) {
            for (const auto& [e, c] : p[t][x]) {
                if (symbolic_y) {
                    out.add_term({static_cast<int>(x), e, static_cast<int>(t)}, c);
                } else {
                    out.add_term({static_cast<int>(x), static_cast<int>(t)}, c);
                }
            }
        }
    }
    return out;
}

std::vector<Series> solve_series(const FunctionalSystem& sys, int N)
{
    std::vector<Series> out;
    for (const auto& f : solve(sys, N)) {
        out.push_back(to_series(f, sys.symbolic_y, N));
    }
    return out;
}

XPoly delta(const XPoly& f, int times)
{
    if (static_cast<std::size_t>(times) >= f.size()) {
        return {};
    }
    return XPoly(f.begin() + times, f.end());
}

Series delta(const Series& s)
{
    if (s.variables().empty() || s.variables().front() != "x") {
        throw Error("delta needs a series whose first variable is x");
    }
    Series out(s.domain(), s.variables(), s.order());
    for (const auto& [e, c] : s.terms()) {
        if (e[0] < 0) {
            throw Error("delta needs nonnegative powers of x");
        }
        if (e[0] > 0) {
            auto shifted = e;
            --shifted[0];
            out.add_term(shifted, c);
        }
    }
    return out;
}

KernelMatrix kernel_matrix(const FunctionalSystem& sys)
{
    KernelMatrix km;
    const int k = sys.depth;
    km.depth = k;
    km.K.assign(sys.size, std::vector<XTPoly>(sys.size));
    for (std::size_t s = 0; s < sys.size; ++s) {
        for (std::size_t r = 0; r < sys.size; ++r) {
            XTPoly entry;
            if (s == r) {
                add_term(entry, 0, k, 0, 1);
            }
            for (int i = 0; i <= k; ++i) {
                entry = add(entry, scale(shift(sys.B[static_cast<std::size_t>(i)][s][r], 1, k - i), -1));
            }
            km.K[s][r] = std::move(entry);
        }
    }
    km.Q.assign(static_cast<std::size_t>(k), std::vector<std::vector<XTPoly>>(sys.size, std::vector<XTPoly>(sys.size)));
    Rational factorial = 1;
    for (int j = 0; j < k; ++j) {
        if (j > 0) {
            factorial *= j;
        }
        for (std::size_t s = 0; s < sys.size; ++s) {
            for (std::size_t r = 0; r < sys.size; ++r) {
                XTPoly entry;
                for (int i = j + 1; i <= k; ++i) {
                    entry = add(entry, scale(shift(sys.B[static_cast<std::size_t>(i)][s][r], 0, k + j - i), 1 / factorial));
                }
                km.Q[static_cast<std::size_t>(j)][s][r] = std::move(entry);
            }
        }
    }
    return km;
}

std::vector<XTPoly> kernel_residual(const FunctionalSystem& sys, const KernelMatrix& km, const std::vector<XTPoly>& f, int N)
{
    const int k = km.depth;
    // g_j = j! [x^j] f = f^{(j)}(0, t)
    std::vector<std::vector<XTPoly>> g(static_cast<std::size_t>(k), std::vector<XTPoly>(sys.size));
    Rational factorial = 1;
    for (int j = 0; j < k; ++j) {
        if (j > 0) {
            factorial *= j;
        }
        for (std::size_t r = 0; r < sys.size; ++r) {
            for (std::size_t t = 0; t < f[r].size(); ++t) {
                if (f[r][t].size() > static_cast<std::size_t>(j)) {
                    for (const auto& [e, c] : f[r][t][static_cast<std::size_t>(j)]) {
                        add_term(g[static_cast<std::size_t>(j)][r], static_cast<int>(t), 0, e, c * factorial);
                    }
                }
            }
        }
    }
    std::vector<XTPoly> out;
    for (std::size_t s = 0; s < sys.size; ++s) {
        XTPoly lhs;
        for (std::size_t r = 0; r < sys.size; ++r) {
            lhs = add(lhs, mul_truncated(km.K[s][r], f[r], N));
        }
        XTPoly rhs = shift(sys.a[s], 0, k);
        for (int j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < sys.size; ++r) {
                rhs = add(rhs, scale(shift(mul_truncated(km.Q[static_cast<std::size_t>(j)][s][r], g[static_cast<std::size_t>(j)][r], N - 1), 1, 0), -1));
            }
        }
        XTPoly res = add(lhs, scale(rhs, -1));
        if (res.size() > static_cast<std::size_t>(N) + 1) {
            res.resize(static_cast<std::size_t>(N) + 1);
        }
        trim(res);
        out.push_back(std::move(res));
    }
    return out;
}

XTPoly determinant(const std::vector<std::vector<XTPoly>>& m)
{
    const std::size_t n = m.size();
    if (n == 0) {
        XTPoly one;
        add_term(one, 0, 0, 0, 1);
        return one;
    }
    if (n == 1) {
        return m[0][0];
    }
    XTPoly det;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_zero(m[0][c])) {
            continue;
        }
        std::vector<std::vector<XTPoly>> minor;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<XTPoly> row;
            for (std::size_t cc = 0; cc < n; ++cc) {
                if (cc != c) {
                    row.push_back(m[r][cc]);
                }
            }
            minor.push_back(std::move(row));
        }
        XTPoly term = mul(m[0][c], determinant(minor));
        det = add(det, c % 2 == 0 ? term : scale(term, -1));
    }
    return det;
}

std::string to_string(const XTPoly& p)
{
    std::string out;
    for (std::size_t t = 0; t < p.size(); ++t) {
        for (std::size_t x = 0; x < p[t].size(); ++x) {
            for (const auto& [e, c] : p[t][x]) {
                std::string mono;
                auto var = [&](const char* name, long long deg) {
                    if (deg == 0) {
                        return;
                    }
                    mono += std::string(mono.empty() ? "" : "*") + name + (deg == 1 ? "" : "^" + std::to_string(deg));
                };
                var("t", static_cast<long long>(t));
                var("x", static_cast<long long>(x));
                var("y", e);
                std::string coeff = walkforge::to_string(c);
                if (!out.empty()) {
                    out += c < 0 ? " - " : " + ";
                    if (c < 0) {
                        coeff = walkforge::to_string(-c);
                    }
                }
                if (mono.empty()) {
                    out += coeff;
                } else if (coeff == "1") {
                    out += mono;
                } else if (coeff == "-1") {
                    out += "-" + mono;
                } else {
                    out += coeff + "*" + mono;
                }
            }
        }
    }
    return out.empty() ? "0" : out;
}

} // namespace walkforge::funceq
