#include <walkforge/lp.hpp>

#include <boost/multiprecision/cpp_int.hpp>

namespace walkforge::lp
{

void Program::add(std::vector<Rational> coeffs, Sense sense, Rational rhs)
{
    if (coeffs.size() != variables) {
        throw Error("constraint has " + std::to_string(coeffs.size()) + " coefficients, expected "
                    + std::to_string(variables));
    }
    constraints.push_back({std::move(coeffs), sense, std::move(rhs)});
}

Result solve(const Program& program)
{
    const std::size_t m = program.constraints.size();
    const std::size_t n = program.variables;
    std::size_t slacks = 0;
    for (const auto& c : program.constraints) {
        slacks += c.sense != Sense::eq;
    }
    // columns: x (n), slacks, artificials (m), rhs
    const std::size_t art = n + slacks;
    const std::size_t width = art + m + 1;
    std::vector<std::vector<Rational>> T(m + 1, std::vector<Rational>(width));
    std::vector<int> sign(m, 1);
    std::vector<std::size_t> basis(m);
    std::size_t s = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& c = program.constraints[i];
        for (std::size_t j = 0; j < n; ++j) {
            T[i][j] = c.coeffs[j];
        }
        if (c.sense == Sense::le) {
            T[i][s++] = 1;
        } else if (c.sense == Sense::ge) {
            T[i][s++] = -1;
        }
        T[i][width - 1] = c.rhs;
        if (c.rhs < 0) {
            sign[i] = -1;
            for (auto& v : T[i]) {
                v = -v;
            }
        }
        T[i][art + i] = 1;
        basis[i] = art + i;
    }
    // reduced costs of min sum(artificials)
    auto& d = T[m];
    for (std::size_t j = 0; j < width; ++j) {
        if (j >= art && j < art + m) {
            continue;
        }
        for (std::size_t i = 0; i < m; ++i) {
            d[j] -= T[i][j];
        }
    }
    while (true) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j) {
            if (d[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) {
            break;
        }
        std::size_t leave = m;
        Rational best;
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] > 0) {
                Rational ratio = T[i][width - 1] / T[i][enter];
                if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
        }
        // phase I is bounded below by 0, so a leaving row always exists
        const Rational piv = T[leave][enter];
        for (auto& v : T[leave]) {
            v /= piv;
        }
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || T[i][enter] == 0) {
                continue;
            }
            const Rational f = T[i][enter];
            for (std::size_t j = 0; j < width; ++j) {
                if (T[leave][j] != 0) {
                    T[i][j] -= f * T[leave][j];
                }
            }
        }
        basis[leave] = enter;
    }
    Result r;
    // objective value is -d[rhs]
    if (d[width - 1] == 0) {
        r.feasible = true;
        r.point.assign(n, 0);
        for (std::size_t i = 0; i < m; ++i) {
            if (basis[i] < n) {
                r.point[basis[i]] = T[i][width - 1];
            }
        }
        return r;
    }
    // y'_i = c_art - d_art = 1 - d_art
    r.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        r.farkas[i] = (1 - d[art + i]) * sign[i];
    }
    return r;
}

bool satisfies(const Program& program, const std::vector<Rational>& x)
{
    if (x.size() != program.variables) {
        return false;
    }
    for (const auto& v : x) {
        if (v < 0) {
            return false;
        }
    }
    for (const auto& c : program.constraints) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            lhs += c.coeffs[j] * x[j];
        }
        if ((c.sense == Sense::le && lhs > c.rhs) || (c.sense == Sense::ge && lhs < c.rhs)
            || (c.sense == Sense::eq && lhs != c.rhs)) {
            return false;
        }
    }
    return true;
}

bool check_farkas(const Program& program, const std::vector<Rational>& y)
{
    if (y.size() != program.constraints.size()) {
        return false;
    }
    Rational yb = 0;
    std::vector<Rational> yA(program.variables);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const auto& c = program.constraints[i];
        if ((c.sense == Sense::ge && y[i] < 0) || (c.sense == Sense::le && y[i] > 0)) {
            return false;
        }
        yb += y[i] * c.rhs;
        for (std::size_t j = 0; j < program.variables; ++j) {
            yA[j] += y[i] * c.coeffs[j];
        }
    }
    for (const auto& v : yA) {
        if (v > 0) {
            return false;
        }
    }
    return yb > 0;
}

namespace
{

bool branch(Program& p, int& nodes, std::vector<BigInt>& out)
{
    if (nodes-- <= 0) {
        return false;
    }
    auto r = solve(p);
    if (!r.feasible) {
        return false;
    }
    for (std::size_t j = 0; j < p.variables; ++j) {
        const Rational& v = r.point[j];
        if (denominator(v) == 1) {
            continue;
        }
        const BigInt fl = numerator(v) / denominator(v);
        std::vector<Rational> e(p.variables);
        e[j] = 1;
        p.add(e, Sense::le, Rational(fl));
        bool ok = branch(p, nodes, out);
        p.constraints.pop_back();
        if (ok) {
            return true;
        }
        p.add(e, Sense::ge, Rational(fl + 1));
        ok = branch(p, nodes, out);
        p.constraints.pop_back();
        return ok;
    }
    out.clear();
    for (const auto& v : r.point) {
        out.push_back(numerator(v));
    }
    return true;
}

} // namespace

std::optional<std::vector<BigInt>> integer_point(const Program& program, int node_limit)
{
    Program p = program;
    std::vector<BigInt> out;
    int nodes = node_limit;
    if (branch(p, nodes, out)) {
        return out;
    }
    return std::nullopt;
}

} // namespace walkforge::lp
