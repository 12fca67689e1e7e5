#include <walkforge/orbit.hpp>

#include <algorithm>
#include <chrono>

#include <walkforge/enumerate.hpp>

namespace walkforge::orbit
{

namespace
{

Monomial shift(const Monomial& m, int dx, int dy)
{
    return {m.first + dx, m.second + dy};
}

/// p * f coefficientwise in t.
TruncatedLaurent times(const LaurentPoly& p, const TruncatedLaurent& f)
{
    TruncatedLaurent out(f.order(), f.x_floor());
    for (int n = 0; n <= f.order(); ++n) {
        for (const auto& [m, c] : mul(p, f.at(n), f.x_floor())) {
            out.add_term(n, m.first, m.second, c);
        }
    }
    return out;
}

/// a * b, dropping products with x < min_x or y < min_y.
LaurentPoly bounded_mul(const LaurentPoly& a, const LaurentPoly& b, int min_x, int min_y)
{
    LaurentPoly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            const int x = ma.first + mb.first;
            const int y = ma.second + mb.second;
            if (x >= min_x && y >= min_y) {
                add_to(out, {x, y}, ca * cb);
            }
        }
    }
    return out;
}

LaurentPoly drop_below(const LaurentPoly& p, int min_x, int min_y)
{
    LaurentPoly out;
    for (const auto& [m, c] : p) {
        if (m.first >= min_x && m.second >= min_y) {
            out.emplace(m, c);
        }
    }
    return out;
}

int max_y_degree(const LaurentPoly& p)
{
    int best = INT_MIN;
    for (const auto& [m, c] : p) {
        best = std::max(best, m.second);
    }
    return best;
}

Check compare(std::string name, const TruncatedLaurent& lhs, const TruncatedLaurent& rhs, int min_x)
{
    Check c;
    c.name = std::move(name);
    c.first_difference = lhs.restricted(min_x).first_difference(rhs.restricted(min_x));
    c.holds = !c.first_difference;
    if (min_x != no_floor) {
        c.detail = "compared for x >= " + std::to_string(min_x);
    }
    return c;
}

Check vanishes(std::string name, const TruncatedLaurent& f)
{
    Check c;
    c.name = std::move(name);
    c.first_difference = f.first_difference(TruncatedLaurent(f.order(), f.x_floor()));
    c.holds = !c.first_difference;
    return c;
}

std::vector<TruncatedLaurent> enumerate_classes(const Model& model, int N, int x_floor)
{
    auto full = count_walks_full(model, N, CoefficientDomain::rational());
    std::vector<TruncatedLaurent> out;
    for (const auto& s : full.per_class) {
        out.push_back(TruncatedLaurent::from_series(s, x_floor));
    }
    return out;
}

Group with_flipped_sign(Group g)
{
    if (g.size() > 1) {
        g.back().sign = -g.back().sign;
    }
    return g;
}

void record_comparison(ComparisonReport& report, const TruncatedLaurent& expected, const TruncatedLaurent& computed)
{
    report.first_mismatch = computed.first_difference(expected);
    report.match = !report.first_mismatch;
    if (report.first_mismatch) {
        const auto [n, a, b] = *report.first_mismatch;
        report.expected = expected.coefficient(n, a, b);
        report.computed = computed.coefficient(n, a, b);
    }
    for (int n = 0; n <= expected.order(); ++n) {
        report.coefficients_compared += std::max(expected.at(n).size(), computed.at(n).size());
    }
}

nlohmann::json difference_json(const std::optional<std::tuple<int, int, int>>& d)
{
    if (!d) {
        return nullptr;
    }
    const auto [n, a, b] = *d;
    return {{"t", n}, {"x", a}, {"y", b}};
}

Model quarter_plane_pair(std::string label, ResiduePolynomial poly, const std::vector<std::vector<int>>& s0,
                         const std::vector<std::vector<int>>& s1)
{
    ModelSpec spec;
    spec.dimension = 2;
    spec.nonneg_axes = 2;
    spec.moduli = {2};
    spec.residue_polys = {std::move(poly)};
    spec.start = {0, 0};
    spec.label = std::move(label);
    for (const auto& d : s0) {
        spec.step_sets[ResidueVector{{0}}].push_back({d, 1});
    }
    for (const auto& d : s1) {
        spec.step_sets[ResidueVector{{1}}].push_back({d, 1});
    }
    return Model(std::move(spec));
}

} // namespace

TruncatedLaurent orbit_sum(const TruncatedLaurent& f, const Group& group)
{
    TruncatedLaurent out(f.order(), f.x_floor());
    for (const auto& g : group) {
        const auto image = apply(g.map, f);
        out = g.sign > 0 ? out + image : out - image;
    }
    return out;
}

LaurentPoly orbit_sum(const LaurentPoly& p, const Group& group, int x_floor)
{
    LaurentPoly out;
    for (const auto& g : group) {
        out = add(out, scale(apply(g.map, p, x_floor), g.sign));
    }
    return out;
}

TruncatedLaurent positive_part(const TruncatedLaurent& f)
{
    TruncatedLaurent out(f.order(), f.x_floor());
    for (int n = 0; n <= f.order(); ++n) {
        for (const auto& [m, c] : positive_part(f.at(n))) {
            out.add_term(n, m.first, m.second, c);
        }
    }
    return out;
}

LaurentPoly positive_part(const LaurentPoly& p)
{
    return drop_below(p, 1, 1);
}

LaurentPoly apply(const BirationalMap& g, const LaurentPoly& p, int x_floor)
{
    return apply(g, TruncatedLaurent::constant(p, 0, x_floor)).at(0);
}

LaurentPoly to_laurent(const SparseLaurent& p)
{
    LaurentPoly out;
    for (const auto& [e, c] : p) {
        if (e.size() != 2) {
            throw Error("expected a Laurent polynomial in x and y");
        }
        add_to(out, {e[0], e[1]}, c);
    }
    return out;
}

Expr x_plus_inverse()
{
    return Expr::x() + reciprocal(Expr::x());
}

BirationalMap flip_x()
{
    return {reciprocal(Expr::x()), Expr::y(), "Psi"};
}

BirationalMap flip_y()
{
    return {Expr::x(), reciprocal(Expr::y()), "Phi"};
}

std::string to_string(Boundary b)
{
    switch (b) {
    case Boundary::x_axis:
        return "F(x,0)";
    case Boundary::y_axis:
        return "F(0,y)";
    case Boundary::corner:
        return "F(0,0)";
    }
    return "?";
}

std::vector<BoundaryTerm> boundary_terms(const Model& model)
{
    if (model.dimension() != 2 || model.nonneg_axes() != 2) {
        throw Error("quarter-plane equations need a 2D model with both axes constrained");
    }
    if (model.max_step_length() > 1) {
        throw Error("quarter-plane equations need unit steps");
    }
    const auto table = transition_table(model);
    std::vector<BoundaryTerm> out;
    for (std::size_t s = 0; s < table.class_count; ++s) {
        for (std::size_t r = 0; r < table.class_count; ++r) {
            LaurentPoly below_y;
            LaurentPoly below_x;
            LaurentPoly corner;
            for (const auto& [m, c] : to_laurent(table.laurent[r][s])) {
                // times xy; signs from inclusion-exclusion
                const Monomial shifted = shift(m, 1, 1);
                if (m.second < 0) {
                    add_to(below_y, shifted, -c);
                }
                if (m.first < 0) {
                    add_to(below_x, shifted, -c);
                }
                if (m.first < 0 && m.second < 0) {
                    add_to(corner, shifted, c);
                }
            }
            if (!below_y.empty()) {
                out.push_back({s, r, Boundary::x_axis, below_y});
            }
            if (!below_x.empty()) {
                out.push_back({s, r, Boundary::y_axis, below_x});
            }
            if (!corner.empty()) {
                out.push_back({s, r, Boundary::corner, corner});
            }
        }
    }
    return out;
}

TruncatedLaurent boundary_series(const BoundaryTerm& term, const TruncatedLaurent& F_source)
{
    TruncatedLaurent restricted(F_source.order(), F_source.x_floor());
    for (int n = 0; n <= F_source.order(); ++n) {
        for (const auto& [m, c] : F_source.at(n)) {
            const bool keep = term.kind == Boundary::x_axis ? m.second == 0
                              : term.kind == Boundary::y_axis ? m.first == 0
                                                              : m.first == 0 && m.second == 0;
            if (keep) {
                restricted.add_term(n, m.first, m.second, c);
            }
        }
    }
    return times(term.coefficient, restricted).times_t(1);
}

std::vector<TruncatedLaurent> equation_residuals(const Model& model, const std::vector<TruncatedLaurent>& F)
{
    const auto table = transition_table(model);
    if (F.size() != table.class_count) {
        throw Error("expected one series per residue class");
    }
    const auto terms = boundary_terms(model);
    std::vector<TruncatedLaurent> out;
    for (std::size_t s = 0; s < table.class_count; ++s) {
        // xy F_s - xy [s = start] - t sum_r S_r^s xy F_r - boundary terms
        TruncatedLaurent res = F[s].shifted(1, 1);
        if (s == model.start_class()) {
            TruncatedLaurent start(F[s].order(), F[s].x_floor());
            start.add_term(0, static_cast<int>(model.start()[0]) + 1, static_cast<int>(model.start()[1]) + 1, 1);
            res = res - start;
        }
        for (std::size_t r = 0; r < table.class_count; ++r) {
            res = res - times(to_laurent(table.laurent[r][s]), F[r].shifted(1, 1)).times_t(1);
        }
        for (const auto& term : terms) {
            if (term.equation == s) {
                res = res - boundary_series(term, F[term.source]);
            }
        }
        out.push_back(std::move(res));
    }
    return out;
}

nlohmann::json Check::to_json() const
{
    nlohmann::json j = {{"name", name}, {"holds", holds}, {"first_difference", difference_json(first_difference)}};
    if (!detail.empty()) {
        j["detail"] = detail;
    }
    return j;
}

nlohmann::json ComparisonReport::to_json() const
{
    nlohmann::json j = {{"example", example},
                        {"terms", terms},
                        {"x_floor", x_floor},
                        {"match", match},
                        {"first_mismatch", difference_json(first_mismatch)},
                        {"coefficients_compared", coefficients_compared},
                        {"seconds", seconds}};
    if (first_mismatch) {
        j["expected"] = walkforge::to_string(expected);
        j["computed"] = walkforge::to_string(computed);
    }
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back(c.to_json());
    }
    return j;
}

Group darco_group()
{
    return generate_group({flip_y(), flip_x()});
}

Group time_inhom_group_even()
{
    BirationalMap psi{Expr::x(), reciprocal(Expr::y() * x_plus_inverse()), "Psi0"};
    BirationalMap phi = flip_x();
    phi.name = "Phi0";
    return generate_group({phi, psi});
}

Group time_inhom_group_odd()
{
    BirationalMap psi{Expr::x(), x_plus_inverse() * reciprocal(Expr::y()), "Psi1"};
    BirationalMap phi = flip_x();
    phi.name = "Phi1";
    return generate_group({phi, psi});
}

Model darco_model()
{
    return quarter_plane_pair("quarter-plane parity walk", {0, {1, 1}, 0}, {{0, 1}, {1, 0}, {0, -1}, {-1, 0}},
                              {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}});
}

Model time_inhom_model()
{
    return quarter_plane_pair("alternating quarter-plane walk", {0, {0, 0}, 1}, {{1, 1}, {0, -1}, {-1, 1}},
                              {{0, 1}, {1, 0}, {1, -1}, {-1, -1}, {-1, 0}});
}

std::vector<Check> boundary_cancellation(const Model& model, const std::vector<Group>& groups, int N, int x_floor)
{
    const auto F = enumerate_classes(model, N, x_floor);
    if (groups.size() != F.size()) {
        throw Error("expected one group per equation");
    }
    std::vector<Check> out;
    for (const auto& term : boundary_terms(model)) {
        const auto sum = orbit_sum(boundary_series(term, F[term.source]), groups[term.equation]);
        out.push_back(vanishes("orbit sum of boundary term " + to_string(term.kind) + " (source " + std::to_string(term.source)
                                   + ") in equation " + std::to_string(term.equation),
                               sum));
    }
    return out;
}

ComparisonReport reproduce_darco(int N, const ReproduceOptions& options)
{
    if (N < 0 || N > 30) {
        throw Error("orbit reproduction supports 0 <= N <= 30");
    }
    const auto t0 = std::chrono::steady_clock::now();
    ComparisonReport report;
    report.example = "darco";
    report.terms = N;
    report.x_floor = 0;
    const Model model = darco_model();
    const auto table = transition_table(model);
    const LaurentPoly S01 = to_laurent(table.laurent[0][1]);
    const LaurentPoly S10 = to_laurent(table.laurent[1][0]);
    const LaurentPoly S11 = to_laurent(table.laurent[1][1]);
    const LaurentPoly V = mul(S01, S10);
    const Group group = options.flip_sign ? with_flipped_sign(darco_group()) : darco_group();
    const LaurentPoly O = orbit_sum(monomial(1, 1), group, no_floor);

    // W_k = [t^k] O / (1 - t S_1^1 - t^2 S_0^1 S_1^0)
    std::vector<LaurentPoly> W = {O};
    TruncatedLaurent formula(N);
    for (int n = 1; n <= N; ++n) {
        for (const auto& [m, c] : positive_part(mul(S01, W[static_cast<std::size_t>(n - 1)]))) {
            formula.add_term(n, m.first - 1, m.second - 1, c);
        }
        LaurentPoly next = mul(S11, W.back());
        if (W.size() >= 2) {
            next = add(next, mul(V, W[W.size() - 2]));
        }
        W.push_back(std::move(next));
    }
    const auto F = enumerate_classes(model, N, no_floor);
    record_comparison(report, F[1], formula);

    if (options.check_order >= 0) {
        const int C = options.check_order;
        const auto Fc = enumerate_classes(model, C, no_floor);
        const auto O0 = orbit_sum(Fc[0].shifted(1, 1), group);
        const auto O1 = orbit_sum(Fc[1].shifted(1, 1), group);
        const auto Oxy = TruncatedLaurent::constant(O, C);
        report.checks.push_back(compare("even-class orbit relation", O0, Oxy + times(S10, O1).times_t(1), no_floor));
        report.checks.push_back(compare("odd-class orbit relation", O1,
                                        times(S01, O0).times_t(1) + times(S11, O1).times_t(1), no_floor));
        for (auto& c : boundary_cancellation(model, {group, group}, C, no_floor)) {
            report.checks.push_back(std::move(c));
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

ComparisonReport reproduce_time_inhom(int N, const ReproduceOptions& options)
{
    if (N < 0 || N > 30) {
        throw Error("orbit reproduction supports 0 <= N <= 30");
    }
    const auto t0 = std::chrono::steady_clock::now();
    ComparisonReport report;
    report.example = "timeinhom";
    report.terms = N;
    const Model model = time_inhom_model();
    const auto table = transition_table(model);
    const LaurentPoly S0 = to_laurent(table.laurent[0][1]);
    const LaurentPoly S1 = to_laurent(table.laurent[1][0]);
    const BirationalMap sigma{Expr::x(), x_plus_inverse() * reciprocal(Expr::y()), "sigma"};
    const Group G1 = options.flip_sign ? with_flipped_sign(time_inhom_group_odd()) : time_inhom_group_odd();
    const LaurentPoly O = orbit_sum(monomial(1, 1), G1, no_floor);

    // K = S_0(x, (x + 1/x)/y) S_1, whose x-expansion is infinite downwards.
    const int M = N / 2;
    const LaurentPoly probe = mul(apply(sigma, S0, -4), S1);
    const int kx = max_x_degree(probe);
    const int ky = max_y_degree(probe);
    const int fK = -kx * M - max_x_degree(O) - 1;
    report.x_floor = fK;
    const LaurentPoly K = mul(apply(sigma, S0, fK), S1, fK);

    // [t^{2m}] = K^m O; terms that cannot reach x, y > 0 in the remaining steps are dropped
    TruncatedLaurent formula(N);
    LaurentPoly Q = drop_below(O, 1 - kx * M, 1 - ky * M);
    for (int m = 0; m <= M; ++m) {
        for (const auto& [mono, c] : positive_part(Q)) {
            formula.add_term(2 * m, mono.first - 1, mono.second - 1, c);
        }
        if (m < M) {
            Q = bounded_mul(K, Q, 1 - kx * (M - m - 1), 1 - ky * (M - m - 1));
        }
    }
    const auto F = enumerate_classes(model, N, no_floor);
    record_comparison(report, F[0], formula);

    if (options.check_order >= 0) {
        const int C = options.check_order;
        const int f = -(6 * C + 8);
        const int window = f / 2;
        const Group G0 = time_inhom_group_even();
        const auto Fc = enumerate_classes(model, C, f);
        const auto H0 = Fc[0].shifted(1, 1);
        const auto H1 = Fc[1].shifted(1, 1);
        const auto G1H0 = orbit_sum(H0, G1);
        const auto G1H1 = orbit_sum(H1, G1);
        const auto G0H0 = orbit_sum(H0, G0);
        const auto G0H1 = orbit_sum(H1, G0);
        const auto Oxy = TruncatedLaurent::constant(O, C, f);
        report.checks.push_back(compare("even-step equation orbit relation under G1", G1H0,
                                        Oxy + times(S1, G1H1).times_t(1), window));
        report.checks.push_back(
            compare("odd-step equation orbit relation under G0", G0H1, times(S0, G0H0).times_t(1), window));
        // replacing y by (x + 1/x)/y in the G0 relation, side by side with the G1 relation
        report.checks.push_back(compare("substituted G0 orbit sum of xyF1 equals G1 orbit sum of xyF1",
                                        apply(sigma, G0H1), G1H1, window));
        const LaurentPoly S0sub = apply(sigma, S0, f);
        report.checks.push_back(compare("G1 orbit relation between xyF1 and xyF0 with S0(x, (x+1/x)/y)", G1H1,
                                        times(S0sub, G1H0).times_t(1), window));
        for (auto& c : boundary_cancellation(model, {G1, G0}, C, f)) {
            report.checks.push_back(std::move(c));
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace walkforge::orbit
