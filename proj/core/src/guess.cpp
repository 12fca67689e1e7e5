#include <walkforge/guess.hpp>

#include <algorithm>

#include <nlohmann/json.hpp>

#include <walkforge/modular_linalg.hpp>

namespace walkforge::guess
{

namespace
{

constexpr int fit_slack = 30;
constexpr int min_slack = 10;

// Rows of the ansatz matrix computable from the first T terms.
int rows_available(EquationKind kind, int order, int T)
{
    return kind == EquationKind::algebraic ? T : T - order;
}

int terms_touched(EquationKind kind, int order, int rows)
{
    return kind == EquationKind::algebraic ? rows : rows + order;
}

// Row m of column (i, j) is
//   m^j base[i][m]      for recurrences,
//   base[i][m - j]      otherwise (zero when m < j).
class Ansatz
{
public:
    Ansatz(EquationKind kind, const std::vector<std::uint32_t>& terms, std::uint32_t p, int max_order)
        : kind_(kind), f_(p), T_(static_cast<int>(terms.size()))
    {
        base_.resize(static_cast<std::size_t>(max_order) + 1);
        for (int i = 0; i <= max_order; ++i) {
            auto& b = base_[static_cast<std::size_t>(i)];
            switch (kind) {
            case EquationKind::recurrence:
                for (int m = 0; m + i < T_; ++m) {
                    b.push_back(terms[static_cast<std::size_t>(m + i)] % p);
                }
                break;
            case EquationKind::differential:
                for (int k = 0; k + i < T_; ++k) {
                    std::uint32_t c = terms[static_cast<std::size_t>(k + i)] % p;
                    for (int l = 1; l <= i; ++l) {
                        c = f_.mul(c, f_.from_int(k + l));
                    }
                    b.push_back(c);
                }
                break;
            case EquationKind::algebraic:
                if (i == 0) {
                    b.assign(static_cast<std::size_t>(T_), 0);
                    if (T_ > 0) {
                        b[0] = 1 % p;
                    }
                } else {
                    const auto& prev = base_[static_cast<std::size_t>(i) - 1];
                    b.assign(static_cast<std::size_t>(T_), 0);
                    for (int m = 0; m < T_; ++m) {
                        std::uint64_t acc = 0;
                        for (int k = 0; k <= m; ++k) {
                            acc += static_cast<std::uint64_t>(prev[static_cast<std::size_t>(k)]) * (terms[static_cast<std::size_t>(m - k)] % p);
                            if ((k & 1023) == 1023) {
                                acc %= p;
                            }
                        }
                        b[static_cast<std::size_t>(m)] = static_cast<std::uint32_t>(acc % p);
                    }
                }
                break;
            }
        }
    }

    std::uint32_t entry(int i, int j, int m) const
    {
        const auto& b = base_[static_cast<std::size_t>(i)];
        if (kind_ == EquationKind::recurrence) {
            return f_.mul(f_.pow(f_.from_int(m), static_cast<std::uint64_t>(j)), b[static_cast<std::size_t>(m)]);
        }
        return m >= j ? b[static_cast<std::size_t>(m - j)] : 0;
    }

    std::uint32_t row_value(const std::vector<std::vector<std::uint32_t>>& c, int m) const
    {
        std::uint32_t s = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            for (std::size_t j = 0; j < c[i].size(); ++j) {
                if (c[i][j] != 0) {
                    s = f_.add(s, f_.mul(c[i][j], entry(static_cast<int>(i), static_cast<int>(j), m)));
                }
            }
        }
        return s;
    }

    int terms() const { return T_; }
    const PrimeField& field() const { return f_; }

private:
    EquationKind kind_;
    PrimeField f_;
    int T_;
    std::vector<std::vector<std::uint32_t>> base_;
};

bool leading_nonzero(const GuessedEquation& eq)
{
    for (auto c : eq.coefficients.back()) {
        if (c != 0) {
            return true;
        }
    }
    return false;
}

void check_all_rows(const Ansatz& a, GuessedEquation& eq)
{
    const int rows = rows_available(eq.kind, eq.order, a.terms());
    eq.terms_verified = std::max(0, a.terms() - eq.terms_used);
    for (int m = 0; m < rows; ++m) {
        if (a.row_value(eq.coefficients, m) != 0) {
            eq.status = Status::refuted;
            return;
        }
    }
    eq.status = eq.terms_verified > 0 ? Status::verified : Status::unverified;
}

// Minimal-degree kernel vector of the (order, degree) ansatz on `rows` rows.
std::optional<GuessedEquation> solve_ansatz(const Ansatz& a, EquationKind kind, int order, int degree, int rows)
{
    const auto cols = static_cast<std::size_t>((order + 1) * (degree + 1));
    ModMatrix m(static_cast<std::size_t>(rows), cols);
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j <= degree; ++j) {
            for (int i = 0; i <= order; ++i) {
                m.at(static_cast<std::size_t>(r), static_cast<std::size_t>(j * (order + 1) + i)) = a.entry(i, j, r);
            }
        }
    }
    auto v = first_kernel_vector(m, a.field().prime());
    if (!v) {
        return std::nullopt;
    }
    GuessedEquation eq;
    eq.kind = kind;
    eq.prime = a.field().prime();
    eq.order = order;
    eq.coefficients.assign(static_cast<std::size_t>(order) + 1, std::vector<std::uint32_t>(static_cast<std::size_t>(degree) + 1, 0));
    int top = 0;
    for (std::size_t c = 0; c < cols; ++c) {
        if ((*v)[c] != 0) {
            const auto j = static_cast<int>(c) / (order + 1);
            eq.coefficients[c % static_cast<std::size_t>(order + 1)][static_cast<std::size_t>(j)] = (*v)[c];
            top = std::max(top, j);
        }
    }
    for (auto& row : eq.coefficients) {
        row.resize(static_cast<std::size_t>(top) + 1);
    }
    eq.degree = top;
    eq.terms_used = terms_touched(kind, order, rows);
    return eq;
}

// Fit at one order; retries with every available row when the short system
// produced a spurious solution.
std::optional<GuessedEquation> attempt(const Ansatz& a, EquationKind kind, int order, int degree, int limit)
{
    const int available = rows_available(kind, order, limit);
    const int unknowns = (order + 1) * (degree + 1);
    int rows = std::min(available, unknowns + fit_slack);
    while (true) {
        auto eq = solve_ansatz(a, kind, order, degree, rows);
        if (!eq) {
            return std::nullopt;
        }
        check_all_rows(a, *eq);
        if (eq->status == Status::verified || rows == available) {
            return eq;
        }
        rows = available;
    }
}

} // namespace

std::string to_string(EquationKind kind)
{
    switch (kind) {
    case EquationKind::recurrence:
        return "recurrence";
    case EquationKind::differential:
        return "differential";
    case EquationKind::algebraic:
        return "algebraic";
    }
    return "?";
}

std::string to_string(Status status)
{
    switch (status) {
    case Status::verified:
        return "verified";
    case Status::unverified:
        return "unverified";
    case Status::refuted:
        return "refuted";
    }
    return "?";
}

EquationKind parse_kind(const std::string& text)
{
    if (text == "rec" || text == "recurrence") {
        return EquationKind::recurrence;
    }
    if (text == "ode" || text == "differential") {
        return EquationKind::differential;
    }
    if (text == "alg" || text == "algebraic") {
        return EquationKind::algebraic;
    }
    throw Error("unknown equation kind '" + text + "' (expected rec, ode or alg)");
}

int held_out_margin(int terms)
{
    return std::max(20, (terms * 5 + 99) / 100);
}

std::optional<GuessedEquation> fit(EquationKind kind, const std::vector<std::uint32_t>& terms, std::uint32_t p,
                                   int max_order, int max_degree)
{
    if (max_order < 1 || max_degree < 0) {
        throw Error("guess bounds need order >= 1 and degree >= 0");
    }
    if (!is_prime(p)) {
        throw Error(std::to_string(p) + " is not prime");
    }
    const int T = static_cast<int>(terms.size());
    const int limit = T - held_out_margin(T);
    const int unknowns = (max_order + 1) * (max_degree + 1);
    if (rows_available(kind, max_order, limit) < unknowns + min_slack) {
        throw InsufficientTerms("ansatz with " + std::to_string(unknowns) + " unknowns needs more than " + std::to_string(T)
                                + " terms (held-out margin " + std::to_string(held_out_margin(T)) + ")");
    }
    Ansatz a(kind, terms, p, max_order);
    auto widest = attempt(a, kind, max_order, max_degree, limit);
    if (!widest) {
        return std::nullopt;
    }
    std::optional<GuessedEquation> best;
    auto size = [](const GuessedEquation& e) { return (e.order + 1) * (e.degree + 1); };
    for (int r = 1; r <= max_order; ++r) {
        int dmax = max_degree;
        if (best) {
            if (r + 1 >= size(*best)) {
                break;
            }
            dmax = std::min(dmax, (size(*best) - 1) / (r + 1) - 1);
        }
        if (dmax < 0) {
            continue;
        }
        auto eq = attempt(a, kind, r, dmax, limit);
        // a kernel vector with vanishing leading part is a smaller-order
        // equation already seen
        if (eq && eq->status == Status::verified && leading_nonzero(*eq) && (!best || size(*eq) < size(*best))) {
            best = std::move(eq);
        }
    }
    return best;
}

std::optional<GuessedEquation> fit_recurrence(const std::vector<std::uint32_t>& terms, std::uint32_t p, int max_order,
                                              int max_degree)
{
    return fit(EquationKind::recurrence, terms, p, max_order, max_degree);
}

std::optional<GuessedEquation> fit_differential(const std::vector<std::uint32_t>& terms, std::uint32_t p,
                                                int max_order, int max_degree)
{
    return fit(EquationKind::differential, terms, p, max_order, max_degree);
}

std::optional<GuessedEquation> fit_algebraic(const std::vector<std::uint32_t>& terms, std::uint32_t p, int max_deg_F,
                                             int max_deg_t)
{
    return fit(EquationKind::algebraic, terms, p, max_deg_F, max_deg_t);
}

namespace
{

std::uint32_t series_prime(const Series& s)
{
    if (s.domain().kind != CoefficientDomain::Kind::modular || !s.is_univariate()) {
        throw Error("guessing needs a univariate series over F_p");
    }
    return s.domain().prime;
}

} // namespace

std::optional<GuessedEquation> fit_recurrence(const Series& s, int max_order, int max_degree)
{
    return fit_recurrence(s.modular_coefficients(), series_prime(s), max_order, max_degree);
}

std::optional<GuessedEquation> fit_differential(const Series& s, int max_order, int max_degree)
{
    return fit_differential(s.modular_coefficients(), series_prime(s), max_order, max_degree);
}

std::optional<GuessedEquation> fit_algebraic(const Series& s, int max_deg_F, int max_deg_t)
{
    return fit_algebraic(s.modular_coefficients(), series_prime(s), max_deg_F, max_deg_t);
}

std::vector<std::uint32_t> residuals(const GuessedEquation& eq, const std::vector<std::uint32_t>& terms)
{
    Ansatz a(eq.kind, terms, eq.prime, eq.order);
    std::vector<std::uint32_t> out;
    const int rows = rows_available(eq.kind, eq.order, a.terms());
    for (int m = 0; m < rows; ++m) {
        out.push_back(a.row_value(eq.coefficients, m));
    }
    return out;
}

Status verify(GuessedEquation& eq, const std::vector<std::uint32_t>& terms)
{
    Ansatz a(eq.kind, terms, eq.prime, eq.order);
    check_all_rows(a, eq);
    return eq.status;
}

Status verify(GuessedEquation& eq, const Series& s)
{
    if (series_prime(s) != eq.prime) {
        throw Error("series and equation use different primes");
    }
    return verify(eq, s.modular_coefficients());
}

GuessedEquation ode_to_recurrence(const GuessedEquation& ode)
{
    if (ode.kind != EquationKind::differential) {
        throw Error("ode_to_recurrence needs a differential equation");
    }
    PrimeField f(ode.prime);
    const int R = ode.order;
    const int D = ode.degree;
    // sum c_ij (n+D-j+1)...(n+D-j+i) a_{n+i-j+D} = 0
    std::vector<std::vector<std::uint32_t>> rec(static_cast<std::size_t>(R + D) + 1, std::vector<std::uint32_t>(static_cast<std::size_t>(R) + 1, 0));
    for (int i = 0; i <= R; ++i) {
        for (int j = 0; j <= D; ++j) {
            const std::uint32_t c = ode.coefficients[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (c == 0) {
                continue;
            }
            std::vector<std::uint32_t> poly = {c};
            for (int l = 1; l <= i; ++l) {
                const std::uint32_t shift = f.from_int(D - j + l);
                std::vector<std::uint32_t> next(poly.size() + 1, 0);
                for (std::size_t k = 0; k < poly.size(); ++k) {
                    next[k] = f.add(next[k], f.mul(poly[k], shift));
                    next[k + 1] = f.add(next[k + 1], poly[k]);
                }
                poly = std::move(next);
            }
            auto& target = rec[static_cast<std::size_t>(i - j + D)];
            for (std::size_t k = 0; k < poly.size(); ++k) {
                target[k] = f.add(target[k], poly[k]);
            }
        }
    }
    auto zero = [](const std::vector<std::uint32_t>& v) { return std::all_of(v.begin(), v.end(), [](auto c) { return c == 0; }); };
    while (rec.size() > 1 && zero(rec.back())) {
        rec.pop_back();
    }
    std::size_t deg = 0;
    for (const auto& row : rec) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] != 0) {
                deg = std::max(deg, k);
            }
        }
    }
    for (auto& row : rec) {
        row.resize(deg + 1);
    }
    GuessedEquation out;
    out.kind = EquationKind::recurrence;
    out.order = static_cast<int>(rec.size()) - 1;
    out.degree = static_cast<int>(deg);
    out.prime = ode.prime;
    out.coefficients = std::move(rec);
    out.terms_used = ode.terms_used;
    return out;
}

bool confirm_with_prime(const GuessedEquation& eq, const std::vector<std::uint32_t>& terms_mod_q, std::uint32_t q)
{
    auto other = fit(eq.kind, terms_mod_q, q, eq.order, eq.degree);
    return other && other->status == Status::verified;
}

nlohmann::json GuessedEquation::to_json() const
{
    return {{"kind", guess::to_string(kind)},
            {"order", order},
            {"degree", degree},
            {"prime", prime},
            {"coefficients", coefficients},
            {"terms_used", terms_used},
            {"terms_verified", terms_verified},
            {"status", guess::to_string(status)}};
}

GuessedEquation GuessedEquation::from_json(const nlohmann::json& j)
{
    GuessedEquation eq;
    eq.kind = parse_kind(j.at("kind").get<std::string>());
    eq.order = j.at("order").get<int>();
    eq.degree = j.at("degree").get<int>();
    eq.prime = j.at("prime").get<std::uint32_t>();
    eq.coefficients = j.at("coefficients").get<std::vector<std::vector<std::uint32_t>>>();
    eq.terms_used = j.value("terms_used", 0);
    eq.terms_verified = j.value("terms_verified", 0);
    const auto status = j.value("status", std::string("unverified"));
    eq.status = status == "verified" ? Status::verified : status == "refuted" ? Status::refuted : Status::unverified;
    if (eq.coefficients.size() != static_cast<std::size_t>(eq.order) + 1) {
        throw Error("equation has " + std::to_string(eq.coefficients.size()) + " coefficient rows, expected order + 1");
    }
    for (const auto& row : eq.coefficients) {
        if (row.size() != static_cast<std::size_t>(eq.degree) + 1) {
            throw Error("coefficient row length differs from degree + 1");
        }
    }
    return eq;
}

std::string GuessedEquation::to_string() const
{
    const char* var = kind == EquationKind::recurrence ? "n" : "t";
    std::string out;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        std::string poly;
        for (std::size_t j = 0; j < coefficients[i].size(); ++j) {
            const auto c = coefficients[i][j];
            if (c == 0) {
                continue;
            }
            if (!poly.empty()) {
                poly += " + ";
            }
            if (j == 0) {
                poly += std::to_string(c);
            } else {
                poly += (c == 1 ? "" : std::to_string(c) + "*") + var + (j == 1 ? "" : "^" + std::to_string(j));
            }
        }
        if (poly.empty()) {
            continue;
        }
        std::string x;
        switch (kind) {
        case EquationKind::recurrence:
            x = i == 0 ? "a(n)" : "a(n+" + std::to_string(i) + ")";
            break;
        case EquationKind::differential:
            x = i == 0 ? "F" : "D^" + std::to_string(i) + " F";
            break;
        case EquationKind::algebraic:
            x = i == 0 ? "1" : i == 1 ? "F" : "F^" + std::to_string(i);
            break;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + poly + ")*" + x;
    }
    return (out.empty() ? "0" : out) + " = 0 mod " + std::to_string(prime);
}

} // namespace walkforge::guess
