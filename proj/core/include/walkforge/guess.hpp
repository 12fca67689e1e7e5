#ifndef WALKFORGE_GUESS_HPP
#define WALKFORGE_GUESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include <walkforge/series.hpp>

namespace walkforge::guess
{

enum class EquationKind { recurrence, differential, algebraic };
enum class Status { verified, unverified, refuted };

std::string to_string(EquationKind kind);
std::string to_string(Status status);
EquationKind parse_kind(const std::string& text);

/// sum_{i <= order} sum_{j <= degree} c[i][j] X_{i,j} = 0 over F_p, where X_{i,j} is
///   n^j a_{n+i}      (recurrence),
///   t^j F^{(i)}(t)   (differential),
///   t^j F(t)^i       (algebraic).
struct GuessedEquation
{
    EquationKind kind = EquationKind::recurrence;
    int order = 0;
    int degree = 0;
    std::uint32_t prime = 0;
    std::vector<std::vector<std::uint32_t>> coefficients;
    int terms_used = 0;
    int terms_verified = 0;
    Status status = Status::unverified;

    nlohmann::json to_json() const;
    static GuessedEquation from_json(const nlohmann::json& j);
    std::string to_string() const;
};

class InsufficientTerms : public Error
{
public:
    using Error::Error;
};

/// Spare terms required beyond the fitting window: max(20, ceil(5% of N)).
int held_out_margin(int terms);

std::optional<GuessedEquation> fit_recurrence(const std::vector<std::uint32_t>& terms, std::uint32_t p, int max_order,
                                              int max_degree);
std::optional<GuessedEquation> fit_differential(const std::vector<std::uint32_t>& terms, std::uint32_t p,
                                                int max_order, int max_degree);
std::optional<GuessedEquation> fit_algebraic(const std::vector<std::uint32_t>& terms, std::uint32_t p, int max_deg_F,
                                             int max_deg_t);
std::optional<GuessedEquation> fit(EquationKind kind, const std::vector<std::uint32_t>& terms, std::uint32_t p,
                                   int max_order, int max_degree);

/// Series overloads; the series must be univariate over F_p.
std::optional<GuessedEquation> fit_recurrence(const Series& s, int max_order, int max_degree);
std::optional<GuessedEquation> fit_differential(const Series& s, int max_order, int max_degree);
std::optional<GuessedEquation> fit_algebraic(const Series& s, int max_deg_F, int max_deg_t);

/// Residuals of every equation row computable from `terms`, in row order.
std::vector<std::uint32_t> residuals(const GuessedEquation& eq, const std::vector<std::uint32_t>& terms);

/// Re-checks eq against `terms`, updating status and terms_verified.
Status verify(GuessedEquation& eq, const std::vector<std::uint32_t>& terms);
Status verify(GuessedEquation& eq, const Series& s);

/// Recurrence satisfied by the coefficients of any solution of a differential equation.
GuessedEquation ode_to_recurrence(const GuessedEquation& ode);

/// Refits with the same kind and bounds (order, degree) over a second prime.
bool confirm_with_prime(const GuessedEquation& eq, const std::vector<std::uint32_t>& terms_mod_q, std::uint32_t q);

} // namespace walkforge::guess

#endif
