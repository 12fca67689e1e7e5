#ifndef WALKFORGE_FUNCEQ_HPP
#define WALKFORGE_FUNCEQ_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <walkforge/enumerate.hpp>
#include <walkforge/model.hpp>
#include <walkforge/series.hpp>

namespace walkforge::funceq
{

/// Laurent polynomial in one y; only exponent 0 occurs when y is evaluated.
using YPoly = std::map<int, Rational>;
/// Polynomial in x with YPoly coefficients, indexed by the power of x.
using XPoly = std::vector<YPoly>;
/// Polynomial (or truncated series) in t with XPoly coefficients.
using XTPoly = std::vector<XPoly>;

/// f = a + t * sum_i B_i Delta^i f for a half-space model.
struct FunctionalSystem
{
    std::size_t size = 0;
    int depth = 0;
    bool symbolic_y = false;
    std::vector<XTPoly> a;
    /// B[i][s][r]
    std::vector<std::vector<std::vector<XTPoly>>> B;
};

/// `eval` gives the values of y_1, ..., y_{d-1} (entry 0, for x, is ignored);
/// at most one y may stay symbolic. Requires the first axis to be the only
/// constrained one.
FunctionalSystem build_system(const Model& model, const EvaluationPoint& eval);

/// Coefficient recursion; returns f[s] truncated at t^N.
std::vector<XTPoly> solve(const FunctionalSystem& system, int N);
/// Same, as rational series in x, (y,) t.
std::vector<Series> solve_series(const FunctionalSystem& system, int N);

/// [x^j] Delta^i f = [x^{i+j}] f.
XPoly delta(const XPoly& f, int times = 1);
/// Delta on a series whose first variable is x (nonnegative exponents).
Series delta(const Series& s);

/// x^k I - t sum_i x^{k-i} B_i and Q_j = sum_{i>j} x^{k+j-i}/j! B_i.
struct KernelMatrix
{
    int depth = 0;
    std::vector<std::vector<XTPoly>> K;
    std::vector<std::vector<std::vector<XTPoly>>> Q;
};

KernelMatrix kernel_matrix(const FunctionalSystem& system);

/// K f - (x^k a - t sum_j Q_j j! [x^j] f), truncated at t^N; zero for the true solution.
std::vector<XTPoly> kernel_residual(const FunctionalSystem& system, const KernelMatrix& kernel,
                                    const std::vector<XTPoly>& f, int N);
bool is_zero(const XTPoly& p);

XTPoly determinant(const std::vector<std::vector<XTPoly>>& matrix);

XTPoly add(const XTPoly& a, const XTPoly& b);
XTPoly mul(const XTPoly& a, const XTPoly& b);
XTPoly scale(const XTPoly& a, const Rational& c);
void add_term(XTPoly& p, int t_degree, int x_degree, int y_degree, const Rational& c);
void trim(XTPoly& p);

/// Human-readable polynomial in t, x, y.
std::string to_string(const XTPoly& p);
Series to_series(const XTPoly& p, bool symbolic_y, int order);

struct Lemma2Result
{
    std::uint32_t prime = 0;
    std::uint32_t omega = 0;
    std::uint32_t determinant = 0;
    std::uint32_t formula = 0;
    /// +1 or -1 when det = +-formula, 0 when neither sign matches.
    int sign = 0;
    bool equal() const { return sign != 0; }
};

/// Builds the nk x nk matrix c_{u,v} = (w^{u mod k} l_{u div k})^{v div n} [u div k = v mod n]
/// over F_p and compares its determinant with
/// +-(prod_{i<j<k} (w^j - w^i))^n prod_l l^{k(k-1)/2}.
Lemma2Result lemma2_check(int n, int k, const std::vector<std::uint32_t>& lambdas, std::uint32_t p);

} // namespace walkforge::funceq

#endif
