#ifndef WALKFORGE_BIRATIONAL_HPP
#define WALKFORGE_BIRATIONAL_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <walkforge/laurent.hpp>

namespace walkforge::orbit
{

/// Rational expression in x, y built from constants, +, * and reciprocals.
class Expr
{
public:
    enum class Op { x, y, constant, add, mul, reciprocal };

    static Expr x();
    static Expr y();
    static Expr constant(const Rational& c);

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr reciprocal(const Expr& a);

    Op op() const { return node_->op; }

    /// Value at (x, y) over F_p; none when a reciprocal of zero occurs.
    std::optional<std::uint32_t> evaluate(std::uint32_t x, std::uint32_t y, const PrimeField& f) const;
    /// Laurent expansion (reciprocals in decreasing powers of x).
    LaurentPoly expand(int x_floor) const;
    /// Replaces x and y by the given expressions.
    Expr substitute(const Expr& x, const Expr& y) const;

    std::string to_string() const;

private:
    struct Node
    {
        Op op;
        Rational value;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Op op, const Expr* a, const Expr* b, Rational value = 0);

    std::shared_ptr<const Node> node_;
};

/// The substitution (x, y) -> (x_image, y_image).
struct BirationalMap
{
    Expr x_image = Expr::x();
    Expr y_image = Expr::y();
    std::string name;

    /// this after `first`: (x, y) -> this(first(x, y)) as points; as an
    /// operator on functions, f -> f(this(first(.))).
    BirationalMap after(const BirationalMap& first) const;
    std::string to_string() const;
};

BirationalMap identity_map();

struct GroupElement
{
    BirationalMap map;
    int sign = 1;
    /// Shortest generator word, e.g. "Phi.Psi" (empty for the identity).
    std::string word;
};

/// Closure under composition, maps compared by evaluation at random points
/// of a large prime field; signs are (-1)^(shortest word length) and are
/// checked against every relation met during closure.
std::vector<GroupElement> generate_group(const std::vector<BirationalMap>& generators, std::size_t cap = 64);

/// f(g_x, g_y) for a truncated series f.
TruncatedLaurent apply(const BirationalMap& g, const TruncatedLaurent& f);

} // namespace walkforge::orbit

#endif
