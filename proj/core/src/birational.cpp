#include <walkforge/birational.hpp>

#include <random>
#include <unordered_map>

namespace walkforge::orbit
{

Expr Expr::make(Op op, const Expr* a, const Expr* b, Rational value)
{
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = std::move(value);
    if (a) {
        n->a = a->node_;
    }
    if (b) {
        n->b = b->node_;
    }
    return Expr(std::move(n));
}

Expr Expr::x()
{
    return make(Op::x, nullptr, nullptr);
}

Expr Expr::y()
{
    return make(Op::y, nullptr, nullptr);
}

Expr Expr::constant(const Rational& c)
{
    return make(Op::constant, nullptr, nullptr, c);
}

Expr operator+(const Expr& a, const Expr& b)
{
    return Expr::make(Expr::Op::add, &a, &b);
}

Expr operator*(const Expr& a, const Expr& b)
{
    return Expr::make(Expr::Op::mul, &a, &b);
}

Expr reciprocal(const Expr& a)
{
    return Expr::make(Expr::Op::reciprocal, &a, nullptr);
}

std::optional<std::uint32_t> Expr::evaluate(std::uint32_t x, std::uint32_t y, const PrimeField& f) const
{
    switch (node_->op) {
    case Op::x:
        return x;
    case Op::y:
        return y;
    case Op::constant:
        return f.from_rational(node_->value);
    case Op::add:
    case Op::mul: {
        auto a = Expr(node_->a).evaluate(x, y, f);
        auto b = Expr(node_->b).evaluate(x, y, f);
        if (!a || !b) {
            return std::nullopt;
        }
        return node_->op == Op::add ? f.add(*a, *b) : f.mul(*a, *b);
    }
    case Op::reciprocal: {
        auto a = Expr(node_->a).evaluate(x, y, f);
        if (!a || *a == 0) {
            return std::nullopt;
        }
        return f.inv(*a);
    }
    }
    return std::nullopt;
}

LaurentPoly Expr::expand(int x_floor) const
{
    switch (node_->op) {
    case Op::x:
        return monomial(1, 0);
    case Op::y:
        return monomial(0, 1);
    case Op::constant:
        return node_->value == 0 ? LaurentPoly{} : monomial(0, 0, node_->value);
    case Op::add:
        return add(Expr(node_->a).expand(x_floor), Expr(node_->b).expand(x_floor));
    case Op::mul:
        return mul(Expr(node_->a).expand(x_floor), Expr(node_->b).expand(x_floor), x_floor);
    case Op::reciprocal:
        return reciprocal(Expr(node_->a).expand(x_floor), x_floor);
    }
    return {};
}

Expr Expr::substitute(const Expr& x, const Expr& y) const
{
    switch (node_->op) {
    case Op::x:
        return x;
    case Op::y:
        return y;
    case Op::constant:
        return *this;
    case Op::add:
        return Expr(node_->a).substitute(x, y) + Expr(node_->b).substitute(x, y);
    case Op::mul:
        return Expr(node_->a).substitute(x, y) * Expr(node_->b).substitute(x, y);
    case Op::reciprocal:
        return reciprocal(Expr(node_->a).substitute(x, y));
    }
    return *this;
}

std::string Expr::to_string() const
{
    switch (node_->op) {
    case Op::x:
        return "x";
    case Op::y:
        return "y";
    case Op::constant:
        return walkforge::to_string(node_->value);
    case Op::add:
        return "(" + Expr(node_->a).to_string() + " + " + Expr(node_->b).to_string() + ")";
    case Op::mul:
        return Expr(node_->a).to_string() + "*" + Expr(node_->b).to_string();
    case Op::reciprocal:
        return "1/(" + Expr(node_->a).to_string() + ")";
    }
    return "?";
}

BirationalMap BirationalMap::after(const BirationalMap& first) const
{
    // f o this o first: substitute first's images into this map's images
    BirationalMap out;
    out.x_image = x_image.substitute(first.x_image, first.y_image);
    out.y_image = y_image.substitute(first.x_image, first.y_image);
    return out;
}

std::string BirationalMap::to_string() const
{
    return "(x, y) -> (" + x_image.to_string() + ", " + y_image.to_string() + ")";
}

BirationalMap identity_map()
{
    return {Expr::x(), Expr::y(), "id"};
}

namespace
{

constexpr std::uint32_t fingerprint_prime = 2147483647;
constexpr int fingerprint_points = 5;

struct Fingerprint
{
    std::vector<std::uint32_t> values;
    bool operator==(const Fingerprint&) const = default;
};

struct FingerprintHash
{
    std::size_t operator()(const Fingerprint& f) const
    {
        std::size_t h = 1469598103934665603ULL;
        for (auto v : f.values) {
            h = (h ^ v) * 1099511628211ULL;
        }
        return h;
    }
};

Fingerprint fingerprint(const BirationalMap& g, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& points,
                        const PrimeField& f)
{
    Fingerprint fp;
    for (const auto& [x, y] : points) {
        auto gx = g.x_image.evaluate(x, y, f);
        auto gy = g.y_image.evaluate(x, y, f);
        if (!gx || !gy) {
            throw Error("map undefined at a random test point");
        }
        fp.values.push_back(*gx);
        fp.values.push_back(*gy);
    }
    return fp;
}

} // namespace

std::vector<GroupElement> generate_group(const std::vector<BirationalMap>& generators, std::size_t cap)
{
    if (cap < 1) {
        throw Error("group size cap must be positive");
    }
    PrimeField f(fingerprint_prime);
    std::mt19937_64 rng(0x5eed);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> points;
    for (int i = 0; i < fingerprint_points; ++i) {
        points.emplace_back(static_cast<std::uint32_t>(2 + rng() % (fingerprint_prime - 2)),
                            static_cast<std::uint32_t>(2 + rng() % (fingerprint_prime - 2)));
    }
    std::vector<GroupElement> elems = {{identity_map(), 1, ""}};
    std::unordered_map<Fingerprint, std::size_t, FingerprintHash> seen;
    seen.emplace(fingerprint(elems[0].map, points, f), 0);
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t k = 0; k < generators.size(); ++k) {
            const auto& gen = generators[k];
            // word read left to right: apply the elements' maps in order
            BirationalMap m = gen.after(elems[i].map);
            const std::string name = gen.name.empty() ? "g" + std::to_string(k) : gen.name;
            const int sign = -elems[i].sign;
            auto fp = fingerprint(m, points, f);
            auto it = seen.find(fp);
            if (it != seen.end()) {
                if (elems[it->second].sign != sign) {
                    throw Error("sign is not well defined on the generated group (relation of odd length)");
                }
                continue;
            }
            if (elems.size() >= cap) {
                throw Error("group closure exceeds " + std::to_string(cap) + " elements");
            }
            m.name = elems[i].word.empty() ? name : elems[i].word + "." + name;
            seen.emplace(std::move(fp), elems.size());
            elems.push_back({m, sign, m.name});
        }
    }
    return elems;
}

TruncatedLaurent apply(const BirationalMap& g, const TruncatedLaurent& f)
{
    const int floor = f.x_floor();
    const LaurentPoly X = g.x_image.expand(floor);
    const LaurentPoly Y = g.y_image.expand(floor);
    std::map<int, LaurentPoly> xpow;
    std::map<int, LaurentPoly> ypow;
    auto get = [&](std::map<int, LaurentPoly>& cache, const LaurentPoly& base, int k) -> const LaurentPoly& {
        auto it = cache.find(k);
        if (it == cache.end()) {
            it = cache.emplace(k, power(base, k, floor)).first;
        }
        return it->second;
    };
    TruncatedLaurent out(f.order(), floor);
    for (int n = 0; n <= f.order(); ++n) {
        for (const auto& [m, c] : f.at(n)) {
            const auto prod = mul(get(xpow, X, m.first), get(ypow, Y, m.second), floor);
            for (const auto& [pm, pc] : prod) {
                out.add_term(n, pm.first, pm.second, pc * c);
            }
        }
    }
    return out;
}

} // namespace walkforge::orbit
