#include <walkforge/arith.hpp>

#include <charconv>
#include <vector>

namespace walkforge
{

bool is_prime(std::uint64_t n)
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n % d == 0) {
            return n == d;
        }
    }
    for (std::uint64_t d = 17; d * d <= n; d += 2) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

PrimeField::PrimeField(std::uint32_t p) : p_(p)
{
    if (p >= (1U << 31) || !is_prime(p)) {
        throw Error("modulus " + std::to_string(p) + " is not a prime below 2^31");
    }
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const noexcept
{
    std::uint64_t result = 1 % p_;
    std::uint64_t base = a % p_;
    while (e != 0) {
        if (e & 1U) {
            result = result * base % p_;
        }
        base = base * base % p_;
        e >>= 1U;
    }
    return static_cast<std::uint32_t>(result);
}

std::uint32_t PrimeField::inv(std::uint32_t a) const
{
    if (a % p_ == 0) {
        throw Error("division by zero in F_" + std::to_string(p_));
    }
    return pow(a, p_ - 2);
}

std::uint32_t PrimeField::from_int(std::int64_t v) const noexcept
{
    return static_cast<std::uint32_t>(floor_mod(v, p_));
}

std::uint32_t PrimeField::from_bigint(const BigInt& v) const
{
    BigInt r = v % p_;
    if (r < 0) {
        r += p_;
    }
    return r.convert_to<std::uint32_t>();
}

std::uint32_t PrimeField::from_rational(const Rational& v) const
{
    std::uint32_t num = from_bigint(boost::multiprecision::numerator(v));
    std::uint32_t den = from_bigint(boost::multiprecision::denominator(v));
    return mul(num, inv(den));
}

std::uint32_t PrimeField::generator() const
{
    if (p_ == 2) {
        return 1;
    }
    std::vector<std::uint32_t> factors;
    std::uint32_t m = p_ - 1;
    for (std::uint32_t d = 2; d * d <= m; ++d) {
        if (m % d == 0) {
            factors.push_back(d);
            while (m % d == 0) {
                m /= d;
            }
        }
    }
    if (m > 1) {
        factors.push_back(m);
    }
    for (std::uint32_t g = 2; g < p_; ++g) {
        bool ok = true;
        for (std::uint32_t q : factors) {
            if (pow(g, (p_ - 1) / q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return g;
        }
    }
    throw Error("no generator found");
}

std::uint32_t PrimeField::primitive_root_of_unity(std::uint32_t k) const
{
    if (k == 0 || (p_ - 1) % k != 0) {
        throw Error("F_" + std::to_string(p_) + " has no primitive " + std::to_string(k) + "-th root of unity");
    }
    return pow(generator(), (p_ - 1) / k);
}

CoefficientDomain CoefficientDomain::modular(std::uint32_t p)
{
    PrimeField check(p);
    return {Kind::modular, p};
}

CoefficientDomain CoefficientDomain::parse(std::string_view text)
{
    if (text == "exact" || text == "integer") {
        return integer();
    }
    if (text == "rational") {
        return rational();
    }
    if (text.starts_with("mod:")) {
        std::uint32_t p = 0;
        auto digits = text.substr(4);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
        if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
            throw Error("bad prime in domain '" + std::string(text) + "'");
        }
        return modular(p);
    }
    throw Error("unknown coefficient domain '" + std::string(text) + "'");
}

std::string CoefficientDomain::to_string() const
{
    switch (kind) {
    case Kind::modular:
        return "mod:" + std::to_string(prime);
    case Kind::integer:
        return "exact";
    case Kind::rational:
        return "rational";
    }
    return "?";
}

std::string to_string(const Rational& q)
{
    if (boost::multiprecision::denominator(q) == 1) {
        return boost::multiprecision::numerator(q).str();
    }
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        if (s.empty()) {
            throw Error("empty number in '" + std::string(text) + "'");
        }
        std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (start == s.size()) {
            throw Error("bad number '" + std::string(text) + "'");
        }
        for (std::size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                throw Error("bad number '" + std::string(text) + "'");
            }
        }
        return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw Error("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_int(text.substr(0, slash)), den);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace walkforge
