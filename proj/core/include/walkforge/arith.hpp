#ifndef WALKFORGE_ARITH_HPP
#define WALKFORGE_ARITH_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace walkforge
{

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n);

/// Arithmetic in Z/pZ for a prime p < 2^31.
///
/// Elements are plain uint32_t values in [0, p). The field object only
/// carries the modulus, so copies are cheap and it is safe to share
/// between threads.
class PrimeField
{
public:
    explicit PrimeField(std::uint32_t p);

    std::uint32_t prime() const noexcept { return p_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept
    {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const noexcept
    {
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint32_t neg(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
    /// Throws walkforge::Error on zero.
    std::uint32_t inv(std::uint32_t a) const;

    std::uint32_t from_int(std::int64_t v) const noexcept;
    std::uint32_t from_bigint(const BigInt& v) const;
    /// Throws when the denominator vanishes mod p.
    std::uint32_t from_rational(const Rational& v) const;

    /// Smallest generator of the multiplicative group.
    std::uint32_t generator() const;
    /// A primitive k-th root of unity; requires k | p - 1.
    std::uint32_t primitive_root_of_unity(std::uint32_t k) const;

private:
    std::uint32_t p_;
};

/// Coefficient domain of a counting series.
struct CoefficientDomain
{
    enum class Kind { modular, integer, rational };

    Kind kind = Kind::integer;
    std::uint32_t prime = 0;

    static CoefficientDomain modular(std::uint32_t p);
    static CoefficientDomain integer() { return {Kind::integer, 0}; }
    static CoefficientDomain rational() { return {Kind::rational, 0}; }

    /// Accepts "exact", "integer", "rational" and "mod:P".
    static CoefficientDomain parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const CoefficientDomain&, const CoefficientDomain&) = default;
};

inline constexpr std::uint32_t default_prime = 45007;

std::string to_string(const Rational& q);
Rational parse_rational(std::string_view text);

std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept;

} // namespace walkforge

#endif
