#include <walkforge/funceq.hpp>

namespace walkforge::funceq
{

namespace
{

std::uint32_t determinant_mod(std::vector<std::vector<std::uint32_t>> a, const PrimeField& f)
{
    const std::size_t n = a.size();
    std::uint32_t det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) {
            ++piv;
        }
        if (piv == n) {
            return 0;
        }
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        const std::uint32_t inv = f.inv(a[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) {
                continue;
            }
            const std::uint32_t factor = f.mul(a[r][c], inv);
            for (std::size_t cc = c; cc < n; ++cc) {
                a[r][cc] = f.sub(a[r][cc], f.mul(factor, a[c][cc]));
            }
        }
    }
    return det;
}

} // namespace

Lemma2Result lemma2_check(int n, int k, const std::vector<std::uint32_t>& lambdas, std::uint32_t p)
{
    if (n < 1 || k < 1) {
        throw Error("n and k must be positive");
    }
    if (lambdas.size() != static_cast<std::size_t>(n)) {
        throw Error("expected " + std::to_string(n) + " lambda values");
    }
    PrimeField f(p);
    for (auto l : lambdas) {
        if (l % p == 0) {
            throw Error("lambda values must be nonzero mod p");
        }
    }
    Lemma2Result res;
    res.prime = p;
    res.omega = f.primitive_root_of_unity(static_cast<std::uint32_t>(k));
    const auto size = static_cast<std::size_t>(n * k);
    std::vector<std::vector<std::uint32_t>> c(size, std::vector<std::uint32_t>(size, 0));
    for (std::size_t u = 0; u < size; ++u) {
        const std::size_t block = u / static_cast<std::size_t>(k);
        const std::uint32_t base = f.mul(f.pow(res.omega, u % static_cast<std::size_t>(k)), lambdas[block] % p);
        for (std::size_t v = 0; v < size; ++v) {
            if (block == v % static_cast<std::size_t>(n)) {
                c[u][v] = f.pow(base, v / static_cast<std::size_t>(n));
            }
        }
    }
    res.determinant = determinant_mod(std::move(c), f);
    std::uint32_t vandermonde = 1;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            vandermonde = f.mul(vandermonde, f.sub(f.pow(res.omega, static_cast<std::uint64_t>(j)), f.pow(res.omega, static_cast<std::uint64_t>(i))));
        }
    }
    res.formula = f.pow(vandermonde, static_cast<std::uint64_t>(n));
    const auto binom = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k - 1) / 2;
    for (auto l : lambdas) {
        res.formula = f.mul(res.formula, f.pow(l % p, binom));
    }
    if (res.determinant == res.formula) {
        res.sign = 1;
    } else if (res.determinant == f.neg(res.formula)) {
        res.sign = -1;
    }
    return res;
}

} // namespace walkforge::funceq
