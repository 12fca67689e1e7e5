#include <walkforge/modular_linalg.hpp>

#include <limits>

#include <walkforge/arith.hpp>

namespace walkforge
{

namespace
{

// Row echelon form with lazily reduced 64-bit entries: with p-1 < 2^32, an
// entry can absorb `capacity` updates of size (p-1)^2 before overflowing.
class LazyEchelon
{
public:
    LazyEchelon(const ModMatrix& m, std::uint32_t p) : f_(p), rows_(m.rows()), cols_(m.cols()), data_(rows_ * cols_)
    {
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] = m.row(0)[i] % p;
        }
        const std::uint64_t q = p - 1;
        capacity_ = q == 0 ? std::numeric_limits<std::uint64_t>::max() : (std::numeric_limits<std::uint64_t>::max() - q) / (q * q);
        pivot_row_.assign(cols_, -1);
    }

    std::uint64_t* row(std::size_t r) { return data_.data() + r * cols_; }

    std::uint32_t value(std::size_t r, std::size_t c) { return static_cast<std::uint32_t>(row(r)[c] % f_.prime()); }

    /// Eliminates column c below the current rank; false if no pivot exists.
    bool step(std::size_t c)
    {
        const std::uint32_t p = f_.prime();
        std::size_t piv = rank_;
        while (piv < rows_ && value(piv, c) == 0) {
            ++piv;
        }
        if (piv == rows_) {
            return false;
        }
        if (piv != rank_) {
            for (std::size_t k = 0; k < cols_; ++k) {
                std::swap(row(piv)[k], row(rank_)[k]);
            }
            swaps_ ^= 1U;
        }
        std::uint64_t* pr = row(rank_);
        const std::uint32_t lead = value(rank_, c);
        det_ = f_.mul(det_, lead);
        const std::uint32_t inv = f_.inv(lead);
        for (std::size_t k = c; k < cols_; ++k) {
            pr[k] = f_.mul(static_cast<std::uint32_t>(pr[k] % p), inv);
        }
        if (updates_ + 1 > capacity_) {
            for (std::size_t r = rank_ + 1; r < rows_; ++r) {
                for (std::size_t k = c; k < cols_; ++k) {
                    row(r)[k] %= p;
                }
            }
            updates_ = 0;
        }
        ++updates_;
        for (std::size_t r = rank_ + 1; r < rows_; ++r) {
            std::uint64_t* rr = row(r);
            const std::uint32_t v = static_cast<std::uint32_t>(rr[c] % p);
            if (v == 0) {
                rr[c] = 0;
                continue;
            }
            const std::uint64_t factor = p - v;
            for (std::size_t k = c; k < cols_; ++k) {
                rr[k] += factor * pr[k];
            }
        }
        pivot_row_[c] = static_cast<long>(rank_);
        ++rank_;
        return true;
    }

    std::size_t rank() const { return rank_; }
    long pivot_row(std::size_t c) const { return pivot_row_[c]; }
    std::uint32_t det() const { return swaps_ ? f_.neg(det_) : det_; }
    const PrimeField& field() const { return f_; }

private:
    PrimeField f_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint64_t> data_;
    std::uint64_t capacity_;
    std::uint64_t updates_ = 0;
    std::size_t rank_ = 0;
    std::vector<long> pivot_row_;
    std::uint32_t det_ = 1;
    unsigned swaps_ = 0;
};

} // namespace

std::vector<std::vector<std::uint32_t>> nullspace(const ModMatrix& m, std::uint32_t p)
{
    LazyEchelon e(m, p);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        e.step(c);
    }
    const auto& f = e.field();
    std::vector<std::vector<std::uint32_t>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (e.pivot_row(free) >= 0) {
            continue;
        }
        std::vector<std::uint32_t> v(m.cols(), 0);
        v[free] = 1;
        // back substitution over the pivot columns before `free`
        for (std::size_t c = free; c-- > 0;) {
            const long r = e.pivot_row(c);
            if (r < 0) {
                continue;
            }
            std::uint32_t s = 0;
            for (std::size_t k = c + 1; k <= free; ++k) {
                if (v[k] != 0) {
                    s = f.add(s, f.mul(e.value(static_cast<std::size_t>(r), k), v[k]));
                }
            }
            v[c] = f.neg(s);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t rank(const ModMatrix& m, std::uint32_t p)
{
    LazyEchelon e(m, p);
    for (std::size_t c = 0; c < m.cols() && e.rank() < m.rows(); ++c) {
        e.step(c);
    }
    return e.rank();
}

std::uint32_t determinant(const ModMatrix& m, std::uint32_t p)
{
    if (m.rows() != m.cols()) {
        throw Error("determinant of a non-square matrix");
    }
    LazyEchelon e(m, p);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!e.step(c)) {
            return 0;
        }
    }
    return e.det();
}

std::optional<std::vector<std::uint32_t>> first_kernel_vector(const ModMatrix& m, std::uint32_t p)
{
    LazyEchelon e(m, p);
    const auto& f = e.field();
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (e.step(free)) {
            continue;
        }
        std::vector<std::uint32_t> v(m.cols(), 0);
        v[free] = 1;
        for (std::size_t c = free; c-- > 0;) {
            const auto r = static_cast<std::size_t>(e.pivot_row(c));
            std::uint32_t s = 0;
            for (std::size_t k = c + 1; k <= free; ++k) {
                if (v[k] != 0) {
                    s = f.add(s, f.mul(e.value(r, k), v[k]));
                }
            }
            v[c] = f.neg(s);
        }
        return v;
    }
    return std::nullopt;
}

} // namespace walkforge
