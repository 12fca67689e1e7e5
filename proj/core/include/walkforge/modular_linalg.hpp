#ifndef WALKFORGE_MODULAR_LINALG_HPP
#define WALKFORGE_MODULAR_LINALG_HPP

#include <cstdint>
#include <optional>
#include <vector>

namespace walkforge
{

/// Dense row-major matrix over F_p, entries reduced to [0, p).
class ModMatrix
{
public:
    ModMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint32_t& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::uint32_t at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::uint32_t* row(std::size_t r) { return data_.data() + r * cols_; }
    const std::uint32_t* row(std::size_t r) const { return data_.data() + r * cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> data_;
};

/// Basis of the right kernel, one vector per free column of the reduced
/// row echelon form, in increasing order of that column.
std::vector<std::vector<std::uint32_t>> nullspace(const ModMatrix& m, std::uint32_t p);

std::size_t rank(const ModMatrix& m, std::uint32_t p);

/// Determinant of a square matrix.
std::uint32_t determinant(const ModMatrix& m, std::uint32_t p);

/// Kernel vector whose last nonzero entry has the smallest possible index,
/// normalized so that entry is 1; none if the columns are independent.
std::optional<std::vector<std::uint32_t>> first_kernel_vector(const ModMatrix& m, std::uint32_t p);

} // namespace walkforge

#endif
