#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "convmce/field.hpp"
#include "convmce/rng.hpp"

namespace convmce {

using Vector = std::vector<Elem>;

/// Dense row-major matrix over F_q.
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> data);

    static Matrix identity(FieldPtr field, std::size_t n);
    static Matrix random(FieldPtr field, std::size_t rows, std::size_t cols, Rng& rng);
    /// Uniform over GL_n(F_q) by rejection.
    static Matrix random_invertible(FieldPtr field, std::size_t n, Rng& rng);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Elem operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    Elem& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

    std::span<const Elem> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<Elem> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    const std::vector<Elem>& data() const noexcept { return data_; }

    bool is_zero() const noexcept;

    Matrix operator*(const Matrix& o) const;
    Matrix operator+(const Matrix& o) const;
    Matrix transpose() const;

    /// Row vector times matrix: v·M.
    Vector left_mul(std::span<const Elem> v) const;
    /// Accumulate v·M into out (out += v·M).
    void left_mul_add(std::span<const Elem> v, std::span<Elem> out) const;

    std::size_t rank() const;
    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }
    std::optional<Matrix> inverse() const;

    /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const Matrix& m);

    friend bool operator==(const Matrix& a, const Matrix& b) noexcept;

private:
    void require_same_field(const Matrix& o) const;

    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Elem> data_;
};

/// Number of nonzero entries.
std::size_t weight(std::span<const Elem> v) noexcept;

/// a += b over the field.
void add_into(const Field& f, std::span<Elem> a, std::span<const Elem> b) noexcept;

}  // namespace convmce
