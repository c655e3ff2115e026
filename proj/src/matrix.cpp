#include "convmce/matrix.hpp"

#include <algorithm>
#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols, std::vector<Elem> data)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw UsageError("matrix data size mismatch");
    for (auto v : data_)
        if (!field_->contains(v)) throw UsageError("matrix entry outside the field");
}

Matrix Matrix::identity(FieldPtr field, std::size_t n) {
    Matrix m(std::move(field), n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::random(FieldPtr field, std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix m(std::move(field), rows, cols);
    const auto q = m.field_->order();
    for (auto& v : m.data_) v = static_cast<Elem>(rng.below(q));
    return m;
}

Matrix Matrix::random_invertible(FieldPtr field, std::size_t n, Rng& rng) {
    for (;;) {
        Matrix m = random(field, n, n, rng);
        if (m.is_invertible()) return m;
    }
}

bool Matrix::is_zero() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](Elem v) { return v == 0; });
}

void Matrix::require_same_field(const Matrix& o) const {
    if (field_ != o.field_ && !(*field_ == *o.field_)) throw UsageError("matrices over different fields");
}

Matrix Matrix::operator*(const Matrix& o) const {
    require_same_field(o);
    if (cols_ != o.rows_) throw UsageError("matrix product dimension mismatch");
    Matrix out(field_, rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r) o.left_mul_add(row(r), out.row(r));
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
    require_same_field(o);
    if (rows_ != o.rows_ || cols_ != o.cols_) throw UsageError("matrix sum dimension mismatch");
    Matrix out = *this;
    add_into(*field_, out.data_, o.data_);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

Vector Matrix::left_mul(std::span<const Elem> v) const {
    Vector out(cols_, 0);
    left_mul_add(v, out);
    return out;
}

void Matrix::left_mul_add(std::span<const Elem> v, std::span<Elem> out) const {
    if (v.size() != rows_ || out.size() != cols_) throw UsageError("vector-matrix dimension mismatch");
    const Field& f = *field_;
    for (std::size_t r = 0; r < rows_; ++r) {
        const Elem a = v[r];
        if (a == 0) continue;
        const Elem* src = data_.data() + r * cols_;
        for (std::size_t c = 0; c < cols_; ++c)
            if (src[c] != 0) out[c] = f.add(out[c], f.mul(a, src[c]));
    }
}

std::size_t Matrix::rank() const {
    if (rows_ == 0 || cols_ == 0) return 0;
    const Field& f = *field_;
    std::vector<Elem> a = data_;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols_ && rank < rows_; ++c) {
        std::size_t pivot = rank;
        while (pivot < rows_ && a[pivot * cols_ + c] == 0) ++pivot;
        if (pivot == rows_) continue;
        if (pivot != rank)
            std::swap_ranges(a.begin() + pivot * cols_, a.begin() + (pivot + 1) * cols_, a.begin() + rank * cols_);
        const Elem pinv = f.inv(a[rank * cols_ + c]);
        for (std::size_t r = rank + 1; r < rows_; ++r) {
            const Elem factor = f.mul(a[r * cols_ + c], pinv);
            if (factor == 0) continue;
            for (std::size_t j = c; j < cols_; ++j)
                a[r * cols_ + j] = f.sub(a[r * cols_ + j], f.mul(factor, a[rank * cols_ + j]));
        }
        ++rank;
    }
    return rank;
}

std::optional<Matrix> Matrix::inverse() const {
    if (rows_ != cols_) throw UsageError("inverse of a non-square matrix");
    const Field& f = *field_;
    const std::size_t n = rows_;
    Matrix a = *this;
    Matrix inv = identity(field_, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a(pivot, c) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != c) {
            std::swap_ranges(a.row(pivot).begin(), a.row(pivot).end(), a.row(c).begin());
            std::swap_ranges(inv.row(pivot).begin(), inv.row(pivot).end(), inv.row(c).begin());
        }
        const Elem pinv = f.inv(a(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) = f.mul(a(c, j), pinv);
            inv(c, j) = f.mul(inv(c, j), pinv);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const Elem factor = a(r, c);
            if (factor == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) = f.sub(a(r, j), f.mul(factor, a(c, j)));
                inv(r, j) = f.sub(inv(r, j), f.mul(factor, inv(c, j)));
            }
        }
    }
    return inv;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw UsageError("block out of range");
    Matrix out(field_, nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
    if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw UsageError("block out of range");
    for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t c = 0; c < m.cols_; ++c) (*this)(r0 + r, c0 + c) = m(r, c);
}

bool operator==(const Matrix& a, const Matrix& b) noexcept {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.data_ != b.data_) return false;
    if (a.field_ == b.field_) return true;
    return a.field_ && b.field_ && *a.field_ == *b.field_;
}

std::size_t weight(std::span<const Elem> v) noexcept {
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](Elem x) { return x != 0; }));
}

void add_into(const Field& f, std::span<Elem> a, std::span<const Elem> b) noexcept {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = f.add(a[i], b[i]);
}

}  // namespace convmce
