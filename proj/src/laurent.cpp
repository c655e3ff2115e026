#include "convmce/laurent.hpp"

#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

LaurentMatrix::LaurentMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {}

LaurentMatrix::LaurentMatrix(int low, std::vector<Matrix> coeffs) : low_(low), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw UsageError("LaurentMatrix needs at least one coefficient to fix its shape");
    field_ = coeffs_.front().field();
    rows_ = coeffs_.front().rows();
    cols_ = coeffs_.front().cols();
    for (const auto& c : coeffs_) {
        if (c.rows() != rows_ || c.cols() != cols_) throw UsageError("coefficient shape mismatch");
        if (!(*c.field() == *field_)) throw UsageError("coefficients over different fields");
    }
    trim();
}

void LaurentMatrix::trim() {
    std::size_t first = 0;
    while (first < coeffs_.size() && coeffs_[first].is_zero()) ++first;
    if (first == coeffs_.size()) {
        coeffs_.clear();
        low_ = 0;
        return;
    }
    std::size_t last = coeffs_.size();
    while (coeffs_[last - 1].is_zero()) --last;
    coeffs_.erase(coeffs_.begin() + static_cast<std::ptrdiff_t>(last), coeffs_.end());
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    low_ += static_cast<int>(first);
}

LaurentMatrix LaurentMatrix::identity(FieldPtr field, std::size_t n) {
    return monomial(Matrix::identity(std::move(field), n), 0);
}

LaurentMatrix LaurentMatrix::monomial(Matrix coeff, int degree) {
    std::vector<Matrix> c;
    c.push_back(std::move(coeff));
    return LaurentMatrix(degree, std::move(c));
}

Matrix LaurentMatrix::coefficient(int i) const {
    if (i < low_ || i > high_degree() || coeffs_.empty()) return Matrix(field_, rows_, cols_);
    return coeffs_[static_cast<std::size_t>(i - low_)];
}

Matrix LaurentMatrix::evaluate(Elem x) const {
    const Field& f = *field_;
    Matrix out(field_, rows_, cols_);
    if (coeffs_.empty()) return out;
    // x^low may be a negative power.
    Elem power = low_ >= 0 ? f.pow(x, static_cast<std::uint64_t>(low_))
                           : f.pow(f.inv(x), static_cast<std::uint64_t>(-low_));
    for (const auto& c : coeffs_) {
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t col = 0; col < cols_; ++col) out(r, col) = f.add(out(r, col), f.mul(power, c(r, col)));
        power = f.mul(power, x);
    }
    return out;
}

bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) noexcept {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
}

RawProduct lm_mul_raw(const LaurentMatrix& a, const LaurentMatrix& b) {
    if (a.cols() != b.rows()) throw UsageError("Laurent product dimension mismatch");
    if (!a.field() || !b.field() || !(*a.field() == *b.field())) throw UsageError("Laurent product over different fields");
    RawProduct out;
    out.low = a.low_degree() + b.low_degree();
    if (a.is_zero() || b.is_zero()) return out;
    const std::size_t len = a.coefficients().size() + b.coefficients().size() - 1;
    out.coeffs.assign(len, Matrix(a.field(), a.rows(), b.cols()));
    for (std::size_t i = 0; i < a.coefficients().size(); ++i) {
        const Matrix& ai = a.coefficients()[i];
        if (ai.is_zero()) continue;
        for (std::size_t j = 0; j < b.coefficients().size(); ++j) {
            const Matrix& bj = b.coefficients()[j];
            Matrix& acc = out.coeffs[i + j];
            for (std::size_t r = 0; r < ai.rows(); ++r) bj.left_mul_add(ai.row(r), acc.row(r));
        }
    }
    return out;
}

LaurentMatrix lm_mul(const LaurentMatrix& a, const LaurentMatrix& b) {
    RawProduct raw = lm_mul_raw(a, b);
    if (raw.coeffs.empty()) return LaurentMatrix(a.field(), a.rows(), b.cols());
    return LaurentMatrix(raw.low, std::move(raw.coeffs));
}

}  // namespace convmce
