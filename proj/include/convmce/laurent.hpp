#pragma once

#include <cstddef>
#include <vector>

#include "convmce/matrix.hpp"

namespace convmce {

/// Matrix of Laurent polynomials over F_q stored as coefficient matrices
/// M_low, ..., M_high. Canonical form: the outermost coefficients are nonzero,
/// unless the whole matrix is zero (then there are no coefficients).
class LaurentMatrix {
public:
    LaurentMatrix() = default;
    /// The zero matrix.
    LaurentMatrix(FieldPtr field, std::size_t rows, std::size_t cols);
    /// Coefficients of D^low, D^{low+1}, ...; zero outer coefficients are trimmed.
    LaurentMatrix(int low, std::vector<Matrix> coeffs);

    static LaurentMatrix identity(FieldPtr field, std::size_t n);
    static LaurentMatrix monomial(Matrix coeff, int degree);

    const FieldPtr& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// Lowest/highest exponent with a nonzero coefficient. 0 for the zero matrix.
    int low_degree() const noexcept { return low_; }
    int high_degree() const noexcept { return low_ + static_cast<int>(coeffs_.size()) - 1; }

    /// Coefficient of D^i (a zero matrix outside the support).
    Matrix coefficient(int i) const;
    const std::vector<Matrix>& coefficients() const noexcept { return coeffs_; }

    /// Substitute D = x (x nonzero).
    Matrix evaluate(Elem x) const;

    friend bool operator==(const LaurentMatrix& a, const LaurentMatrix& b) noexcept;

private:
    void trim();

    FieldPtr field_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int low_ = 0;
    std::vector<Matrix> coeffs_;
};

/// Product coefficients over the full degree range [a.low + b.low, a.high + b.high]
/// before trimming.
struct RawProduct {
    int low = 0;
    std::vector<Matrix> coeffs;
};

RawProduct lm_mul_raw(const LaurentMatrix& a, const LaurentMatrix& b);

/// A·B. Throws UsageError on dimension or field mismatch.
LaurentMatrix lm_mul(const LaurentMatrix& a, const LaurentMatrix& b);

inline LaurentMatrix operator*(const LaurentMatrix& a, const LaurentMatrix& b) { return lm_mul(a, b); }

}  // namespace convmce
