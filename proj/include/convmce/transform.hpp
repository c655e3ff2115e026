#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convmce/bigint.hpp"
#include "convmce/laurent.hpp"
#include "convmce/rng.hpp"

namespace convmce {

/// Exponent multiplicities of the diagonal matrix Δ(D, D^-1): d_i entries
/// equal to D^i for i in [-μ, μ], laid out with increasing exponents.
/// Invariant: μ d_{-μ} + ... + d_{-1} = d_1 + ... + μ d_μ.
class DeltaProfile {
public:
    /// `counts[i + mu]` is d_i. Throws ParameterError if unbalanced.
    DeltaProfile(int mu, std::vector<std::uint32_t> counts);

    static DeltaProfile identity(std::size_t n) { return DeltaProfile(0, {static_cast<std::uint32_t>(n)}); }

    int mu() const noexcept { return mu_; }
    std::size_t n() const noexcept { return n_; }
    std::uint32_t count(int exponent) const noexcept;
    const std::vector<std::uint32_t>& counts() const noexcept { return counts_; }
    bool is_identity() const noexcept { return count(0) == n_; }

    /// Exponent of each diagonal position, nondecreasing.
    std::vector<int> exponents() const;
    /// First diagonal position of the block with the given exponent.
    std::size_t block_offset(int exponent) const;

    /// Δ as a Laurent matrix.
    LaurentMatrix matrix(const FieldPtr& field) const;

    friend bool operator==(const DeltaProfile&, const DeltaProfile&) = default;

private:
    int mu_;
    std::size_t n_;
    std::vector<std::uint32_t> counts_;
};

/// Balanced nonidentity profiles for (n, μ) in a fixed deterministic order.
std::vector<DeltaProfile> enumerate_profiles(std::size_t n, int mu);

/// Uniformly random profile; the identity only when μ = 0. Exact enumeration
/// when count_delta(n, μ) <= kProfileEnumerationLimit, otherwise rejection on
/// uniform compositions of n (still exactly uniform).
DeltaProfile sample_delta(std::size_t n, int mu, Rng& rng);
inline constexpr std::uint64_t kProfileEnumerationLimit = 1'000'000;

/// Permutation matrix Γ with Γ[i][image(i)] = 1.
class Permutation {
public:
    explicit Permutation(std::vector<std::uint32_t> image);
    static Permutation identity(std::size_t n);
    static Permutation random(std::size_t n, Rng& rng);

    std::size_t size() const noexcept { return image_.size(); }
    const std::vector<std::uint32_t>& image() const noexcept { return image_; }
    Permutation inverse() const;
    Matrix matrix(const FieldPtr& field) const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::uint32_t> image_;
};

/// The constant matrix Π of the factorization T = Π Δ Γ: identity diagonal
/// blocks sized by the profile, and off-diagonal blocks U_{i,j} with at most
/// one nonzero entry per row. Invertible.
class PiMatrix {
public:
    /// Throws ParameterError if `m` violates the block structure or is singular.
    PiMatrix(const DeltaProfile& profile, Matrix m);

    /// Block upper-triangular sample: below-diagonal blocks zero; each row of
    /// each above-diagonal block gets one uniform nonzero entry at a uniform
    /// column with probability `density`.
    static PiMatrix sample(const DeltaProfile& profile, const FieldPtr& field, Rng& rng, Fraction density);

    const Matrix& matrix() const noexcept { return m_; }
    bool is_upper_triangular() const noexcept;
    /// Back-substitution for the unit upper-triangular case, Gauss-Jordan otherwise.
    Matrix inverse() const;

    friend bool operator==(const PiMatrix& a, const PiMatrix& b) { return a.m_ == b.m_; }

private:
    Matrix m_;
};

struct TransformFactors {
    PiMatrix pi;
    DeltaProfile delta;
    Permutation gamma;
};

/// Full random sample of (Π, Δ, Γ).
TransformFactors sample_transform(const FieldPtr& field, std::size_t n, int mu, Rng& rng, Fraction density);

/// T = Π Δ Γ.
LaurentMatrix compose_T(const TransformFactors& f);

/// P = T^{-1} = Γ^T Δ^{-1} Π^{-1}.
LaurentMatrix invert_T(const TransformFactors& f);

struct TViolation {
    enum class Kind {
        NotSquare,
        RowHasSeveralNonzeros,     // a row of some T_i has more than one nonzero entry
        ColumnInSeveralCoeffs,     // nonzero column sets of the T_i overlap
        ColumnUncovered,           // some column is zero in every T_i
        DeterminantNotConstant,    // column exponents do not sum to zero
        Singular,                  // recovered constant factor not invertible
    };
    Kind kind;
    int coefficient = 0;     // exponent i of T_i where relevant
    std::size_t index = 0;   // row or column
    std::string message;
};

/// Checks the admissibility conditions of T: determinant in F \ {0}, nonzero
/// column sets of the T_i partition the columns, each row of each T_i has at
/// most one nonzero entry. Empty result means valid. Never throws.
std::vector<TViolation> validate_T(const LaurentMatrix& t);

/// Factorization recovered from an admissible T by reading off column
/// exponents: T = C · diag(D^{e_c}) with C constant. `gamma` sorts the
/// columns by exponent, `pi` is C with its columns in that order.
struct RecoveredFactors {
    Matrix pi;
    std::vector<int> exponents;  // per column of T
    Permutation gamma;
};
std::optional<RecoveredFactors> recover_factors(const LaurentMatrix& t);

/// p(r, i, μ): partitions of r into exactly i parts, each at most μ.
BigInt partition_count(std::int64_t r, std::int64_t i, std::int64_t mu);

/// Number of balanced profiles different from the identity, by the
/// partition-sum formula.
BigInt count_delta(std::size_t n, int mu);

struct UCount {
    BigInt literal;  // (q-1)(cols+1)^rows
    BigInt derived;  // ((q-1)cols + 1)^rows: matrices with <= 1 nonzero per row
};
UCount count_U(std::uint64_t rows, std::uint64_t cols, std::uint64_t q);

}  // namespace convmce
