#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "convmce/matrix.hpp"

namespace convmce {

enum class CodeFamily : std::uint8_t {
    ReedSolomon = 0,
    IdentityTest = 1,  // G = [I_k | 0], t = 0; for pipeline tests only
};

struct DecodeResult {
    Vector message;  // u, k symbols
    Vector error;    // e, n symbols, y = uG + e
};

/// The secret inner (n, k) block code with its t-error decoder.
///
/// Reed-Solomon codes are in evaluation form: the codeword of u is the
/// polynomial u_0 + u_1 X + ... + u_{k-1} X^{k-1} evaluated at the field
/// elements with canonical values 1, 2, ..., n. Decoding computes syndromes
/// against the dual (generalized RS) code, runs Berlekamp-Massey for the
/// error locator, finds its roots among the evaluation points (Chien search)
/// and recovers error values with Forney's formula.
class BlockCode {
public:
    static BlockCode reed_solomon(FieldPtr field, std::size_t n, std::size_t k);
    static BlockCode identity_test(FieldPtr field, std::size_t n, std::size_t k);
    static BlockCode make(CodeFamily family, FieldPtr field, std::size_t n, std::size_t k);

    CodeFamily family() const noexcept { return family_; }
    const FieldPtr& field() const noexcept { return generator_.field(); }
    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t t() const noexcept { return t_; }
    const Matrix& generator() const noexcept { return generator_; }

    /// u·G. Throws UsageError unless u has k symbols.
    Vector encode(std::span<const Elem> u) const;

    /// Unique (u, e) with y = uG + e and wt(e) <= t, or nullopt when no
    /// codeword lies within distance t. Throws UsageError unless y has n symbols.
    std::optional<DecodeResult> decode(std::span<const Elem> y) const;

private:
    BlockCode(CodeFamily family, Matrix generator, std::size_t t);

    std::optional<DecodeResult> decode_rs(std::span<const Elem> y) const;
    std::optional<DecodeResult> decode_identity(std::span<const Elem> y) const;

    CodeFamily family_;
    std::size_t n_;
    std::size_t k_;
    std::size_t t_;
    Matrix generator_;
    // Reed-Solomon precomputation.
    Vector points_;       // x_j
    Vector inv_points_;   // 1 / x_j
    Vector dual_scale_;   // v_j = 1 / prod_{i != j} (x_j - x_i)
    Matrix info_inverse_; // inverse of the first k columns of G
};

}  // namespace convmce
