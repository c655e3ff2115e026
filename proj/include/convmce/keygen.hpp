#pragma once

#include <cstddef>
#include <vector>

#include "convmce/block_code.hpp"
#include "convmce/laurent.hpp"
#include "convmce/transform.hpp"

namespace convmce {

struct SchemeParams {
    FieldPtr field;
    std::size_t n = 0;
    std::size_t k = 0;
    int mu = 0;  // window radius of T
    int nu = 0;  // top degree of S(D)
    CodeFamily family = CodeFamily::ReedSolomon;
    Fraction density;

    /// Throws ParameterError unless 0 < k < n, nu >= mu >= 0 and, for
    /// Reed-Solomon, q > n.
    void validate() const;

    /// F_256, RS[32,16] (t = 8), mu = 2, nu = 6.
    static SchemeParams reference();
    /// F_8 (x^3+x+1), RS[7,3] (t = 2), mu = 1, nu = 3.
    static SchemeParams small();
};

struct PublicKey {
    FieldPtr field;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    int mu = 0;
    int nu = 0;
    std::vector<Matrix> coeffs;  // G'_0 ... G'_{mu+nu}, each k x n

    int memory() const noexcept { return mu + nu; }
    /// Coefficient G'_i, zero outside [0, mu+nu].
    Matrix coefficient(int i) const;
    LaurentMatrix as_laurent() const;

    friend bool operator==(const PublicKey& a, const PublicKey& b);
};

struct SecretKey {
    SchemeParams params;
    LaurentMatrix s;           // S(D), support within [mu, nu], S_mu invertible
    BlockCode code;            // G
    TransformFactors factors;  // T = Pi Delta Gamma
    // Derived on construction.
    LaurentMatrix t;
    LaurentMatrix p;  // T^{-1}
    Matrix s_mu_inverse;

    /// Builds the derived members and checks the key invariants
    /// (S_mu invertible, validate_T passes). Throws ParameterError.
    SecretKey(SchemeParams params, LaurentMatrix s, TransformFactors factors);

    std::size_t t_errors() const noexcept { return code.t(); }

    friend bool operator==(const SecretKey& a, const SecretKey& b);
};

struct KeyPair {
    PublicKey pub;
    SecretKey sec;
};

/// S(D) = sum_{i=mu}^{nu} S_i D^i with S_mu uniform in GL_k and the other
/// coefficients uniform.
LaurentMatrix sample_S(const SchemeParams& params, Rng& rng);

/// G'(D) = S(D) G P(D). Throws std::logic_error if a negative power survives.
PublicKey derive_public(const SecretKey& sk);

KeyPair keygen(const SchemeParams& params, Rng& rng);

/// Block-Toeplitz matrix of size k(l+1) x n(l+1+mu+nu) with block row i
/// holding G'_0 ... G'_{mu+nu} starting at block column i.
Matrix sliding_generator(const PublicKey& pk, std::size_t ell);

/// Block upper-triangular k(s+1) x n(s+1) matrix with G'_{j-i} in block (i, j).
Matrix truncated_generator(const PublicKey& pk, std::size_t s);

}  // namespace convmce
