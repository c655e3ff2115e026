#include "convmce/keygen.hpp"

#include <stdexcept>
#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

void SchemeParams::validate() const {
    if (!field) throw ParameterError("missing field");
    if (k == 0 || k >= n) throw ParameterError("need 0 < k < n");
    if (mu < 0 || nu < mu) throw ParameterError("need nu >= mu >= 0");
    if (n > 0xffff) throw ParameterError("n too large");
    if (family == CodeFamily::ReedSolomon && field->order() <= n) throw ParameterError("Reed-Solomon needs q > n");
    if (density.den == 0 || density.num > density.den) throw ParameterError("density must be a fraction in [0, 1]");
}

SchemeParams SchemeParams::reference() {
    SchemeParams p;
    p.field = Field::gf256();
    p.n = 32;
    p.k = 16;
    p.mu = 2;
    p.nu = 6;
    return p;
}

SchemeParams SchemeParams::small() {
    SchemeParams p;
    p.field = Field::create(2, 3, {1, 1, 0, 1});
    p.n = 7;
    p.k = 3;
    p.mu = 1;
    p.nu = 3;
    return p;
}

Matrix PublicKey::coefficient(int i) const {
    if (i < 0 || i > memory()) return Matrix(field, k, n);
    return coeffs[static_cast<std::size_t>(i)];
}

LaurentMatrix PublicKey::as_laurent() const { return LaurentMatrix(0, coeffs); }

bool operator==(const PublicKey& a, const PublicKey& b) {
    return *a.field == *b.field && a.n == b.n && a.k == b.k && a.t == b.t && a.mu == b.mu && a.nu == b.nu &&
           a.coeffs == b.coeffs;
}

SecretKey::SecretKey(SchemeParams params_in, LaurentMatrix s_in, TransformFactors factors_in)
    : params(std::move(params_in)),
      s(std::move(s_in)),
      code(BlockCode::make(params.family, params.field, params.n, params.k)),
      factors(std::move(factors_in)) {
    params.validate();
    if (s.rows() != params.k || s.cols() != params.k) throw ParameterError("S(D) must be k x k");
    if (!s.is_zero() && (s.low_degree() < params.mu || s.high_degree() > params.nu))
        throw ParameterError("S(D) support must lie in [mu, nu]");
    auto inv = s.coefficient(params.mu).inverse();
    if (!inv) throw ParameterError("S_mu is not invertible");
    s_mu_inverse = std::move(*inv);
    if (factors.delta.n() != params.n || factors.delta.mu() > params.mu)
        throw ParameterError("transform factors do not match n and mu");
    t = compose_T(factors);
    if (!validate_T(t).empty()) throw ParameterError("composed T is not admissible");
    p = invert_T(factors);
}

bool operator==(const SecretKey& a, const SecretKey& b) {
    return *a.params.field == *b.params.field && a.params.n == b.params.n && a.params.k == b.params.k &&
           a.params.mu == b.params.mu && a.params.nu == b.params.nu && a.params.family == b.params.family &&
           a.params.density == b.params.density && a.s == b.s && a.code.generator() == b.code.generator() &&
           a.factors.pi == b.factors.pi && a.factors.delta == b.factors.delta && a.factors.gamma == b.factors.gamma;
}

LaurentMatrix sample_S(const SchemeParams& params, Rng& rng) {
    std::vector<Matrix> coeffs;
    coeffs.push_back(Matrix::random_invertible(params.field, params.k, rng));
    for (int i = params.mu + 1; i <= params.nu; ++i) coeffs.push_back(Matrix::random(params.field, params.k, params.k, rng));
    return LaurentMatrix(params.mu, std::move(coeffs));
}

PublicKey derive_public(const SecretKey& sk) {
    const auto& prm = sk.params;
    const LaurentMatrix sg = lm_mul(sk.s, LaurentMatrix::monomial(sk.code.generator(), 0));
    RawProduct raw = lm_mul_raw(sg, sk.p);

    PublicKey pk;
    pk.field = prm.field;
    pk.n = prm.n;
    pk.k = prm.k;
    pk.t = sk.code.t();
    pk.mu = prm.mu;
    pk.nu = prm.nu;
    pk.coeffs.assign(static_cast<std::size_t>(prm.mu + prm.nu + 1), Matrix(prm.field, prm.k, prm.n));
    for (std::size_t i = 0; i < raw.coeffs.size(); ++i) {
        const int deg = raw.low + static_cast<int>(i);
        if (raw.coeffs[i].is_zero()) continue;
        if (deg < 0 || deg > prm.mu + prm.nu) throw std::logic_error("public encoder coefficient outside [0, mu+nu]");
        pk.coeffs[static_cast<std::size_t>(deg)] = std::move(raw.coeffs[i]);
    }
    return pk;
}

KeyPair keygen(const SchemeParams& params, Rng& rng) {
    params.validate();
    LaurentMatrix s = sample_S(params, rng);
    TransformFactors f = sample_transform(params.field, params.n, params.mu, rng, params.density);
    SecretKey sk(params, std::move(s), std::move(f));
    PublicKey pk = derive_public(sk);
    return {std::move(pk), std::move(sk)};
}

Matrix sliding_generator(const PublicKey& pk, std::size_t ell) {
    const std::size_t blocks = static_cast<std::size_t>(pk.memory()) + 1;
    Matrix m(pk.field, pk.k * (ell + 1), pk.n * (ell + blocks));
    for (std::size_t i = 0; i <= ell; ++i)
        for (std::size_t j = 0; j < blocks; ++j) m.set_block(i * pk.k, (i + j) * pk.n, pk.coeffs[j]);
    return m;
}

Matrix truncated_generator(const PublicKey& pk, std::size_t s) {
    Matrix m(pk.field, pk.k * (s + 1), pk.n * (s + 1));
    for (std::size_t i = 0; i <= s; ++i)
        for (std::size_t j = i; j <= s; ++j) {
            const std::size_t d = j - i;
            if (d > static_cast<std::size_t>(pk.memory())) continue;
            m.set_block(i * pk.k, j * pk.n, pk.coeffs[d]);
        }
    return m;
}

}  // namespace convmce
