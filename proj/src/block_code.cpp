#include "convmce/block_code.hpp"

#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

BlockCode::BlockCode(CodeFamily family, Matrix generator, std::size_t t)
    : family_(family), n_(generator.cols()), k_(generator.rows()), t_(t), generator_(std::move(generator)) {}

BlockCode BlockCode::make(CodeFamily family, FieldPtr field, std::size_t n, std::size_t k) {
    switch (family) {
        case CodeFamily::ReedSolomon:
            return reed_solomon(std::move(field), n, k);
        case CodeFamily::IdentityTest:
            return identity_test(std::move(field), n, k);
    }
    throw ParameterError("unknown code family");
}

BlockCode BlockCode::reed_solomon(FieldPtr field, std::size_t n, std::size_t k) {
    if (k == 0 || k > n) throw ParameterError("Reed-Solomon code needs 0 < k <= n");
    if (field->order() <= n) throw ParameterError("Reed-Solomon code needs q > n");
    const Field& f = *field;

    Vector points(n);
    for (std::size_t j = 0; j < n; ++j) points[j] = static_cast<Elem>(j + 1);

    Matrix g(field, k, n);
    for (std::size_t j = 0; j < n; ++j) {
        Elem power = 1;
        for (std::size_t i = 0; i < k; ++i) {
            g(i, j) = power;
            power = f.mul(power, points[j]);
        }
    }

    BlockCode code(CodeFamily::ReedSolomon, g, (n - k) / 2);
    code.points_ = points;
    code.inv_points_.resize(n);
    code.dual_scale_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        code.inv_points_[j] = f.inv(points[j]);
        Elem prod = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) prod = f.mul(prod, f.sub(points[j], points[i]));
        code.dual_scale_[j] = f.inv(prod);
    }
    auto inv = g.block(0, 0, k, k).inverse();
    // Vandermonde on distinct points, always invertible.
    code.info_inverse_ = std::move(*inv);
    return code;
}

BlockCode BlockCode::identity_test(FieldPtr field, std::size_t n, std::size_t k) {
    if (k == 0 || k > n) throw ParameterError("identity test code needs 0 < k <= n");
    Matrix g(std::move(field), k, n);
    for (std::size_t i = 0; i < k; ++i) g(i, i) = 1;
    return BlockCode(CodeFamily::IdentityTest, std::move(g), 0);
}

Vector BlockCode::encode(std::span<const Elem> u) const {
    if (u.size() != k_) throw UsageError("message length must equal k");
    return generator_.left_mul(u);
}

std::optional<DecodeResult> BlockCode::decode(std::span<const Elem> y) const {
    if (y.size() != n_) throw UsageError("received word length must equal n");
    return family_ == CodeFamily::ReedSolomon ? decode_rs(y) : decode_identity(y);
}

std::optional<DecodeResult> BlockCode::decode_identity(std::span<const Elem> y) const {
    for (std::size_t j = k_; j < n_; ++j)
        if (y[j] != 0) return std::nullopt;
    DecodeResult out{Vector(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(k_)), Vector(n_, 0)};
    return out;
}

std::optional<DecodeResult> BlockCode::decode_rs(std::span<const Elem> y) const {
    const Field& f = *field();
    const std::size_t nsyn = n_ - k_;

    // S_r = sum_j y_j v_j x_j^r
    Vector syn(nsyn, 0);
    bool clean = true;
    for (std::size_t j = 0; j < n_; ++j) {
        if (y[j] == 0) continue;
        Elem term = f.mul(y[j], dual_scale_[j]);
        for (std::size_t r = 0; r < nsyn; ++r) {
            syn[r] = f.add(syn[r], term);
            term = f.mul(term, points_[j]);
        }
    }
    for (auto s : syn)
        if (s != 0) clean = false;

    Vector error(n_, 0);
    if (!clean) {
        // Berlekamp-Massey: shortest C(z), C(0) = 1, annihilating the syndromes.
        Vector c{1};
        Vector b{1};
        std::size_t len = 0;
        std::size_t shift = 1;
        Elem b_disc = 1;
        for (std::size_t r = 0; r < nsyn; ++r) {
            Elem d = syn[r];
            for (std::size_t i = 1; i <= len && i < c.size(); ++i) d = f.add(d, f.mul(c[i], syn[r - i]));
            if (d == 0) {
                ++shift;
                continue;
            }
            const Elem coef = f.div(d, b_disc);
            Vector next = c;
            if (next.size() < b.size() + shift) next.resize(b.size() + shift, 0);
            for (std::size_t i = 0; i < b.size(); ++i) next[i + shift] = f.sub(next[i + shift], f.mul(coef, b[i]));
            if (2 * len <= r) {
                b = std::move(c);
                len = r + 1 - len;
                b_disc = d;
                shift = 1;
            } else {
                ++shift;
            }
            c = std::move(next);
        }
        c.resize(len + 1, 0);
        if (len > t_ || c[len] == 0) return std::nullopt;

        // Chien search over the evaluation points: error at j iff C(1/x_j) = 0.
        std::vector<std::size_t> positions;
        for (std::size_t j = 0; j < n_; ++j) {
            Elem acc = 0;
            Elem power = 1;
            for (std::size_t i = 0; i <= len; ++i) {
                acc = f.add(acc, f.mul(c[i], power));
                power = f.mul(power, inv_points_[j]);
            }
            if (acc == 0) positions.push_back(j);
        }
        if (positions.size() != len) return std::nullopt;

        // Omega(z) = S(z) C(z) mod z^len.
        Vector omega(len, 0);
        for (std::size_t i = 0; i < len; ++i)
            for (std::size_t a = 0; a <= i; ++a) omega[i] = f.add(omega[i], f.mul(c[a], syn[i - a]));

        // Forney: E_j = -x_j Omega(1/x_j) / C'(1/x_j), e_j = E_j / v_j.
        for (auto j : positions) {
            const Elem z = inv_points_[j];
            Elem om = 0;
            Elem power = 1;
            for (std::size_t i = 0; i < len; ++i) {
                om = f.add(om, f.mul(omega[i], power));
                power = f.mul(power, z);
            }
            Elem deriv = 0;
            power = 1;
            for (std::size_t i = 1; i <= len; ++i) {
                deriv = f.add(deriv, f.mul(f.mul(f.from_integer(i), c[i]), power));
                power = f.mul(power, z);
            }
            if (deriv == 0) return std::nullopt;
            const Elem scaled = f.neg(f.div(f.mul(points_[j], om), deriv));
            error[j] = f.div(scaled, dual_scale_[j]);
            if (error[j] == 0) return std::nullopt;
        }
    }

    Vector codeword(y.begin(), y.end());
    for (std::size_t j = 0; j < n_; ++j) codeword[j] = f.sub(codeword[j], error[j]);
    Vector message = info_inverse_.left_mul(std::span<const Elem>(codeword.data(), k_));
    if (generator_.left_mul(message) != codeword) return std::nullopt;
    return DecodeResult{std::move(message), std::move(error)};
}

}  // namespace convmce
