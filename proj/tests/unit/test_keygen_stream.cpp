#include <doctest.h>

#include "convmce/errors.hpp"
#include "convmce/keygen.hpp"
#include "convmce/stream.hpp"
#include "../oracles.hpp"

using namespace convmce;

namespace {

PolyVector random_message(const Field& f, std::size_t k, std::size_t len, Rng& rng) {
    auto u = PolyVector::zeros(k, len);
    for (auto& c : u.coeffs)
        for (auto& s : c) s = static_cast<Elem>(rng.below(f.order()));
    return u;
}

// Windows of 2mu+1 over the sequence, clipped at both ends, by direct sums.
std::optional<std::size_t> naive_validate(const PolyVector& e, std::size_t t, int mu) {
    for (std::size_t i = 0; i < e.size(); ++i) {
        std::size_t s = 0;
        for (std::size_t j = i; j < std::min(e.size(), i + 2 * mu + 1); ++j) s += weight(e.coeffs[j]);
        if (s > t) return i;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("parameter validation") {
    auto p = SchemeParams::small();
    CHECK_NOTHROW(p.validate());
    p.k = 7;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = SchemeParams::small();
    p.nu = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = SchemeParams::small();
    p.n = 8;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    CHECK(SchemeParams::reference().field->order() == 256);
}

TEST_CASE("public key structure") {
    Rng rng(31);
    for (auto params : {SchemeParams::small(), SchemeParams::reference()}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto kp = keygen(params, rng);
            const auto& sk = kp.sec;
            CHECK(kp.pub.coeffs.size() == static_cast<std::size_t>(params.mu + params.nu + 1));
            // G' = S G P as Laurent matrices.
            const auto g = LaurentMatrix::monomial(sk.code.generator(), 0);
            const auto expect = sk.s * g * sk.p;
            CHECK(expect == kp.pub.as_laurent());
            CHECK(expect.low_degree() >= 0);
            CHECK(expect.high_degree() <= params.mu + params.nu);
            CHECK(sk.t * sk.p == LaurentMatrix::identity(params.field, params.n));
            CHECK(sk.s.coefficient(params.mu).is_invertible());
        }
    }
    Rng a(5), b(5);
    CHECK(keygen(SchemeParams::small(), a).pub == keygen(SchemeParams::small(), b).pub);
}

TEST_CASE("sliding generator reproduces encryption") {
    Rng rng(37);
    const auto params = SchemeParams::small();
    const auto kp = keygen(params, rng);
    const std::size_t ell = 4;
    const auto u = random_message(*params.field, params.k, ell + 1, rng);
    const auto y = encrypt(kp.pub, u, PolyVector::zeros(params.n, 0));
    Vector flat;
    for (const auto& c : u.coeffs) flat.insert(flat.end(), c.begin(), c.end());
    const auto m = sliding_generator(kp.pub, ell);
    const auto cw = m.left_mul(flat);
    Vector yflat;
    for (const auto& c : y.coeffs) yflat.insert(yflat.end(), c.begin(), c.end());
    CHECK(cw == yflat);
    const auto tr = truncated_generator(kp.pub, 2);
    CHECK(tr == m.block(0, 0, 3 * params.k, 3 * params.n));
}

TEST_CASE("error sampler respects the sliding window") {
    Rng rng(41);
    for (int trial = 0; trial < 3000; ++trial) {
        const auto f = Field::with_order(8);
        const std::size_t n = 1 + rng.below(10);
        const std::size_t t = rng.below(n + 2);
        const int mu = static_cast<int>(rng.below(4));
        const Fraction load{static_cast<std::uint32_t>(rng.below(5)), 4};
        const auto e = sample_error(f, rng.below(30), n, t, mu, rng, load);
        REQUIRE_FALSE(validate_error(e, t, mu).has_value());
        for (const auto& c : e.coeffs) CHECK(weight(c) <= std::min(n, t));
    }
    // load 0 gives no errors; load 1 with mu 0 reaches t in some coefficient.
    const auto f = Field::with_order(256);
    CHECK(sample_error(f, 50, 8, 4, 1, rng, Fraction{0, 1}).total_weight() == 0);
    const auto e = sample_error(f, 200, 8, 4, 0, rng, Fraction{1, 1});
    std::size_t top = 0;
    for (const auto& c : e.coeffs) top = std::max(top, weight(c));
    CHECK(top == 4);
}

TEST_CASE("validate_error agrees with direct window sums") {
    Rng rng(43);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t n = 4;
        auto e = PolyVector::zeros(n, rng.below(12));
        for (auto& c : e.coeffs)
            for (auto& s : c) s = rng.bernoulli(1, 4) ? 1 : 0;
        const std::size_t t = rng.below(6);
        const int mu = static_cast<int>(rng.below(3));
        CHECK(validate_error(e, t, mu) == naive_validate(e, t, mu));
    }
}

TEST_CASE("roundtrip and streaming") {
    Rng rng(47);
    for (auto params : {SchemeParams::small(), SchemeParams::reference()}) {
        for (int trial = 0; trial < 30; ++trial) {
            const auto kp = keygen(params, rng);
            const std::size_t len = 1 + rng.below(20);
            const auto u = random_message(*params.field, params.k, len, rng);
            const auto e = sample_error(params.field, len + params.mu + params.nu, params.n, kp.pub.t, params.mu, rng,
                                        Fraction{1, 1});
            const auto y = encrypt(kp.pub, u, e);
            REQUIRE(y.size() == len + params.mu + params.nu);
            std::vector<std::string> warnings;
            CHECK(decrypt(kp.sec, y, &warnings) == u);
            CHECK(warnings.empty());

            // Unframed stream: all recoverable coefficients, the tail zero.
            StreamDecryptor dec(kp.sec);
            std::vector<Vector> out;
            for (std::size_t j = 0; j < y.size(); ++j) {
                auto got = dec.push(y.coeffs[j]);
                // Latency: after y_r is pushed, u_{r-2mu} is available.
                const auto r = static_cast<std::int64_t>(j);
                if (r >= 2 * params.mu) CHECK(got.size() == 1);
                for (auto& v : got) out.push_back(std::move(v));
            }
            for (auto& v : dec.finish()) out.push_back(std::move(v));
            REQUIRE(out.size() == len + params.nu - params.mu);
            for (std::size_t j = 0; j < out.size(); ++j) CHECK(out[j] == u.at(j));
        }
    }
}

TEST_CASE("step counters stay within the per-step budget") {
    Rng rng(53);
    for (auto params : {SchemeParams::small(), SchemeParams::reference()}) {
        const auto kp = keygen(params, rng);
        const auto u = random_message(*params.field, params.k, 40, rng);
        const auto y = encrypt(kp.pub, u, sample_error(params.field, 40, params.n, kp.pub.t, params.mu, rng, {1, 1}));
        StreamDecryptor dec(kp.sec, 39);
        const auto n = params.n, k = params.k;
        for (const auto& c : y.coeffs) {
            dec.push(c);
            const auto& s = dec.last_step();
            CHECK(s.decodes == 1);
            CHECK(s.window_mults <= static_cast<std::uint64_t>(2 * params.mu + 1) * n * n);
            CHECK(s.backsub_mults <= static_cast<std::uint64_t>(params.nu - params.mu + 1) * k * k);
        }
        dec.finish();
        CHECK(dec.totals().decodes == y.size() + 2 * static_cast<std::size_t>(params.mu));
    }
}

TEST_CASE("decoder failures and framing") {
    Rng rng(59);
    const auto params = SchemeParams::reference();
    const auto kp = keygen(params, rng);
    const auto u = random_message(*params.field, params.k, 10, rng);
    const auto y = encrypt(kp.pub, u, PolyVector::zeros(params.n, 0));

    // A burst heavier than t in one coefficient defeats the block decoder.
    auto bad = y;
    for (std::size_t i = 0; i < params.n; ++i) bad.coeffs[5][i] ^= static_cast<Elem>(1 + rng.below(255));
    try {
        decrypt(kp.sec, bad);
        FAIL("expected a decode failure");
    } catch (const DecodeFailure& e) {
        CHECK(e.time_index() >= 5 - params.mu);
        CHECK(e.time_index() <= 5 + params.mu);
    }

    // Truncated and overlong framed streams.
    StreamDecryptor shortdec(kp.sec, 9);
    for (std::size_t j = 0; j + 1 < y.size(); ++j) shortdec.push(y.coeffs[j]);
    CHECK_THROWS_AS(shortdec.finish(), FormatError);
    StreamDecryptor longdec(kp.sec, 8);
    CHECK_THROWS_AS([&] { for (const auto& c : y.coeffs) longdec.push(c); }(), FormatError);

    // Content past the declared message end is reported.
    auto longer = u;
    longer.coeffs.push_back(Vector(params.k, 1));
    const auto y2 = encrypt(kp.pub, longer, PolyVector::zeros(params.n, 0));
    StreamDecryptor framed(kp.sec, 9);
    for (std::size_t j = 0; j < y.size(); ++j) framed.push(y2.coeffs[j]);
    try {
        framed.finish();
    } catch (const DecodeFailure&) {
    }
    CHECK_FALSE(framed.warnings().empty());
}

TEST_CASE("identity inner code exercises the pipeline without errors") {
    Rng rng(61);
    auto params = SchemeParams::small();
    params.family = CodeFamily::IdentityTest;
    const auto kp = keygen(params, rng);
    CHECK(kp.pub.t == 0);
    const auto u = random_message(*params.field, params.k, 6, rng);
    CHECK(decrypt(kp.sec, encrypt(kp.pub, u, PolyVector::zeros(params.n, 0))) == u);
    auto e = PolyVector::zeros(params.n, 1);
    e.coeffs[0][0] = 1;
    CHECK_THROWS_AS(encrypt(kp.pub, u, e), UsageError);
}
