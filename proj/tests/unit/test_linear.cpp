#include <doctest.h>

#include "convmce/block_code.hpp"
#include "convmce/errors.hpp"
#include "convmce/laurent.hpp"
#include "../oracles.hpp"

using namespace convmce;

TEST_CASE("rank and inverse agree with the reference routine") {
    Rng rng(11);
    for (std::uint32_t q : {2u, 3u, 8u, 256u}) {
        const auto f = Field::with_order(q);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t r = 1 + rng.below(7), c = 1 + rng.below(7);
            Matrix m = Matrix::random(f, r, c, rng);
            // Force some dependence now and then.
            if (r > 1 && trial % 3 == 0)
                for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = f->add(m(0, j), m(r > 2 ? 1 : 0, j));
            CAPTURE(q);
            REQUIRE(m.rank() == oracle::rank(m));
            if (r == c) {
                const auto inv = m.inverse();
                REQUIRE(inv.has_value() == (oracle::rank(m) == r));
                if (inv) {
                    CHECK(*inv * m == Matrix::identity(f, r));
                    CHECK(m * *inv == Matrix::identity(f, r));
                }
            }
        }
    }
}

TEST_CASE("matrix products") {
    Rng rng(2);
    const auto f = Field::gf256();
    const Matrix a = Matrix::random(f, 3, 4, rng), b = Matrix::random(f, 4, 5, rng), c = Matrix::random(f, 5, 2, rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * b).transpose() == b.transpose() * a.transpose());
    const Vector v{1, 2, 3};
    const auto av = a.left_mul(v);
    for (std::size_t j = 0; j < 4; ++j) {
        Elem s = 0;
        for (std::size_t i = 0; i < 3; ++i) s = f->add(s, f->mul_schoolbook(v[i], a(i, j)));
        CHECK(av[j] == s);
    }
    CHECK_THROWS_AS(a * a, UsageError);
    CHECK_THROWS_AS(a * Matrix(Field::with_order(8), 4, 1), UsageError);
    CHECK(Matrix::random_invertible(f, 6, rng).is_invertible());
}

// All codewords within distance t of y, by enumerating F_8^3.
static std::vector<Vector> near_codewords(const BlockCode& code, const Vector& y) {
    const Field& f = *code.field();
    std::vector<Vector> out;
    Vector u(code.k());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < code.k(); ++i) total *= f.order();
    for (std::uint64_t x = 0; x < total; ++x) {
        std::uint64_t rest = x;
        for (auto& s : u) {
            s = static_cast<Elem>(rest % f.order());
            rest /= f.order();
        }
        const auto c = code.encode(u);
        std::size_t d = 0;
        for (std::size_t j = 0; j < c.size(); ++j) d += c[j] != y[j];
        if (d <= code.t()) out.push_back(u);
    }
    return out;
}

TEST_CASE("Reed-Solomon decoder matches exhaustive nearest-codeword search") {
    const auto f = Field::with_order(8);
    const auto code = BlockCode::reed_solomon(f, 7, 3);
    CHECK(code.t() == 2);
    Rng rng(5);
    for (int trial = 0; trial < 3000; ++trial) {
        Vector y(7);
        const std::size_t mode = rng.below(3);
        if (mode == 0) {
            for (auto& s : y) s = static_cast<Elem>(rng.below(8));
        } else {
            Vector u(3);
            for (auto& s : u) s = static_cast<Elem>(rng.below(8));
            y = code.encode(u);
            const std::size_t w = rng.below(code.t() + 2);
            for (std::size_t i = 0; i < w; ++i) y[rng.below(7)] ^= static_cast<Elem>(1 + rng.below(7));
        }
        const auto expect = near_codewords(code, y);
        const auto got = code.decode(y);
        REQUIRE(expect.size() <= 1);
        REQUIRE(got.has_value() == (expect.size() == 1));
        if (got) {
            CHECK(got->message == expect[0]);
            auto c = code.encode(got->message);
            add_into(*f, c, got->error);
            CHECK(c == y);
            CHECK(weight(got->error) <= code.t());
        }
    }
}

TEST_CASE("Reed-Solomon decoder corrects up to t errors over F_256") {
    const auto f = Field::gf256();
    Rng rng(8);
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{32, 16}, {255, 223}, {10, 9}, {16, 2}}) {
        const auto code = BlockCode::reed_solomon(f, n, k);
        CHECK(code.t() == (n - k) / 2);
        for (int trial = 0; trial < 100; ++trial) {
            Vector u(k);
            for (auto& s : u) s = static_cast<Elem>(rng.below(256));
            Vector e(n, 0);
            const std::size_t w = rng.below(code.t() + 1);
            for (std::size_t i = 0; i < w; ++i) e[rng.below(n)] = static_cast<Elem>(1 + rng.below(255));
            auto y = code.encode(u);
            add_into(*f, y, e);
            const auto got = code.decode(y);
            REQUIRE(got.has_value());
            CHECK(got->message == u);
            CHECK(got->error == e);
        }
    }
    CHECK_THROWS_AS(BlockCode::reed_solomon(Field::with_order(8), 8, 3), ParameterError);
}

TEST_CASE("identity test code") {
    const auto f = Field::with_order(8);
    const auto code = BlockCode::identity_test(f, 5, 3);
    CHECK(code.t() == 0);
    const auto c = code.encode(Vector{1, 2, 3});
    CHECK(c == Vector{1, 2, 3, 0, 0});
    CHECK(code.decode(c)->message == Vector{1, 2, 3});
    CHECK_FALSE(code.decode(Vector{1, 2, 3, 0, 4}).has_value());
}

TEST_CASE("Laurent products respect evaluation") {
    Rng rng(4);
    const auto f = Field::with_order(16);
    for (int trial = 0; trial < 100; ++trial) {
        auto rand_lm = [&](std::size_t r, std::size_t c) {
            const int low = static_cast<int>(rng.below(5)) - 2;
            std::vector<Matrix> cs;
            for (std::size_t i = 0, len = 1 + rng.below(4); i < len; ++i) cs.push_back(Matrix::random(f, r, c, rng));
            return LaurentMatrix(low, cs);
        };
        const auto a = rand_lm(2, 3), b = rand_lm(3, 2);
        const auto ab = a * b;
        for (Elem x = 1; x < 16; ++x) CHECK(ab.evaluate(x) == a.evaluate(x) * b.evaluate(x));
        if (!ab.is_zero()) {
            CHECK_FALSE(ab.coefficient(ab.low_degree()).is_zero());
            CHECK_FALSE(ab.coefficient(ab.high_degree()).is_zero());
        }
    }
    const auto id = LaurentMatrix::identity(f, 3);
    CHECK(id.low_degree() == 0);
    CHECK(id.high_degree() == 0);
    Matrix zero(f, 2, 2);
    const LaurentMatrix trimmed(-3, {zero, Matrix::identity(f, 2), zero});
    CHECK(trimmed.low_degree() == -2);
    CHECK(trimmed.high_degree() == -2);
    CHECK(LaurentMatrix(0, {zero}).is_zero());
}
