#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "convmce/errors.hpp"
#include "convmce/transform.hpp"
#include "../oracles.hpp"

using namespace convmce;

TEST_CASE("partition counts match enumeration") {
    for (std::int64_t mu = 1; mu <= 6; ++mu)
        for (std::int64_t r = 0; r <= 20; ++r)
            for (std::int64_t i = 0; i <= r + 1; ++i) {
                CAPTURE(r);
                CAPTURE(i);
                CAPTURE(mu);
                REQUIRE(partition_count(r, i, mu) == oracle::partitions(r, i, mu));
            }
    CHECK(partition_count(-1, 0, 2) == 0);
    CHECK(partition_count(0, 0, 2) == 1);
}

TEST_CASE("profile enumeration and count") {
    for (std::size_t n = 1; n <= 8; ++n)
        for (int mu = 1; mu <= 3; ++mu) {
            const auto brute = oracle::profiles(n, mu);
            const auto listed = enumerate_profiles(n, mu);
            CAPTURE(n);
            CAPTURE(mu);
            CHECK(count_delta(n, mu) == brute.size());
            REQUIRE(listed.size() == brute.size());
            std::set<std::vector<std::uint32_t>> a(brute.begin(), brute.end()), b;
            for (const auto& p : listed) b.insert(p.counts());
            CHECK(a == b);
        }
    CHECK(count_delta(5, 0) == 0);
    CHECK_THROWS_AS(DeltaProfile(1, {1, 0, 0}), ParameterError);
    CHECK_THROWS_AS(DeltaProfile(1, {1, 1}), ParameterError);
}

TEST_CASE("profile sampling is uniform over the enumeration") {
    Rng rng(17);
    const auto all = enumerate_profiles(6, 2);
    std::map<std::vector<std::uint32_t>, int> hits;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) ++hits[sample_delta(6, 2, rng).counts()];
    CHECK(hits.size() == all.size());
    const double expect = static_cast<double>(draws) / static_cast<double>(all.size());
    for (const auto& [p, c] : hits) CHECK(std::abs(c - expect) < 5 * std::sqrt(expect));
    // Large n falls back to rejection sampling; outputs stay balanced.
    for (int i = 0; i < 50; ++i) CHECK_FALSE(sample_delta(200, 3, rng).is_identity());
    CHECK(sample_delta(5, 0, rng).is_identity());
    CHECK_THROWS_AS(sample_delta(1, 1, rng), ParameterError);
}

TEST_CASE("sparse block counts") {
    for (std::uint64_t q : {2u, 3u, 4u})
        for (std::size_t rows = 0; rows <= 2; ++rows)
            for (std::size_t cols = 1; cols <= 3; ++cols) {
                if (rows * cols > 6) continue;
                CHECK(count_U(rows, cols, q).derived == oracle::sparse_row_matrices(rows, cols, q));
            }
    CHECK(count_U(1, 1, 2).literal == 2);
    CHECK(count_U(1, 1, 2).derived == 2);
    CHECK(count_U(1, 2, 3).literal == 6);
    CHECK(count_U(1, 2, 3).derived == 5);
}

TEST_CASE("sampled transforms are admissible") {
    Rng rng(23);
    for (std::uint32_t q : {2u, 8u, 256u})
        for (int mu = 0; mu <= 3; ++mu)
            for (int trial = 0; trial < 30; ++trial) {
                const auto f = Field::with_order(q);
                const std::size_t n = 2 + rng.below(10);
                const auto fac = sample_transform(f, n, mu, rng, Fraction{static_cast<std::uint32_t>(rng.below(3)), 2});
                const auto t = compose_T(fac);
                const auto p = invert_T(fac);
                CAPTURE(q);
                CAPTURE(mu);
                REQUIRE(validate_T(t).empty());
                CHECK(t * p == LaurentMatrix::identity(f, n));
                CHECK(p * t == LaurentMatrix::identity(f, n));
                CHECK(t.low_degree() >= -mu);
                CHECK(t.high_degree() <= mu);
                CHECK(fac.pi.is_upper_triangular());
                CHECK(fac.pi.inverse() * fac.pi.matrix() == Matrix::identity(f, n));

                // Rows of the P_i partition {0..n-1}.
                std::vector<int> owner(n, 0);
                for (int i = p.low_degree(); i <= p.high_degree(); ++i) {
                    const auto pi = p.coefficient(i);
                    for (std::size_t r = 0; r < n; ++r)
                        if (weight(pi.row(r)) > 0) ++owner[r];
                }
                for (auto o : owner) CHECK(o == 1);

                const auto rec = recover_factors(t);
                REQUIRE(rec.has_value());
                const auto ex = fac.delta.exponents();
                std::multiset<int> a(ex.begin(), ex.end()), b(rec->exponents.begin(), rec->exponents.end());
                CHECK(a == b);
            }
}

TEST_CASE("validate_T flags each violation kind") {
    const auto f = Field::with_order(8);
    using K = TViolation::Kind;
    auto has = [](const std::vector<TViolation>& v, K kind) {
        return std::any_of(v.begin(), v.end(), [&](const TViolation& x) { return x.kind == kind; });
    };
    Matrix z(f, 2, 2);
    // Column 0 scaled by D, column 1 by D^-1: admissible.
    Matrix c0(f, 2, 2, {1, 0, 0, 0}), c1(f, 2, 2, {0, 0, 0, 1});
    CHECK(validate_T(LaurentMatrix(-1, {c1, z, c0})).empty());
    // Determinant D^2.
    CHECK(has(validate_T(LaurentMatrix(0, {z, Matrix::identity(f, 2)})), K::DeterminantNotConstant));
    CHECK(has(validate_T(LaurentMatrix(0, {Matrix(f, 2, 2, {1, 1, 0, 1}), Matrix(f, 2, 2, {1, 0, 0, 0})})),
              K::ColumnInSeveralCoeffs));
    CHECK(has(validate_T(LaurentMatrix(0, {Matrix(f, 2, 2, {1, 0, 1, 0})})), K::ColumnUncovered));
    CHECK(has(validate_T(LaurentMatrix(0, {Matrix(f, 2, 2, {1, 1, 0, 1})})), K::RowHasSeveralNonzeros));
    CHECK(has(validate_T(LaurentMatrix(0, {Matrix(f, 2, 3)})), K::NotSquare));
    // Row sparsity holds but the constant factor is singular.
    Matrix s0(f, 2, 2, {1, 0, 1, 0}), s1(f, 2, 2, {0, 1, 0, 1});
    CHECK(has(validate_T(LaurentMatrix(-1, {s1, z, s0})), K::Singular));
}

TEST_CASE("Pi validation") {
    const auto f = Field::with_order(8);
    const DeltaProfile prof(1, {1, 1, 1});
    Matrix ok = Matrix::identity(f, 3);
    ok(0, 1) = 5;
    ok(0, 2) = 3;
    CHECK_NOTHROW(PiMatrix(prof, ok));
    const DeltaProfile prof2(1, {1, 0, 1});
    Matrix m = Matrix::identity(f, 2);
    m(0, 0) = 2;
    CHECK_THROWS_AS(PiMatrix(prof2, m), ParameterError);
    const DeltaProfile prof3(1, {2, 0, 2});
    Matrix two = Matrix::identity(f, 4);
    two(0, 2) = 1;
    two(0, 3) = 1;
    CHECK_THROWS_AS(PiMatrix(prof3, two), ParameterError);
    CHECK_THROWS_AS(Permutation({0, 0, 1}), ParameterError);
}

TEST_CASE("weight bound for products with admissible T") {
    Rng rng(29);
    for (int trial = 0; trial < 400; ++trial) {
        const auto f = Field::with_order(trial % 2 ? 8 : 256);
        const int mu = static_cast<int>(rng.below(3));
        const std::size_t n = 2 + rng.below(8);
        const std::size_t t = rng.below(n + 1);
        const auto tt = compose_T(sample_transform(f, n, mu, rng, Fraction{1, 1}));
        const auto e = sample_error(f, 1 + rng.below(12), n, t, mu, rng, Fraction{1, 1});
        CHECK(oracle::product_max_weight(e, tt) <= t);
    }
}
