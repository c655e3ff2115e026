#include <doctest.h>

#include <cmath>

#include "convmce/analysis.hpp"
#include "convmce/errors.hpp"
#include "../oracles.hpp"

using namespace convmce;

namespace {

Rational R(const char* s) { return Rational(s); }

double work_factor(std::int64_t ell, SternParams sp) { return stern_attack(32, 16, ell, 2, 6, 8, sp).log2_work_factor; }

// Rank deficiency of the truncated matrix for an MDS inner code: one
// constraint block per time m in [mu, mu+s] on the columns whose Delta
// exponent is at least m - s.
std::size_t predicted_deficit(const SecretKey& sk, std::size_t s) {
    const auto ex = sk.factors.delta.exponents();
    std::size_t deficit = 0;
    for (int m = sk.params.mu; m <= sk.params.mu + static_cast<int>(s); ++m) {
        std::size_t cols = 0;
        for (int e : ex) cols += e >= m - static_cast<int>(s);
        deficit += cols < sk.params.k ? sk.params.k - cols : 0;
    }
    return deficit;
}

}  // namespace

TEST_CASE("S(D) counts") {
    const auto f2 = Field::with_order(2);
    for (std::uint64_t k = 1; k <= 2; ++k)
        for (int span = 0; span <= 2; ++span) {
            CAPTURE(k);
            CAPTURE(span);
            CHECK(count_S_keys(2, k, 1, 1 + span).derived == oracle::decodable_S(f2, k, span));
        }
    CHECK(count_S_keys(2, 1, 0, 1).derived == 2);
    CHECK(count_S_keys(2, 1, 0, 1).literal == 2);
    CHECK(count_S_keys(2, 1, 0, 3).derived == 8);
    CHECK(count_S_keys(2, 1, 0, 3).literal == 6);
    CHECK(count_S_keys(3, 2, 2, 2).literal == 0);
    CHECK(count_S_keys(3, 2, 2, 2).derived == 48);
    CHECK(count_invertible(2, 3) == 168);
}

TEST_CASE("Stern probability and time") {
    CHECK(stern_success_probability(2, 1, 1, 0, 1, 1, {0, 0}) == R("2/3"));
    CHECK(stern_success_probability(5, 2, 3, 1, 1, 0, {0, 0}) == 1);
    // Prange reduction.
    CHECK(stern_success_probability(7, 3, 2, 1, 3, 2, {0, 0}) == Rational(binomial(49 - 9, 2), binomial(49, 2)));
    // Pinned exact values.
    CHECK(stern_success_probability(32, 16, 128, 2, 6, 8, {4, 16}) == R("708203371121103981312/7184931393584242331363"));
    CHECK(stern_search_time(32, 16, 128, 2, 6, 8, {4, 16}) == R("163176520846641/4096"));
    CHECK(stern_success_probability(32, 16, 0, 2, 6, 8, {2, 2}) == R("47608114960/1555854055613"));
    CHECK(stern_search_time(32, 16, 0, 2, 6, 8, {2, 2}) == 8688);
    CHECK(stern_success_probability(7, 3, 5, 1, 3, 2, {2, 1}) == R("27/805"));
    CHECK(stern_search_time(7, 3, 5, 1, 3, 2, {2, 1}) == R("8379/2"));
    const auto rep = stern_attack(32, 16, 128, 2, 6, 8, {4, 16});
    CHECK(rep.log2_work_factor == doctest::Approx(38.556165578791).epsilon(1e-12));
    CHECK(rep.expected_iterations * rep.probability == 1);
    CHECK(stern_search_time(32, 16, 3, 2, 6, 8, {0, 5}) == R("1/32"));
    CHECK_THROWS_AS(stern_probability(10, 5, 3, {1, 0}), ParameterError);
    CHECK_THROWS_AS(stern_probability(10, 5, 3, {4, 0}), ParameterError);
    CHECK(stern_probability(10, 5, 20, {0, 0}) == 0);
}

TEST_CASE("work factor grows with the message length") {
    for (SternParams sp : {SternParams{0, 0}, {2, 0}, {2, 4}, {2, 8}, {4, 2}, {4, 12}, {6, 10}}) {
        double prev = work_factor(1, sp);
        for (std::int64_t ell = 2; ell <= 64; ++ell) {
            const double cur = work_factor(ell, sp);
            CAPTURE(sp.p);
            CAPTURE(sp.m);
            CAPTURE(ell);
            CHECK(cur >= prev);
            prev = cur;
        }
    }
    // With 2^m far above the list sizes the fixed list-building term makes the
    // curve dip at short messages.
    CHECK(work_factor(2, {4, 16}) < work_factor(1, {4, 16}));
}

TEST_CASE("Prange probability against Monte-Carlo") {
    Rng rng(67);
    struct Case {
        std::int64_t n, k, ell;
        int mu, nu;
        std::int64_t t;
    };
    for (const Case c : {Case{2, 1, 1, 0, 1, 1}, Case{3, 1, 2, 1, 2, 2}, Case{4, 2, 1, 1, 2, 2}}) {
        const auto p = stern_success_probability(c.n, c.k, c.ell, c.mu, c.nu, c.t, {0, 0});
        const auto N = static_cast<std::size_t>(c.n * (c.ell + c.mu + c.nu + 1));
        const auto K = static_cast<std::size_t>(c.k * (c.ell + 1));
        const double expect = static_cast<double>(p);
        const std::size_t trials = 20000;
        const double got = oracle::isd_monte_carlo(N, K, static_cast<std::size_t>(c.t), trials, rng);
        CHECK(std::abs(got - expect) <= 4 * std::sqrt(expect * (1 - expect) / trials));
    }
}

TEST_CASE("t_s closed form against exhaustive maximization") {
    for (int mu = 0; mu <= 2; ++mu)
        for (std::size_t t = 0; t <= 4; ++t)
            for (std::size_t s = 0; s <= 12; ++s)
                for (std::size_t n : {std::size_t{2}, std::size_t{7}}) {
                    CAPTURE(mu);
                    CAPTURE(t);
                    CAPTURE(s);
                    CHECK(max_truncated_errors(s, t, mu, n) == oracle::max_prefix_weight(s, t, mu, n));
                }
}

TEST_CASE("truncated rank") {
    Rng rng(71);
    for (auto params : {SchemeParams::small(), SchemeParams::reference()}) {
        for (int trial = 0; trial < 6; ++trial) {
            const auto kp = keygen(params, rng);
            for (std::size_t s : {0u, 1u, 3u, 5u}) {
                const auto tr = truncated_rank(kp.pub, s);
                const auto m = truncated_generator(kp.pub, s);
                CHECK(tr.k_s == oracle::rank(m));
                CHECK(tr.k_s <= std::min(params.k, params.n) * (s + 1));
                CHECK(params.k * (s + 1) - tr.k_s == predicted_deficit(kp.sec, s));
            }
            // Full rank exactly when d_mu >= k.
            const bool full = kp.sec.factors.delta.count(params.mu) >= params.k;
            CHECK((truncated_rank(kp.pub, 4).k_s == params.k * 5) == full);
        }
    }
    // mu = nu = 0 with trivial masks: G'_truc(s) is block diagonal of full rank.
    auto p0 = SchemeParams::small();
    p0.mu = 0;
    p0.nu = 0;
    const auto kp = keygen(p0, rng);
    for (std::size_t s = 0; s < 4; ++s) {
        CHECK(truncated_rank(kp.pub, s).k_s == p0.k * (s + 1));
        CHECK(truncated_rank(kp.pub, s).t_s == kp.pub.t * (s + 1));
    }
}

TEST_CASE("truncated recovery probability") {
    IsdChoice prange;
    const TruncatedRank full{6, 0};
    CHECK(truncated_recovery_probability(8, 3, 7, 1, full, prange) == 1);
    const TruncatedRank deficient{4, 0};
    CHECK(truncated_recovery_probability(8, 3, 7, 1, deficient, prange) == Rational(1, 64));
    const TruncatedRank some{6, 2};
    CHECK(truncated_recovery_probability(8, 3, 7, 1, some, prange) == Rational(binomial(12, 6), binomial(14, 6)));
    IsdChoice stern{IsdModel::Stern, {2, 1}};
    CHECK(truncated_recovery_probability(8, 3, 7, 1, some, stern) == stern_probability(14, 6, 2, {2, 1}));
    CHECK(isd_probability(4, 10, 0, prange) == 1);
}

TEST_CASE("truncated recovery against a guess-and-check simulation") {
    // n = 2, k = 1, s = 1 with a profile that leaves the top exponent empty:
    // the truncated matrix loses one rank, so an attacker must guess one symbol.
    const auto f = Field::with_order(3);
    SchemeParams params;
    params.field = f;
    params.n = 2;
    params.k = 1;
    params.mu = 2;
    params.nu = 3;
    Rng rng(73);
    const DeltaProfile prof(1, {1, 0, 1});
    TransformFactors fac{PiMatrix::sample(prof, f, rng, {1, 2}), prof, Permutation::random(2, rng)};
    const SecretKey sk(params, sample_S(params, rng), fac);
    const auto pk = derive_public(sk);
    const std::size_t s = 1;
    const auto tr = truncated_rank(pk, s);
    REQUIRE(tr.k_s == 1);
    const auto expect = static_cast<double>(truncated_recovery_probability(pk, s, IsdChoice{}));
    CHECK(expect == doctest::Approx(1.0 / 3));

    const auto m = truncated_generator(pk, s);
    const std::size_t trials = 100000;
    std::size_t wins = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Vector u{static_cast<Elem>(rng.below(3)), static_cast<Elem>(rng.below(3))};
        const auto y = m.left_mul(u);
        // Attacker: every message consistent with y, pick one at random.
        std::vector<Vector> fits;
        for (Elem a = 0; a < 3; ++a)
            for (Elem b = 0; b < 3; ++b)
                if (m.left_mul(Vector{a, b}) == y) fits.push_back({a, b});
        wins += fits[rng.below(fits.size())] == u;
    }
    const double got = static_cast<double>(wins) / trials;
    CHECK(std::abs(got - expect) <= 3 * std::sqrt(expect * (1 - expect) / trials));
}

TEST_CASE("keyspace report") {
    auto p = SchemeParams::small();
    p.n = 2;
    p.k = 1;
    p.mu = 0;
    p.nu = 0;
    auto r = keyspace_report(p);
    CHECK(r.log2_gamma == doctest::Approx(1.0));
    CHECK(r.log2_delta == 0.0);
    p.n = 4;
    p.mu = 1;
    p.nu = 1;
    r = keyspace_report(p);
    CHECK(r.log2_delta == doctest::Approx(1.0));
    const auto ref = keyspace_report(SchemeParams::reference());
    REQUIRE(ref.log2_pi.has_value());
    CHECK(ref.log2_total == doctest::Approx(ref.log2_s + ref.log2_delta + *ref.log2_pi + ref.log2_gamma));
    CHECK(ref.log2_s > ref.log2_s_literal);
    CHECK_FALSE(ref.notes.empty());
}
