#include "convmce/analysis.hpp"

#include <cmath>
#include <limits>

#include "convmce/errors.hpp"
#include "convmce/transform.hpp"

namespace convmce {

BigInt count_invertible(std::uint64_t q, std::uint64_t k) {
    const BigInt qk = big_pow(BigInt(q), k);
    BigInt r = 1;
    BigInt qj = 1;
    for (std::uint64_t j = 0; j < k; ++j) {
        r *= qk - qj;
        qj *= q;
    }
    return r;
}

SKeyCount count_S_keys(std::uint64_t q, std::uint64_t k, int mu, int nu) {
    if (nu < mu) throw ParameterError("need nu >= mu");
    const std::uint64_t free = static_cast<std::uint64_t>(nu - mu);
    const BigInt gl = count_invertible(q, k);
    SKeyCount out;
    out.literal = BigInt(free) * big_pow(BigInt(q), k * k) * gl;
    out.derived = big_pow(BigInt(q), k * k * free) * gl;
    return out;
}

KeyspaceReport keyspace_report(const SchemeParams& params) {
    params.validate();
    const std::uint64_t q = params.field->order();
    KeyspaceReport rep;

    const auto s = count_S_keys(q, params.k, params.mu, params.nu);
    rep.log2_s = log2_of(s.derived);
    rep.log2_s_literal = log2_of(s.literal);
    if (s.literal != s.derived)
        rep.notes.push_back("S(D) count: literal form (nu-mu)q^{k^2}|GL_k| differs from q^{k^2(nu-mu)}|GL_k|; using the latter");

    rep.log2_gamma = log2_of(factorial(params.n));

    const BigInt ndelta = count_delta(params.n, params.mu);
    rep.log2_delta = params.mu == 0 ? 0.0 : log2_of(ndelta);

    if (params.mu == 0) {
        rep.log2_pi = 0.0;
        rep.log2_pi_literal = 0.0;
    } else if (ndelta <= kProfileEnumerationLimit) {
        BigInt joint = 0;
        BigInt joint_literal = 0;
        for (const auto& prof : enumerate_profiles(params.n, params.mu)) {
            BigInt prod = 1;
            BigInt prod_literal = 1;
            for (int a = -params.mu; a <= params.mu; ++a)
                for (int b = a + 1; b <= params.mu; ++b) {
                    const auto u = count_U(prof.count(a), prof.count(b), q);
                    prod *= u.derived;
                    // Empty blocks contribute a single (empty) matrix.
                    if (prof.count(a) > 0 && prof.count(b) > 0) prod_literal *= u.literal;
                }
            joint += prod;
            joint_literal += prod_literal;
        }
        rep.log2_pi = log2_of(joint) - log2_of(ndelta);
        rep.log2_pi_literal = log2_of(joint_literal) - log2_of(ndelta);
        rep.notes.push_back("U_{i,j} count: literal (q-1)(cols+1)^rows differs from ((q-1)cols+1)^rows; using the latter");
    } else {
        rep.notes.push_back("Pi count omitted: too many Delta profiles to enumerate");
    }

    rep.log2_total = rep.log2_s + rep.log2_delta + rep.log2_pi.value_or(0.0) + rep.log2_gamma;
    return rep;
}

Rational stern_probability(std::int64_t n, std::int64_t k, std::int64_t t, SternParams sp) {
    if (sp.p % 2 != 0) throw ParameterError("Stern weight p must be even");
    if (sp.p > t) throw ParameterError("Stern weight p must not exceed t");
    const std::int64_t half = sp.p / 2;
    const BigInt den = binomial(n, t);
    if (den == 0) return 0;
    const BigInt num = binomial((k + 1) / 2, half) * binomial(k / 2, half) *
                       binomial(n - k - static_cast<std::int64_t>(sp.m), t - sp.p);
    return Rational(num, den);
}

Rational stern_success_probability(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                                   SternParams sp) {
    return stern_probability(n * (ell + mu + nu + 1), k * (ell + 1), t, sp);
}

Rational stern_search_time(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                           SternParams sp) {
    if (sp.p % 2 != 0) throw ParameterError("Stern weight p must be even");
    if (sp.p > t) throw ParameterError("Stern weight p must not exceed t");
    const std::int64_t big_n = n * (ell + mu + nu + 1);
    const std::int64_t big_k = k * (ell + 1);
    const std::int64_t half = sp.p / 2;
    const BigInt list_hi = binomial((big_k + 1) / 2, half);
    const BigInt list_lo = binomial(big_k / 2, half);
    const Rational build = Rational(list_hi * sp.p * sp.m);
    const Rational collisions(list_hi * list_lo, big_pow(BigInt(2), sp.m));
    const BigInt per_collision = BigInt(sp.p) * (big_n - big_k - static_cast<std::int64_t>(sp.m)) + 1;
    return build + collisions * Rational(per_collision);
}

AttackReport stern_attack(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                          SternParams sp) {
    AttackReport r;
    r.probability = stern_success_probability(n, k, ell, mu, nu, t, sp);
    r.iteration_cost = stern_search_time(n, k, ell, mu, nu, t, sp);
    r.log2_probability = log2_of(r.probability);
    if (r.probability == 0) {
        r.expected_iterations = 0;
        r.log2_work_factor = std::numeric_limits<double>::infinity();
    } else {
        r.expected_iterations = 1 / r.probability;
        r.log2_work_factor = log2_of(r.iteration_cost) - r.log2_probability;
    }
    return r;
}

std::size_t max_truncated_errors(std::size_t s, std::size_t t, int mu, std::size_t n) {
    const std::size_t span = static_cast<std::size_t>(2 * mu + 1);
    const std::size_t len = s + 1;
    const std::size_t per_coeff = std::min(n, t);
    return std::min(t, span * per_coeff) * (len / span) + std::min(t, (len % span) * per_coeff);
}

TruncatedRank truncated_rank(const PublicKey& pk, std::size_t s) {
    return {truncated_generator(pk, s).rank(), max_truncated_errors(s, pk.t, pk.mu, pk.n)};
}

Rational isd_probability(std::int64_t k, std::int64_t n, std::int64_t t, const IsdChoice& model) {
    if (model.model == IsdModel::Prange) {
        const BigInt den = binomial(n, k);
        if (den == 0) return 0;
        return Rational(binomial(n - t, k), den);
    }
    return stern_probability(n, k, t, model.stern);
}

Rational truncated_recovery_probability(std::uint64_t q, std::size_t k, std::size_t n, std::size_t s,
                                        const TruncatedRank& tr, const IsdChoice& model) {
    const std::size_t deficit = k * (s + 1) - tr.k_s;
    const Rational prefactor(BigInt(1), big_pow(BigInt(q), deficit));
    return prefactor * isd_probability(static_cast<std::int64_t>(tr.k_s), static_cast<std::int64_t>(n * (s + 1)),
                                       static_cast<std::int64_t>(tr.t_s), model);
}

Rational truncated_recovery_probability(const PublicKey& pk, std::size_t s, const IsdChoice& model) {
    return truncated_recovery_probability(pk.field->order(), pk.k, pk.n, s, truncated_rank(pk, s), model);
}

}  // namespace convmce
