#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "convmce/bigint.hpp"
#include "convmce/keygen.hpp"

namespace convmce {

// ---------------------------------------------------------------- key space

struct SKeyCount {
    BigInt literal;  // (nu-mu) q^{k^2} prod_j (q^k - q^j), as printed
    BigInt derived;  // q^{k^2 (nu-mu)} prod_j (q^k - q^j): every S_i free for mu < i <= nu
};

SKeyCount count_S_keys(std::uint64_t q, std::uint64_t k, int mu, int nu);

/// |GL_k(F_q)| = prod_{j=0}^{k-1} (q^k - q^j).
BigInt count_invertible(std::uint64_t q, std::uint64_t k);

struct KeyspaceReport {
    double log2_s = 0;          // derived count
    double log2_s_literal = 0;  // as printed; -inf when nu == mu
    double log2_gamma = 0;      // n!
    double log2_delta = 0;      // nonidentity profiles (0 when mu == 0: Δ = I is forced)
    // Mean over profiles of the number of block upper-triangular Π
    // (derived per-block count). Empty when there are too many profiles to
    // enumerate.
    std::optional<double> log2_pi;
    std::optional<double> log2_pi_literal;
    double log2_total = 0;  // log2_s + log2_delta + log2_pi + log2_gamma
    std::vector<std::string> notes;
};

KeyspaceReport keyspace_report(const SchemeParams& params);

// -------------------------------------------------------------- ISD attacks

struct SternParams {
    std::uint32_t p = 0;  // error weight guessed on the information set (even)
    std::uint32_t m = 0;  // zero-window length outside it
};

/// Single-iteration Stern success probability on a [n, k] code with t
/// errors: C(ceil(k/2), p/2) C(floor(k/2), p/2) C(n-k-m, t-p) / C(n, t).
/// p = m = 0 is Prange. Throws ParameterError if p is odd or p > t.
Rational stern_probability(std::int64_t n, std::int64_t k, std::int64_t t, SternParams sp);

/// Stern on the sliding generator matrix of a message of l+1 coefficients:
/// code length N = n(l+mu+nu+1), dimension K = k(l+1).
Rational stern_success_probability(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                                   SternParams sp);

/// C(ceil(K/2), p/2) p m + C(ceil(K/2), p/2) C(floor(K/2), p/2) / 2^m * (p (N-K-m) + 1).
Rational stern_search_time(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                           SternParams sp);

struct AttackReport {
    Rational probability;
    double log2_probability = 0;
    Rational expected_iterations;  // 1 / probability (0 when probability is 0)
    Rational iteration_cost;       // search time
    double log2_work_factor = 0;   // log2(search time / probability); +inf if probability is 0
};

AttackReport stern_attack(std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                          SternParams sp);

// ------------------------------------------------- truncated sliding matrix

struct TruncatedRank {
    std::size_t k_s = 0;  // rank of G'_truc(s)
    std::size_t t_s = 0;  // max errors in the first s+1 coefficients
};

/// Maximum total weight of e_0..e_s under the sliding-window bound. With
/// L = s+1 = a(2mu+1) + b and c = min(n, t) this is
/// a*min(t, (2mu+1)c) + min(t, b*c), which equals
/// t * ceil((s+1)/(2mu+1)) whenever n >= t.
std::size_t max_truncated_errors(std::size_t s, std::size_t t, int mu, std::size_t n);

TruncatedRank truncated_rank(const PublicKey& pk, std::size_t s);

enum class IsdModel : std::uint8_t { Prange, Stern };

struct IsdChoice {
    IsdModel model = IsdModel::Prange;
    SternParams stern;  // used when model == Stern
};

/// P(k, n, t): single-iteration success probability of the chosen ISD model.
/// Prange: C(n-t, k) / C(n, k).
Rational isd_probability(std::int64_t k, std::int64_t n, std::int64_t t, const IsdChoice& model);

/// q^{-(k(s+1) - k_s)} P(k_s, n(s+1), t_s).
Rational truncated_recovery_probability(std::uint64_t q, std::size_t k, std::size_t n, std::size_t s,
                                        const TruncatedRank& tr, const IsdChoice& model);
Rational truncated_recovery_probability(const PublicKey& pk, std::size_t s, const IsdChoice& model);

}  // namespace convmce
