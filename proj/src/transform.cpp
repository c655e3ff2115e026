#include "convmce/transform.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

// ---------------------------------------------------------------- DeltaProfile

DeltaProfile::DeltaProfile(int mu, std::vector<std::uint32_t> counts) : mu_(mu), n_(0), counts_(std::move(counts)) {
    if (mu_ < 0) throw ParameterError("profile radius must be nonnegative");
    if (counts_.size() != static_cast<std::size_t>(2 * mu_ + 1)) throw ParameterError("profile needs 2mu+1 counts");
    std::int64_t neg = 0;
    std::int64_t pos = 0;
    for (int e = -mu_; e <= mu_; ++e) {
        const std::uint32_t d = counts_[static_cast<std::size_t>(e + mu_)];
        n_ += d;
        if (e < 0) neg += static_cast<std::int64_t>(-e) * d;
        if (e > 0) pos += static_cast<std::int64_t>(e) * d;
    }
    if (neg != pos) throw ParameterError("profile is not balanced");
    if (n_ == 0) throw ParameterError("profile must cover at least one position");
}

std::uint32_t DeltaProfile::count(int exponent) const noexcept {
    if (exponent < -mu_ || exponent > mu_) return 0;
    return counts_[static_cast<std::size_t>(exponent + mu_)];
}

std::vector<int> DeltaProfile::exponents() const {
    std::vector<int> out;
    out.reserve(n_);
    for (int e = -mu_; e <= mu_; ++e) out.insert(out.end(), count(e), e);
    return out;
}

std::size_t DeltaProfile::block_offset(int exponent) const {
    std::size_t off = 0;
    for (int e = -mu_; e < exponent; ++e) off += count(e);
    return off;
}

LaurentMatrix DeltaProfile::matrix(const FieldPtr& field) const {
    std::vector<Matrix> coeffs;
    std::size_t pos = 0;
    for (int e = -mu_; e <= mu_; ++e) {
        Matrix c(field, n_, n_);
        for (std::uint32_t j = 0; j < count(e); ++j, ++pos) c(pos, pos) = 1;
        coeffs.push_back(std::move(c));
    }
    return LaurentMatrix(-mu_, std::move(coeffs));
}

namespace {

// Multiplicity vectors c[1..mu] (index s-1) with sum s*c_s = r.
void partitions_of(std::int64_t r, int mu, int largest, std::vector<std::uint32_t>& cur,
                   std::vector<std::vector<std::uint32_t>>& out) {
    if (r == 0) {
        out.push_back(cur);
        return;
    }
    if (largest == 0) return;
    for (std::int64_t c = r / largest; c >= 0; --c) {
        cur[static_cast<std::size_t>(largest - 1)] = static_cast<std::uint32_t>(c);
        partitions_of(r - c * largest, mu, largest - 1, cur, out);
    }
    cur[static_cast<std::size_t>(largest - 1)] = 0;
}

std::uint64_t parts(const std::vector<std::uint32_t>& c) {
    return std::accumulate(c.begin(), c.end(), std::uint64_t{0});
}

}  // namespace

std::vector<DeltaProfile> enumerate_profiles(std::size_t n, int mu) {
    std::vector<DeltaProfile> out;
    if (mu <= 0) return out;
    const std::int64_t max_r = static_cast<std::int64_t>(mu) * static_cast<std::int64_t>(n / 2);
    for (std::int64_t r = 1; r <= max_r; ++r) {
        std::vector<std::vector<std::uint32_t>> side;
        std::vector<std::uint32_t> cur(static_cast<std::size_t>(mu), 0);
        partitions_of(r, mu, mu, cur, side);
        for (const auto& neg : side) {
            for (const auto& pos : side) {
                const std::uint64_t used = parts(neg) + parts(pos);
                if (used > n) continue;
                std::vector<std::uint32_t> counts(static_cast<std::size_t>(2 * mu + 1), 0);
                for (int s = 1; s <= mu; ++s) {
                    counts[static_cast<std::size_t>(mu - s)] = neg[static_cast<std::size_t>(s - 1)];
                    counts[static_cast<std::size_t>(mu + s)] = pos[static_cast<std::size_t>(s - 1)];
                }
                counts[static_cast<std::size_t>(mu)] = static_cast<std::uint32_t>(n - used);
                out.emplace_back(mu, std::move(counts));
            }
        }
    }
    return out;
}

DeltaProfile sample_delta(std::size_t n, int mu, Rng& rng) {
    if (mu < 0) throw ParameterError("profile radius must be nonnegative");
    if (n == 0) throw ParameterError("profile size must be positive");
    if (mu == 0) return DeltaProfile::identity(n);
    if (n < 2) throw ParameterError("no nonidentity profile exists for n < 2");

    if (count_delta(n, mu) <= kProfileEnumerationLimit) {
        auto all = enumerate_profiles(n, mu);
        return all[static_cast<std::size_t>(rng.below(all.size()))];
    }

    // Uniform composition of n into 2mu+1 parts via stars and bars,
    // conditioned on balance and nonidentity.
    const std::size_t slots = n + static_cast<std::size_t>(2 * mu);
    std::vector<std::size_t> pool(slots);
    for (;;) {
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (int b = 0; b < 2 * mu; ++b) {
            const std::size_t j = static_cast<std::size_t>(b) + static_cast<std::size_t>(rng.below(slots - static_cast<std::size_t>(b)));
            std::swap(pool[static_cast<std::size_t>(b)], pool[j]);
        }
        std::vector<std::size_t> bars(pool.begin(), pool.begin() + 2 * mu);
        std::sort(bars.begin(), bars.end());
        std::vector<std::uint32_t> counts;
        std::size_t prev = 0;
        for (auto b : bars) {
            counts.push_back(static_cast<std::uint32_t>(b - prev));
            prev = b + 1;
        }
        counts.push_back(static_cast<std::uint32_t>(slots - prev));
        std::int64_t balance = 0;
        for (int e = -mu; e <= mu; ++e) balance += static_cast<std::int64_t>(e) * counts[static_cast<std::size_t>(e + mu)];
        if (balance != 0 || counts[static_cast<std::size_t>(mu)] == n) continue;
        return DeltaProfile(mu, std::move(counts));
    }
}

// ----------------------------------------------------------------- Permutation

Permutation::Permutation(std::vector<std::uint32_t> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (auto v : image_) {
        if (v >= image_.size() || seen[v]) throw ParameterError("not a permutation");
        seen[v] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    return Permutation(std::move(img));
}

Permutation Permutation::random(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> img(n);
    std::iota(img.begin(), img.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(img[i - 1], img[static_cast<std::size_t>(rng.below(i))]);
    return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
    std::vector<std::uint32_t> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = static_cast<std::uint32_t>(i);
    return Permutation(std::move(inv));
}

Matrix Permutation::matrix(const FieldPtr& field) const {
    Matrix m(field, image_.size(), image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) m(i, image_[i]) = 1;
    return m;
}

// -------------------------------------------------------------------- PiMatrix

namespace {

std::vector<std::size_t> block_of_positions(const DeltaProfile& profile) {
    std::vector<std::size_t> block;
    block.reserve(profile.n());
    for (int e = -profile.mu(); e <= profile.mu(); ++e)
        block.insert(block.end(), profile.count(e), static_cast<std::size_t>(e + profile.mu()));
    return block;
}

}  // namespace

PiMatrix::PiMatrix(const DeltaProfile& profile, Matrix m) : m_(std::move(m)) {
    const std::size_t n = profile.n();
    if (m_.rows() != n || m_.cols() != n) throw ParameterError("Pi size does not match the profile");
    const auto block = block_of_positions(profile);
    const std::size_t nblocks = profile.counts().size();
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::uint32_t> per_block(nblocks, 0);
        for (std::size_t c = 0; c < n; ++c) {
            const Elem v = m_(r, c);
            if (block[c] == block[r]) {
                if (v != (r == c ? 1u : 0u)) throw ParameterError("Pi diagonal blocks must be identities");
            } else if (v != 0 && ++per_block[block[c]] > 1) {
                throw ParameterError("Pi off-diagonal block row has more than one nonzero entry");
            }
        }
    }
    if (!is_upper_triangular() && !m_.is_invertible()) throw ParameterError("Pi is singular");
}

PiMatrix PiMatrix::sample(const DeltaProfile& profile, const FieldPtr& field, Rng& rng, Fraction density) {
    const std::size_t n = profile.n();
    Matrix m = Matrix::identity(field, n);
    const int mu = profile.mu();
    const std::uint64_t q = field->order();
    for (int a = -mu; a <= mu; ++a) {
        const std::size_t row0 = profile.block_offset(a);
        for (int b = a + 1; b <= mu; ++b) {
            const std::uint32_t width = profile.count(b);
            if (width == 0) continue;
            const std::size_t col0 = profile.block_offset(b);
            for (std::size_t r = row0; r < row0 + profile.count(a); ++r) {
                if (!rng.bernoulli(density.num, density.den)) continue;
                const std::size_t c = col0 + static_cast<std::size_t>(rng.below(width));
                m(r, c) = static_cast<Elem>(1 + rng.below(q - 1));
            }
        }
    }
    return PiMatrix(profile, std::move(m));
}

bool PiMatrix::is_upper_triangular() const noexcept {
    for (std::size_t r = 0; r < m_.rows(); ++r)
        for (std::size_t c = 0; c < r; ++c)
            if (m_(r, c) != 0) return false;
    return true;
}

Matrix PiMatrix::inverse() const {
    if (!is_upper_triangular()) return *m_.inverse();
    // Unit upper triangular: X_i = e_i - sum_{j > i} Pi_ij X_j, bottom-up.
    const Field& f = *m_.field();
    const std::size_t n = m_.rows();
    Matrix x = Matrix::identity(m_.field(), n);
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Elem a = m_(i, j);
            if (a == 0) continue;
            for (std::size_t c = j; c < n; ++c) x(i, c) = f.sub(x(i, c), f.mul(a, x(j, c)));
        }
    }
    return x;
}

// ------------------------------------------------------------------ T, P = T^-1

TransformFactors sample_transform(const FieldPtr& field, std::size_t n, int mu, Rng& rng, Fraction density) {
    DeltaProfile delta = sample_delta(n, mu, rng);
    PiMatrix pi = PiMatrix::sample(delta, field, rng, density);
    Permutation gamma = Permutation::random(n, rng);
    return {std::move(pi), std::move(delta), std::move(gamma)};
}

LaurentMatrix compose_T(const TransformFactors& f) {
    const std::size_t n = f.delta.n();
    const Matrix& pi = f.pi.matrix();
    if (pi.rows() != n || f.gamma.size() != n) throw UsageError("factor sizes disagree");
    const int mu = f.delta.mu();
    const auto exps = f.delta.exponents();
    std::vector<Matrix> coeffs(static_cast<std::size_t>(2 * mu + 1), Matrix(pi.field(), n, n));
    for (std::size_t c = 0; c < n; ++c) {
        Matrix& t = coeffs[static_cast<std::size_t>(exps[c] + mu)];
        const std::size_t dest = f.gamma.image()[c];
        for (std::size_t r = 0; r < n; ++r) t(r, dest) = pi(r, c);
    }
    return LaurentMatrix(-mu, std::move(coeffs));
}

LaurentMatrix invert_T(const TransformFactors& f) {
    const std::size_t n = f.delta.n();
    const Matrix x = f.pi.inverse();
    const int mu = f.delta.mu();
    const auto exps = f.delta.exponents();
    std::vector<Matrix> coeffs(static_cast<std::size_t>(2 * mu + 1), Matrix(x.field(), n, n));
    for (std::size_t c = 0; c < n; ++c) {
        Matrix& p = coeffs[static_cast<std::size_t>(-exps[c] + mu)];
        const std::size_t dest = f.gamma.image()[c];
        for (std::size_t j = 0; j < n; ++j) p(dest, j) = x(c, j);
    }
    return LaurentMatrix(-mu, std::move(coeffs));
}

namespace {

struct ColumnScan {
    std::vector<TViolation> violations;
    std::vector<int> exponents;
};

ColumnScan scan_columns(const LaurentMatrix& t) {
    ColumnScan out;
    const std::size_t n = t.cols();
    std::vector<std::vector<int>> owners(n);
    int e = t.low_degree();
    for (const auto& c : t.coefficients()) {
        for (std::size_t r = 0; r < t.rows(); ++r)
            if (weight(c.row(r)) > 1)
                out.violations.push_back({TViolation::Kind::RowHasSeveralNonzeros, e, r,
                                          "row " + std::to_string(r) + " of T_" + std::to_string(e) +
                                              " has more than one nonzero entry"});
        for (std::size_t col = 0; col < n; ++col) {
            for (std::size_t r = 0; r < t.rows(); ++r) {
                if (c(r, col) != 0) {
                    owners[col].push_back(e);
                    break;
                }
            }
        }
        ++e;
    }
    out.exponents.assign(n, 0);
    for (std::size_t col = 0; col < n; ++col) {
        if (owners[col].empty()) {
            out.violations.push_back({TViolation::Kind::ColumnUncovered, 0, col,
                                      "column " + std::to_string(col) + " is zero in every T_i"});
        } else if (owners[col].size() > 1) {
            out.violations.push_back({TViolation::Kind::ColumnInSeveralCoeffs, owners[col][1], col,
                                      "column " + std::to_string(col) + " is nonzero in T_" +
                                          std::to_string(owners[col][0]) + " and T_" +
                                          std::to_string(owners[col][1])});
        } else {
            out.exponents[col] = owners[col][0];
        }
    }
    return out;
}

}  // namespace

std::vector<TViolation> validate_T(const LaurentMatrix& t) {
    if (t.rows() != t.cols() || t.rows() == 0)
        return {{TViolation::Kind::NotSquare, 0, 0, "T must be a nonempty square matrix"}};
    ColumnScan scan = scan_columns(t);
    if (!scan.violations.empty()) return std::move(scan.violations);

    std::vector<TViolation> out;
    std::int64_t total = 0;
    for (int e : scan.exponents) total += e;
    if (total != 0)
        out.push_back({TViolation::Kind::DeterminantNotConstant, 0, 0,
                       "determinant has degree " + std::to_string(total) + "; exponent profile is unbalanced"});
    auto rec = recover_factors(t);
    if (!rec || !rec->pi.is_invertible())
        out.push_back({TViolation::Kind::Singular, 0, 0, "constant factor of T is singular"});
    return out;
}

std::optional<RecoveredFactors> recover_factors(const LaurentMatrix& t) {
    if (t.rows() != t.cols() || t.rows() == 0) return std::nullopt;
    ColumnScan scan = scan_columns(t);
    if (!scan.violations.empty()) return std::nullopt;
    const std::size_t n = t.cols();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return scan.exponents[a] < scan.exponents[b]; });
    Matrix pi(t.field(), n, n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t col = order[pos];
        const Matrix c = t.coefficient(scan.exponents[col]);
        for (std::size_t r = 0; r < n; ++r) pi(r, pos) = c(r, col);
    }
    return RecoveredFactors{std::move(pi), std::move(scan.exponents), Permutation(std::move(order))};
}

// -------------------------------------------------------------------- counting

namespace {

// table[r][i] = p(r, i, mu) for 0 <= r, i <= max_r.
std::vector<std::vector<BigInt>> partition_table(std::int64_t max_r, std::int64_t mu) {
    const std::size_t size = static_cast<std::size_t>(max_r + 1);
    std::vector<std::vector<BigInt>> p(size, std::vector<BigInt>(size, 0));
    p[0][0] = 1;
    auto at = [&](std::int64_t r, std::int64_t i) -> BigInt {
        if (r < 0 || i < 0) return 0;
        return p[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
    };
    for (std::int64_t r = 1; r <= max_r; ++r)
        for (std::int64_t i = 1; i <= r; ++i)
            p[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
                at(r - 1, i - 1) + at(r - i, i) - at(r - i - mu, i - 1);
    return p;
}

}  // namespace

BigInt partition_count(std::int64_t r, std::int64_t i, std::int64_t mu) {
    if (r < 0 || i < 0 || mu < 0) return 0;
    if (i > r) return 0;
    return partition_table(r, mu)[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
}

BigInt count_delta(std::size_t n, int mu) {
    if (mu <= 0 || n < 2) return 0;
    const std::int64_t nn = static_cast<std::int64_t>(n);
    const std::int64_t max_r = static_cast<std::int64_t>(mu) * (nn / 2);
    const auto p = partition_table(max_r, mu);
    auto at = [&](std::int64_t r, std::int64_t i) -> const BigInt& {
        return p[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)];
    };
    BigInt total = 0;
    for (std::int64_t r = 1; r <= max_r; ++r) {
        for (std::int64_t i = 1; i <= std::min(r, nn); ++i) {
            if (at(r, i) == 0) continue;
            BigInt inner = 0;
            for (std::int64_t j = 1; j <= std::min(r, nn - i); ++j) inner += at(r, j);
            total += at(r, i) * inner;
        }
    }
    return total;
}

UCount count_U(std::uint64_t rows, std::uint64_t cols, std::uint64_t q) {
    UCount out;
    out.literal = BigInt(q - 1) * big_pow(BigInt(cols + 1), rows);
    out.derived = big_pow(BigInt((q - 1) * cols + 1), rows);
    return out;
}

}  // namespace convmce
