#include "convmce/stream.hpp"

#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

namespace {

// out += v·M, counting the multiplications actually performed.
void mul_add_counted(const Field& f, std::span<const Elem> v, const Matrix& m, std::span<Elem> out,
                     std::uint64_t& mults) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Elem a = v[r];
        if (a == 0) continue;
        const auto row = m.row(r);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out[c] = f.add(out[c], f.mul(a, row[c]));
            ++mults;
        }
    }
}

bool all_zero(std::span<const Elem> v) { return weight(v) == 0; }

}  // namespace

// ------------------------------------------------------------------ encryption

PolyVector encrypt(const PublicKey& pk, const PolyVector& u, const PolyVector& e) {
    if (u.width != pk.k || u.size() == 0) throw UsageError("message must have at least one coefficient of k symbols");
    for (const auto& c : u.coeffs)
        if (c.size() != pk.k) throw UsageError("message coefficient width must be k");
    const std::size_t out_len = u.size() + static_cast<std::size_t>(pk.memory());
    if (e.size() > 0 && e.width != pk.n) throw UsageError("error coefficient width must be n");
    if (e.size() > out_len) throw UsageError("error sequence longer than the ciphertext");
    if (auto bad = validate_error(e, pk.t, pk.mu))
        throw UsageError("error pattern violates the sliding-window bound at window " + std::to_string(*bad));

    StreamEncryptor enc(pk);
    PolyVector y{pk.n, {}};
    y.coeffs.reserve(out_len);
    for (const auto& c : u.coeffs) y.coeffs.push_back(enc.push(c));
    for (auto& c : enc.finish()) y.coeffs.push_back(std::move(c));
    const Field& f = *pk.field;
    for (std::size_t s = 0; s < e.size(); ++s) {
        if (e.coeffs[s].size() != pk.n) throw UsageError("error coefficient width must be n");
        add_into(f, y.coeffs[s], e.coeffs[s]);
    }
    return y;
}

StreamEncryptor::StreamEncryptor(const PublicKey& pk) : pk_(&pk) {}

Vector StreamEncryptor::output(std::span<const Elem> u) {
    // y_s = sum_{i=0}^{mu+nu} u_{s-i} G'_i; history_ holds u_{s-1}, u_{s-2}, ... at back, back-1, ...
    Vector y(pk_->n, 0);
    pk_->coeffs[0].left_mul_add(u, y);
    std::size_t i = 1;
    for (auto it = history_.rbegin(); it != history_.rend(); ++it, ++i) pk_->coeffs[i].left_mul_add(*it, y);
    return y;
}

Vector StreamEncryptor::push(std::span<const Elem> u) {
    if (u.size() != pk_->k) throw UsageError("message coefficient width must be k");
    Vector y = output(u);
    if (pk_->memory() > 0) {
        history_.emplace_back(u.begin(), u.end());
        if (history_.size() > static_cast<std::size_t>(pk_->memory())) history_.pop_front();
    }
    return y;
}

std::vector<Vector> StreamEncryptor::finish() {
    std::vector<Vector> tail;
    const Vector zero(pk_->k, 0);
    for (int i = 0; i < pk_->memory(); ++i) tail.push_back(push(zero));
    history_.clear();
    return tail;
}

// ------------------------------------------------------------------ decryption

StreamDecryptor::StreamDecryptor(const SecretKey& sk, std::optional<std::uint64_t> message_length)
    : sk_(&sk), mu_(sk.params.mu), nu_(sk.params.nu), message_length_(message_length) {
    for (int i = mu_ + 1; i <= nu_; ++i) s_tail_.push_back(sk.s.coefficient(i));
    t_entries_.resize(static_cast<std::size_t>(2 * mu_ + 1));
    for (int i = -mu_; i <= mu_; ++i) {
        const Matrix ti = sk.t.coefficient(i);
        auto& list = t_entries_[static_cast<std::size_t>(i + mu_)];
        for (std::size_t r = 0; r < ti.rows(); ++r)
            for (std::size_t c = 0; c < ti.cols(); ++c)
                if (ti(r, c) != 0)
                    list.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), ti(r, c)});
    }
}

std::vector<Vector> StreamDecryptor::push(std::span<const Elem> y) {
    if (finished_) throw UsageError("stream already finished");
    if (y.size() != sk_->params.n) throw UsageError("ciphertext coefficient width must be n");
    if (message_length_ && received_ >= *message_length_ + static_cast<std::uint64_t>(mu_ + nu_) + 1)
        throw FormatError("more ciphertext coefficients than the framed message length allows");
    window_.emplace_back(y.begin(), y.end());
    if (window_.size() > static_cast<std::size_t>(2 * mu_ + 1)) window_.pop_front();
    ++received_;
    return process(static_cast<std::int64_t>(received_) - 1 - mu_);
}

std::vector<Vector> StreamDecryptor::finish() {
    if (finished_) return {};
    finished_ = true;
    const std::uint64_t min_len = static_cast<std::uint64_t>(mu_ + nu_) + 1;
    if (received_ < min_len) throw FormatError("ciphertext shorter than mu+nu+1 coefficients");
    if (message_length_ && received_ != *message_length_ + min_len)
        throw FormatError("ciphertext truncated: expected " + std::to_string(*message_length_ + min_len) +
                          " coefficients, got " + std::to_string(received_));
    // Remaining windows j = received-mu .. received-1+mu see zeros past the end.
    std::vector<Vector> out;
    const Vector zero(sk_->params.n, 0);
    for (int step = 0; step < 2 * mu_; ++step) {
        window_.push_back(zero);
        if (window_.size() > static_cast<std::size_t>(2 * mu_ + 1)) window_.pop_front();
        auto extra = process(static_cast<std::int64_t>(received_) - mu_ + step);
        for (auto& v : extra) out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vector> StreamDecryptor::process(std::int64_t j) {
    const Field& f = *sk_->params.field;
    const std::size_t n = sk_->params.n;
    const std::size_t k = sk_->params.k;
    last_ = StepCounters{};

    // ŷ_j = sum_{i=-mu}^{mu} y_{j-i} T_i. window_.back() is y_{j+mu}; y_{j-i}
    // sits at offset (mu + i) from the back. Missing entries are times < 0.
    Vector yhat(n, 0);
    const std::int64_t have = static_cast<std::int64_t>(window_.size());
    for (int i = -mu_; i <= mu_; ++i) {
        const std::int64_t back = mu_ + i;
        if (back >= have) continue;
        const Vector& yv = window_[static_cast<std::size_t>(have - 1 - back)];
        for (const auto& ent : t_entries_[static_cast<std::size_t>(i + mu_)]) {
            const Elem a = yv[ent.row];
            if (a == 0) continue;
            yhat[ent.col] = f.add(yhat[ent.col], f.mul(a, ent.value));
            ++last_.window_mults;
        }
    }

    auto decoded = sk_->code.decode(yhat);
    ++last_.decodes;
    if (!decoded) {
        totals_ += last_;
        throw DecodeFailure(j, "block decoder failed; error pattern outside the sliding-window contract");
    }
    if (observer_) observer_(j, yhat, *decoded);

    std::vector<Vector> out;
    const std::int64_t body_end = static_cast<std::int64_t>(received_) - 1 - mu_;  // last message-bearing j while streaming
    if (j < mu_ || (finished_ && j > body_end)) {
        if (!all_zero(decoded->message))
            warnings_.push_back("nonzero message content in message-free window j=" + std::to_string(j));
        totals_ += last_;
        return out;
    }

    // u_m = (û_j - sum_{i=1}^{min(m, nu-mu)} u_{m-i} S_{mu+i}) S_mu^{-1}, m = j - mu.
    const std::int64_t m = j - mu_;
    Vector acc = decoded->message;
    std::size_t i = 1;
    for (auto it = recovered_.rbegin(); it != recovered_.rend(); ++it, ++i) {
        Vector term(k, 0);
        mul_add_counted(f, *it, s_tail_[i - 1], term, last_.backsub_mults);
        for (std::size_t c = 0; c < k; ++c) acc[c] = f.sub(acc[c], term[c]);
    }
    Vector u(k, 0);
    mul_add_counted(f, acc, sk_->s_mu_inverse, u, last_.backsub_mults);

    if (nu_ > mu_) {
        recovered_.push_back(u);
        if (recovered_.size() > static_cast<std::size_t>(nu_ - mu_)) recovered_.pop_front();
    }
    if (message_length_ && static_cast<std::uint64_t>(m) > *message_length_) {
        if (!all_zero(u)) warnings_.push_back("nonzero coefficient past the message end at index " + std::to_string(m));
    } else {
        out.push_back(std::move(u));
        ++emitted_;
    }
    totals_ += last_;
    return out;
}

PolyVector decrypt(const SecretKey& sk, const PolyVector& y, std::vector<std::string>* warnings) {
    const std::size_t overhead = static_cast<std::size_t>(sk.params.mu + sk.params.nu) + 1;
    if (y.size() < overhead) throw FormatError("ciphertext shorter than mu+nu+1 coefficients");
    StreamDecryptor dec(sk, y.size() - overhead);
    PolyVector u{sk.params.k, {}};
    for (const auto& c : y.coeffs)
        for (auto& v : dec.push(c)) u.coeffs.push_back(std::move(v));
    for (auto& v : dec.finish()) u.coeffs.push_back(std::move(v));
    if (warnings) *warnings = dec.warnings();
    return u;
}

}  // namespace convmce
