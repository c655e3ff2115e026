#include "convmce/error_channel.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "convmce/errors.hpp"

namespace convmce {

std::size_t PolyVector::total_weight() const noexcept {
    std::size_t w = 0;
    for (const auto& c : coeffs) w += weight(c);
    return w;
}

ErrorSampler::ErrorSampler(FieldPtr field, std::size_t n, std::size_t t, int mu, Fraction load)
    : field_(std::move(field)), n_(n), t_(t), window_(static_cast<std::size_t>(2 * std::max(mu, 0))), load_(load) {
    if (mu < 0) throw UsageError("window radius must be nonnegative");
    if (load_.den == 0 || load_.num > load_.den) throw UsageError("error load must be a fraction in [0, 1]");
}

Vector ErrorSampler::next(Rng& rng) {
    Vector e(n_, 0);
    const std::size_t budget = t_ > recent_sum_ ? t_ - recent_sum_ : 0;
    const std::size_t cap = std::min<std::size_t>(n_, static_cast<std::uint64_t>(budget) * load_.num / load_.den);
    std::size_t w = 0;
    if (cap > 0) {
        w = static_cast<std::size_t>(rng.below(cap + 1));
        std::vector<std::size_t> pos(n_);
        std::iota(pos.begin(), pos.end(), std::size_t{0});
        const std::uint64_t q = field_->order();
        for (std::size_t i = 0; i < w; ++i) {
            std::swap(pos[i], pos[i + static_cast<std::size_t>(rng.below(n_ - i))]);
            e[pos[i]] = static_cast<Elem>(1 + rng.below(q - 1));
        }
    }
    if (window_ > 0) {
        recent_.push_back(w);
        recent_sum_ += w;
        if (recent_.size() > window_) {
            recent_sum_ -= recent_.front();
            recent_.pop_front();
        }
    }
    return e;
}

PolyVector sample_error(const FieldPtr& field, std::size_t count, std::size_t n, std::size_t t, int mu, Rng& rng,
                        Fraction load) {
    ErrorSampler sampler(field, n, t, mu, load);
    PolyVector out{n, {}};
    out.coeffs.reserve(count);
    for (std::size_t j = 0; j < count; ++j) out.coeffs.push_back(sampler.next(rng));
    return out;
}

std::optional<std::size_t> validate_error(const PolyVector& e, std::size_t t, int mu) {
    const std::size_t span = static_cast<std::size_t>(2 * std::max(mu, 0) + 1);
    std::vector<std::size_t> w(e.size());
    for (std::size_t j = 0; j < e.size(); ++j) w[j] = weight(e.coeffs[j]);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        // Window [i, i + span) clipped to the sequence.
        if (i == 0) {
            for (std::size_t j = 0; j < std::min(span, w.size()); ++j) sum += w[j];
        } else {
            sum -= w[i - 1];
            if (i + span - 1 < w.size()) sum += w[i + span - 1];
        }
        if (sum > t) return i;
    }
    return std::nullopt;
}

}  // namespace convmce
