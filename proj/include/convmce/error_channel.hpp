#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

#include "convmce/matrix.hpp"
#include "convmce/rng.hpp"

namespace convmce {

/// A polynomial vector v(D) = v_0 + v_1 D + ... stored as its coefficient
/// vectors, each of `width` symbols. Messages, errors and ciphertexts all
/// start at time 0.
struct PolyVector {
    std::size_t width = 0;
    std::vector<Vector> coeffs;

    static PolyVector zeros(std::size_t width, std::size_t count) { return {width, std::vector<Vector>(count, Vector(width, 0))}; }

    std::size_t size() const noexcept { return coeffs.size(); }
    /// Coefficient j, or zeros past the end.
    Vector at(std::size_t j) const { return j < coeffs.size() ? coeffs[j] : Vector(width, 0); }
    std::size_t total_weight() const noexcept;

    friend bool operator==(const PolyVector&, const PolyVector&) = default;
};

/// Streaming form of the greedy sliding-window sampler. At each step the
/// budget is t minus the weight already spent in the previous 2μ
/// coefficients; the step weight is uniform in [0, floor(load * budget)] and
/// is placed at distinct uniform positions with uniform nonzero values.
class ErrorSampler {
public:
    ErrorSampler(FieldPtr field, std::size_t n, std::size_t t, int mu, Fraction load);

    Vector next(Rng& rng);

private:
    FieldPtr field_;
    std::size_t n_;
    std::size_t t_;
    std::size_t window_;  // 2μ previous coefficients
    Fraction load_;
    std::deque<std::size_t> recent_;
    std::size_t recent_sum_ = 0;
};

/// `count` coefficients e_0 ... e_{count-1} drawn by ErrorSampler.
PolyVector sample_error(const FieldPtr& field, std::size_t count, std::size_t n, std::size_t t, int mu, Rng& rng,
                        Fraction load);

/// Start index of the first window of 2μ+1 consecutive coefficients whose
/// total weight exceeds t, or nullopt if every window (including the
/// shortened windows at the end) satisfies the bound.
std::optional<std::size_t> validate_error(const PolyVector& e, std::size_t t, int mu);

}  // namespace convmce
