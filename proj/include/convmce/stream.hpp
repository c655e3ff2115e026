#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "convmce/error_channel.hpp"
#include "convmce/keygen.hpp"

namespace convmce {

/// y(D) = u(D) G'(D) + e(D). Requires e to satisfy the sliding-window bound
/// for (pk.t, pk.mu) and to have at most l+mu+nu+1 coefficients (l = deg u).
/// Returns l+mu+nu+1 coefficients. Throws UsageError otherwise.
PolyVector encrypt(const PublicKey& pk, const PolyVector& u, const PolyVector& e);

/// Sequential encoder: push u_j, get the codeword part of y_j.
class StreamEncryptor {
public:
    explicit StreamEncryptor(const PublicKey& pk);

    Vector push(std::span<const Elem> u);
    /// The mu+nu trailing coefficients after the last message coefficient.
    std::vector<Vector> finish();

private:
    Vector output(std::span<const Elem> u);

    const PublicKey* pk_;
    std::deque<Vector> history_;  // last mu+nu message coefficients, newest at back
};

/// Field multiplications spent in the last decoding step (or all steps).
struct StepCounters {
    std::uint64_t window_mults = 0;   // forming ŷ_j = sum_i y_{j-i} T_i
    std::uint64_t backsub_mults = 0;  // recovering u_{j-mu} from û_j
    std::uint64_t decodes = 0;        // block decoder invocations

    StepCounters& operator+=(const StepCounters& o) {
        window_mults += o.window_mults;
        backsub_mults += o.backsub_mults;
        decodes += o.decodes;
        return *this;
    }
};

/// Sequential decryption. Each pushed ciphertext coefficient y_r completes
/// the window of ŷ_{r-mu} = sum_{i=-mu}^{mu} y_{r-mu-i} T_i, which is block
/// decoded to û_{r-mu}; once r-mu >= mu the message coefficient u_{r-2mu} is
/// recovered by back-substitution through S_mu^{-1}. Latency is 2mu steps.
///
/// With a known message length l (framed mode) only u_0..u_l are emitted and
/// the remaining recovered coefficients are checked to be zero. Without it,
/// every recoverable coefficient is emitted (the last nu-mu are zero padding).
class StreamDecryptor {
public:
    /// Observer for instrumentation: (j, ŷ_j, decode result of ŷ_j).
    using Observer = std::function<void(std::int64_t, const Vector&, const DecodeResult&)>;

    explicit StreamDecryptor(const SecretKey& sk, std::optional<std::uint64_t> message_length = std::nullopt);

    /// Throws DecodeFailure if ŷ_{r-mu} cannot be decoded, FormatError if more
    /// coefficients arrive than a framed stream allows.
    std::vector<Vector> push(std::span<const Elem> y);

    /// End of stream: decodes the remaining 2mu windows (which carry no message)
    /// and checks framing. Throws FormatError if the stream is too short.
    /// Returns any coefficients still owed to the caller (always empty when
    /// the stream was long enough; kept for symmetry with push).
    std::vector<Vector> finish();

    void set_observer(Observer obs) { observer_ = std::move(obs); }

    const StepCounters& last_step() const noexcept { return last_; }
    const StepCounters& totals() const noexcept { return totals_; }
    /// Integrity warnings: nonzero message content in a window that must be
    /// message-free, or nonzero recovered coefficients past the message end.
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    std::uint64_t received() const noexcept { return received_; }

private:
    struct SparseEntry {
        std::uint32_t row;
        std::uint32_t col;
        Elem value;
    };

    // Compute ŷ_j from the buffered window, decode, and handle the result.
    std::vector<Vector> process(std::int64_t j);

    const SecretKey* sk_;
    int mu_;
    int nu_;
    std::optional<std::uint64_t> message_length_;
    std::vector<std::vector<SparseEntry>> t_entries_;  // index i + mu
    std::vector<Matrix> s_tail_;                       // S_{mu+1} .. S_nu
    std::deque<Vector> window_;                        // last 2mu+1 y's, newest at back
    std::deque<Vector> recovered_;                     // last nu-mu u's, newest at back
    std::uint64_t received_ = 0;
    std::uint64_t emitted_ = 0;
    bool finished_ = false;
    StepCounters last_;
    StepCounters totals_;
    std::vector<std::string> warnings_;
    Observer observer_;
};

/// Drives StreamDecryptor over a whole ciphertext of l+mu+nu+1 coefficients
/// and returns u_0..u_l.
PolyVector decrypt(const SecretKey& sk, const PolyVector& y, std::vector<std::string>* warnings = nullptr);

}  // namespace convmce
