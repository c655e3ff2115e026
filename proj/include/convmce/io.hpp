#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <span>
#include <vector>

#include "convmce/error_channel.hpp"
#include "convmce/keygen.hpp"

namespace convmce {

// Binary layouts are documented in docs/file_formats.md. All multi-byte
// integers are little-endian.

using Bytes = std::vector<std::uint8_t>;

enum class KeyKind : std::uint8_t { Public = 0, Secret = 1 };

inline constexpr std::uint8_t kFormatVersion = 1;

struct KeyFileHeader {
    KeyKind kind = KeyKind::Public;
    std::uint16_t p = 0;
    std::uint8_t m = 0;
    std::vector<std::uint16_t> reduction;  // m+1 coefficients, constant term first
    std::uint16_t n = 0;
    std::uint16_t k = 0;
    std::uint16_t mu = 0;
    std::uint16_t nu = 0;
    std::uint16_t t = 0;
    CodeFamily family = CodeFamily::ReedSolomon;
    Fraction density;
    std::uint64_t seed_fingerprint = 0;

    std::size_t encoded_size() const noexcept { return 4 + 1 + 1 + 2 + 1 + 2 * reduction.size() + 2 * 5 + 1 + 4 + 4 + 8; }
    FieldPtr field() const;
    SchemeParams params() const;

    friend bool operator==(const KeyFileHeader&, const KeyFileHeader&) = default;
};

KeyFileHeader make_key_header(KeyKind kind, const SchemeParams& params, std::size_t t, std::uint64_t seed_fingerprint);

/// Parses and sanity-checks a key file header. Throws FormatError.
KeyFileHeader read_key_header(std::span<const std::uint8_t> bytes);

Bytes encode_public_key(const PublicKey& pk, const KeyFileHeader& header);
Bytes encode_secret_key(const SecretKey& sk, const KeyFileHeader& header);

/// Throw FormatError on any structural problem, including a secret key whose
/// factors do not recompose to an admissible T.
PublicKey decode_public_key(std::span<const std::uint8_t> bytes, KeyFileHeader* header = nullptr);
SecretKey decode_secret_key(std::span<const std::uint8_t> bytes, KeyFileHeader* header = nullptr);

struct CiphertextHeader {
    std::uint64_t ell = 0;  // message degree; l+mu+nu+1 frames follow
    std::uint16_t n = 0;
    std::uint8_t element_bytes = 1;
    std::uint64_t byte_length = 0;  // plaintext length before zero padding

    static constexpr std::size_t kEncodedSize = 4 + 1 + 8 + 2 + 1 + 8;
    friend bool operator==(const CiphertextHeader&, const CiphertextHeader&) = default;
};

Bytes encode_ciphertext_header(const CiphertextHeader& h);
CiphertextHeader decode_ciphertext_header(std::span<const std::uint8_t> bytes);

/// Field elements in wire format (1 byte if q <= 256, else 2 bytes LE).
void append_elements(Bytes& out, std::span<const Elem> v, std::size_t element_bytes);
/// Reads `count` elements; throws FormatError on short input or values >= q.
Vector parse_elements(std::span<const std::uint8_t> bytes, std::size_t count, const Field& field);

/// Whole ciphertext in memory: header followed by y.size() frames.
Bytes encode_ciphertext(const CiphertextHeader& h, const PolyVector& y, const Field& field);

/// Plaintext bytes -> message coefficients. For q >= 256 each byte is one
/// element; for smaller fields each byte must already be an element (< q).
/// The last coefficient is zero padded; an empty input gives one zero
/// coefficient. Throws FormatError.
PolyVector bytes_to_message(std::span<const std::uint8_t> bytes, std::size_t k, const Field& field);
/// Inverse of bytes_to_message, truncated to `byte_length`.
Bytes message_to_bytes(const PolyVector& u, std::uint64_t byte_length);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

/// In-memory counterpart of the `encrypt` command: plaintext bytes to a
/// complete ciphertext file image. Errors come from ErrorSampler driven by
/// `rng`, one coefficient per frame in order.
Bytes encrypt_bytes(const PublicKey& pk, std::span<const std::uint8_t> plaintext, Rng& rng, Fraction error_load);

/// Inverse of encrypt_bytes. Throws FormatError or DecodeFailure; integrity
/// warnings from the decoder are returned through `warnings`.
Bytes decrypt_bytes(const SecretKey& sk, std::span<const std::uint8_t> ciphertext,
                    std::vector<std::string>* warnings = nullptr);

}  // namespace convmce
