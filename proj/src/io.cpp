#include "convmce/io.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "convmce/errors.hpp"
#include "convmce/stream.hpp"

namespace convmce {

namespace {

constexpr char kKeyMagic[4] = {'C', 'M', 'C', 'E'};
constexpr char kCipherMagic[4] = {'C', 'M', 'C', 'T'};

class Writer {
public:
    explicit Writer(Bytes& out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { put(v, 2); }
    void u32(std::uint32_t v) { put(v, 4); }
    void u64(std::uint64_t v) { put(v, 8); }
    void raw(const char* s, std::size_t len) { out_.insert(out_.end(), s, s + len); }
    void elem(Elem v, std::size_t width) { put(v, width); }

private:
    void put(std::uint64_t v, std::size_t width) {
        for (std::size_t i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    Bytes& out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
    std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
    std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
    std::uint64_t u64() { return get(8); }

    Elem elem(const Field& f) {
        const auto v = static_cast<Elem>(get(f.element_bytes()));
        if (!f.contains(v)) throw FormatError("field element " + std::to_string(v) + " out of range at offset " + std::to_string(pos_));
        return v;
    }

    void expect_magic(const char* magic) {
        need(4);
        if (std::memcmp(in_.data() + pos_, magic, 4) != 0) throw FormatError("bad magic bytes");
        pos_ += 4;
    }

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

private:
    void need(std::size_t len) const {
        if (remaining() < len) throw FormatError("unexpected end of data at offset " + std::to_string(pos_));
    }

    std::uint64_t get(std::size_t width) {
        need(width);
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
        pos_ += width;
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

std::uint16_t narrow16(std::size_t v, const char* what) {
    if (v > 0xffff) throw ParameterError(std::string(what) + " does not fit the key format");
    return static_cast<std::uint16_t>(v);
}

void write_header(Writer& w, const KeyFileHeader& h) {
    w.raw(kKeyMagic, 4);
    w.u8(kFormatVersion);
    w.u8(static_cast<std::uint8_t>(h.kind));
    w.u16(h.p);
    w.u8(h.m);
    for (auto c : h.reduction) w.u16(c);
    w.u16(h.n);
    w.u16(h.k);
    w.u16(h.mu);
    w.u16(h.nu);
    w.u16(h.t);
    w.u8(static_cast<std::uint8_t>(h.family));
    w.u32(h.density.num);
    w.u32(h.density.den);
    w.u64(h.seed_fingerprint);
}

KeyFileHeader parse_header(Reader& r) {
    KeyFileHeader h;
    r.expect_magic(kKeyMagic);
    const auto version = r.u8();
    if (version != kFormatVersion) throw FormatError("unsupported key format version " + std::to_string(version));
    const auto kind = r.u8();
    if (kind > 1) throw FormatError("unknown key kind " + std::to_string(kind));
    h.kind = static_cast<KeyKind>(kind);
    h.p = r.u16();
    h.m = r.u8();
    if (h.m == 0 || h.m > 16) throw FormatError("bad field extension degree " + std::to_string(h.m));
    h.reduction.resize(h.m + 1u);
    for (auto& c : h.reduction) c = r.u16();
    h.n = r.u16();
    h.k = r.u16();
    h.mu = r.u16();
    h.nu = r.u16();
    h.t = r.u16();
    const auto family = r.u8();
    if (family > 1) throw FormatError("unknown code family " + std::to_string(family));
    h.family = static_cast<CodeFamily>(family);
    h.density.num = r.u32();
    h.density.den = r.u32();
    h.seed_fingerprint = r.u64();
    return h;
}

// Field and scheme parameters implied by a header, re-validated.
SchemeParams checked_params(const KeyFileHeader& h) {
    try {
        auto params = h.params();
        params.validate();
        if (h.density.den == 0 || h.density.num > h.density.den) throw ParameterError("bad density");
        return params;
    } catch (const ParameterError& e) {
        throw FormatError(std::string("key parameters rejected: ") + e.what());
    }
}

Matrix read_matrix(Reader& r, const FieldPtr& field, std::size_t rows, std::size_t cols) {
    Matrix m(field, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = r.elem(*field);
    return m;
}

void write_matrix(Writer& w, const Matrix& m, std::size_t width) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) w.elem(m(i, j), width);
}

void expect_end(const Reader& r) {
    if (r.remaining() != 0) throw FormatError(std::to_string(r.remaining()) + " trailing bytes");
}

}  // namespace

FieldPtr KeyFileHeader::field() const {
    std::vector<std::uint32_t> red(reduction.begin(), reduction.end());
    try {
        return Field::create(p, m, std::move(red));
    } catch (const ParameterError& e) {
        throw FormatError(std::string("bad field specification: ") + e.what());
    }
}

SchemeParams KeyFileHeader::params() const {
    SchemeParams sp;
    sp.field = field();
    sp.n = n;
    sp.k = k;
    sp.mu = mu;
    sp.nu = nu;
    sp.family = family;
    sp.density = density;
    return sp;
}

KeyFileHeader make_key_header(KeyKind kind, const SchemeParams& params, std::size_t t, std::uint64_t seed_fingerprint) {
    KeyFileHeader h;
    h.kind = kind;
    const auto& f = *params.field;
    h.p = narrow16(f.characteristic(), "characteristic");
    h.m = static_cast<std::uint8_t>(f.degree());
    for (auto c : f.reduction()) h.reduction.push_back(static_cast<std::uint16_t>(c));
    h.n = narrow16(params.n, "n");
    h.k = narrow16(params.k, "k");
    h.mu = narrow16(static_cast<std::size_t>(params.mu), "mu");
    h.nu = narrow16(static_cast<std::size_t>(params.nu), "nu");
    h.t = narrow16(t, "t");
    h.family = params.family;
    h.density = params.density;
    h.seed_fingerprint = seed_fingerprint;
    return h;
}

KeyFileHeader read_key_header(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    return parse_header(r);
}

Bytes encode_public_key(const PublicKey& pk, const KeyFileHeader& header) {
    if (header.kind != KeyKind::Public) throw UsageError("header is not a public key header");
    Bytes out;
    Writer w(out);
    write_header(w, header);
    const auto width = pk.field->element_bytes();
    for (const auto& c : pk.coeffs) write_matrix(w, c, width);
    return out;
}

PublicKey decode_public_key(std::span<const std::uint8_t> bytes, KeyFileHeader* header_out) {
    Reader r(bytes);
    const auto h = parse_header(r);
    if (h.kind != KeyKind::Public) throw FormatError("not a public key file");
    const auto params = checked_params(h);
    PublicKey pk;
    pk.field = params.field;
    pk.n = h.n;
    pk.k = h.k;
    pk.t = h.t;
    pk.mu = h.mu;
    pk.nu = h.nu;
    if (h.t > (h.n - h.k) / 2) throw FormatError("t exceeds the unique decoding radius");
    for (int i = 0; i <= pk.mu + pk.nu; ++i) pk.coeffs.push_back(read_matrix(r, pk.field, pk.k, pk.n));
    expect_end(r);
    if (header_out) *header_out = h;
    return pk;
}

Bytes encode_secret_key(const SecretKey& sk, const KeyFileHeader& header) {
    if (header.kind != KeyKind::Secret) throw UsageError("header is not a secret key header");
    Bytes out;
    Writer w(out);
    write_header(w, header);
    const auto& params = sk.params;
    const auto width = params.field->element_bytes();
    for (int i = params.mu; i <= params.nu; ++i) write_matrix(w, sk.s.coefficient(i), width);
    write_matrix(w, sk.code.generator(), width);
    for (auto v : sk.factors.gamma.image()) w.u16(static_cast<std::uint16_t>(v));
    const auto& delta = sk.factors.delta;
    w.u16(static_cast<std::uint16_t>(delta.mu()));
    for (auto c : delta.counts()) w.u16(narrow16(c, "profile count"));
    const auto& pi = sk.factors.pi.matrix();
    for (std::size_t i = 0; i < pi.rows(); ++i) {
        const auto row = pi.row(i);
        w.u16(narrow16(weight(row), "row weight"));
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] == 0) continue;
            w.u16(static_cast<std::uint16_t>(j));
            w.elem(row[j], width);
        }
    }
    return out;
}

SecretKey decode_secret_key(std::span<const std::uint8_t> bytes, KeyFileHeader* header_out) {
    Reader r(bytes);
    const auto h = parse_header(r);
    if (h.kind != KeyKind::Secret) throw FormatError("not a secret key file");
    const auto params = checked_params(h);
    const auto& field = params.field;
    const std::size_t n = h.n, k = h.k;

    std::vector<Matrix> s_coeffs;
    for (int i = params.mu; i <= params.nu; ++i) s_coeffs.push_back(read_matrix(r, field, k, k));
    const auto g = read_matrix(r, field, k, n);

    std::vector<std::uint32_t> image(n);
    for (auto& v : image) v = r.u16();

    const int radius = r.u16();
    if (radius > params.mu) throw FormatError("profile radius exceeds mu");
    std::vector<std::uint32_t> counts(2 * static_cast<std::size_t>(radius) + 1);
    for (auto& c : counts) c = r.u16();

    Matrix pi(field, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto count = r.u16();
        if (count > n) throw FormatError("row " + std::to_string(i) + " of Pi has too many entries");
        for (std::uint16_t e = 0; e < count; ++e) {
            const auto col = r.u16();
            const auto val = r.elem(*field);
            if (col >= n || val == 0 || pi(i, col) != 0)
                throw FormatError("bad Pi entry in row " + std::to_string(i));
            pi(i, col) = val;
        }
    }
    expect_end(r);

    try {
        DeltaProfile delta(radius, std::move(counts));
        if (delta.n() != n) throw FormatError("profile size does not match n");
        TransformFactors factors{PiMatrix(delta, std::move(pi)), delta, Permutation(std::move(image))};
        SecretKey sk(params, LaurentMatrix(params.mu, std::move(s_coeffs)), std::move(factors));
        if (!(sk.code.generator() == g)) throw FormatError("stored generator does not match the code family");
        if (sk.code.t() != h.t) throw FormatError("stored t does not match the code");
        if (header_out) *header_out = h;
        return sk;
    } catch (const ParameterError& e) {
        throw FormatError(std::string("secret key rejected: ") + e.what());
    } catch (const UsageError& e) {
        throw FormatError(std::string("secret key rejected: ") + e.what());
    }
}

Bytes encode_ciphertext_header(const CiphertextHeader& h) {
    Bytes out;
    Writer w(out);
    w.raw(kCipherMagic, 4);
    w.u8(kFormatVersion);
    w.u64(h.ell);
    w.u16(h.n);
    w.u8(h.element_bytes);
    w.u64(h.byte_length);
    return out;
}

CiphertextHeader decode_ciphertext_header(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    r.expect_magic(kCipherMagic);
    const auto version = r.u8();
    if (version != kFormatVersion) throw FormatError("unsupported ciphertext format version " + std::to_string(version));
    CiphertextHeader h;
    h.ell = r.u64();
    h.n = r.u16();
    h.element_bytes = r.u8();
    if (h.element_bytes != 1 && h.element_bytes != 2) throw FormatError("bad element size");
    h.byte_length = r.u64();
    return h;
}

void append_elements(Bytes& out, std::span<const Elem> v, std::size_t element_bytes) {
    Writer w(out);
    for (auto x : v) w.elem(x, element_bytes);
}

Vector parse_elements(std::span<const std::uint8_t> bytes, std::size_t count, const Field& field) {
    Reader r(bytes);
    Vector v(count);
    for (auto& x : v) x = r.elem(field);
    return v;
}

Bytes encode_ciphertext(const CiphertextHeader& h, const PolyVector& y, const Field& field) {
    auto out = encode_ciphertext_header(h);
    for (const auto& c : y.coeffs) append_elements(out, c, field.element_bytes());
    return out;
}

PolyVector bytes_to_message(std::span<const std::uint8_t> bytes, std::size_t k, const Field& field) {
    const std::size_t frames = bytes.empty() ? 1 : (bytes.size() + k - 1) / k;
    auto u = PolyVector::zeros(k, frames);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        if (!field.contains(bytes[i]))
            throw FormatError("byte " + std::to_string(bytes[i]) + " at offset " + std::to_string(i) + " is not a field element");
        u.coeffs[i / k][i % k] = bytes[i];
    }
    return u;
}

Bytes message_to_bytes(const PolyVector& u, std::uint64_t byte_length) {
    Bytes out;
    out.reserve(byte_length);
    for (const auto& c : u.coeffs)
        for (auto x : c) {
            if (out.size() == byte_length) return out;
            if (x > 0xff) throw FormatError("recovered symbol does not fit a byte");
            out.push_back(static_cast<std::uint8_t>(x));
        }
    if (out.size() != byte_length) throw FormatError("message shorter than the recorded byte length");
    return out;
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("write failed for " + path);
}

Bytes encrypt_bytes(const PublicKey& pk, std::span<const std::uint8_t> plaintext, Rng& rng, Fraction error_load) {
    const auto& field = *pk.field;
    const auto u = bytes_to_message(plaintext, pk.k, field);
    CiphertextHeader h;
    h.ell = u.size() - 1;
    h.n = static_cast<std::uint16_t>(pk.n);
    h.element_bytes = static_cast<std::uint8_t>(field.element_bytes());
    h.byte_length = plaintext.size();
    const auto e = sample_error(pk.field, u.size() + static_cast<std::size_t>(pk.memory()), pk.n, pk.t, pk.mu, rng,
                                error_load);
    return encode_ciphertext(h, encrypt(pk, u, e), field);
}

Bytes decrypt_bytes(const SecretKey& sk, std::span<const std::uint8_t> ciphertext, std::vector<std::string>* warnings) {
    const auto& params = sk.params;
    const auto& field = *params.field;
    const auto h = decode_ciphertext_header(ciphertext);
    if (h.n != params.n || h.element_bytes != field.element_bytes())
        throw FormatError("ciphertext frame shape does not match the key");
    if (h.byte_length > (h.ell + 1) * params.k) throw FormatError("recorded byte length exceeds the frame capacity");
    const std::size_t frame = params.n * field.element_bytes();
    const auto body = ciphertext.subspan(CiphertextHeader::kEncodedSize);
    if (body.size() % frame != 0) throw FormatError("ciphertext ends inside a frame");

    StreamDecryptor dec(sk, h.ell);
    PolyVector u{params.k, {}};
    for (std::size_t off = 0; off < body.size(); off += frame)
        for (auto& v : dec.push(parse_elements(body.subspan(off, frame), params.n, field))) u.coeffs.push_back(std::move(v));
    for (auto& v : dec.finish()) u.coeffs.push_back(std::move(v));
    if (warnings) *warnings = dec.warnings();
    return message_to_bytes(u, h.byte_length);
}

}  // namespace convmce
