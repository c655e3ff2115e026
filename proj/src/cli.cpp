#include "convmce/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "convmce/errors.hpp"
#include "convmce/io.hpp"
#include "convmce/stream.hpp"

namespace convmce::cli {

namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

std::string fmt_fraction(Fraction f) { return std::to_string(f.num) + "/" + std::to_string(f.den); }

const char* family_name(CodeFamily f) { return f == CodeFamily::ReedSolomon ? "reed-solomon" : "identity-test"; }

void refuse_overwrite(const std::string& path, bool force) {
    if (!force && fs::exists(path)) throw UsageError(path + " exists (use --force to overwrite)");
}

// Maps library exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const DecodeFailure& e) {
        err << "error: decode failure: " << e.what() << '\n';
        return kDecodeFailure;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kFormat;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParameterError& e) {
        err << "error: invalid parameters: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kFormat;
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path);
    return out;
}

void write_elements(std::ostream& os, std::span<const Elem> v, std::size_t width) {
    Bytes buf;
    append_elements(buf, v, width);
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace

FieldPtr FieldSpec::build() const {
    if (p || m || !reduction.empty()) {
        if (q) throw UsageError("give either --q or --p/--m/--reduction, not both");
        if (!p || !m) throw UsageError("--p and --m are required together");
        if (reduction.empty()) {
            const std::uint64_t order = std::uint64_t{1} * *p;
            std::uint64_t qq = 1;
            for (std::uint32_t i = 0; i < *m; ++i) {
                qq *= order;
                if (qq > Field::kMaxOrder) throw ParameterError("field order exceeds 2^16");
            }
            auto f = Field::with_order(static_cast<std::uint32_t>(qq));
            if (f->characteristic() != *p) throw ParameterError("p is not prime");
            return f;
        }
        return Field::create(*p, *m, reduction);
    }
    return Field::with_order(q.value_or(256));
}

SchemeParams ParamOptions::build() const {
    SchemeParams sp;
    sp.field = field.build();
    sp.n = n;
    sp.k = k;
    sp.mu = mu;
    sp.nu = nu;
    sp.family = family;
    sp.density = density;
    if (density.den == 0 || density.num > density.den) throw ParameterError("density must lie in [0, 1]");
    sp.validate();
    return sp;
}

Fraction parse_fraction(const std::string& text) {
    const auto bad = [&] { return UsageError("cannot parse fraction '" + text + "'"); };
    const auto to_u32 = [&](const std::string& s) {
        if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
        return static_cast<std::uint32_t>(std::stoul(s));
    };
    Fraction f;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        f = {to_u32(text.substr(0, slash)), to_u32(text.substr(slash + 1))};
    } else if (const auto dot = text.find('.'); dot != std::string::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.size() > 6) throw bad();
        std::uint32_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        f = {(whole.empty() ? 0 : to_u32(whole)) * den + (frac.empty() ? 0 : to_u32(frac)), den};
    } else {
        f = {to_u32(text), 1};
    }
    if (f.den == 0 || f.num > f.den) throw UsageError("fraction '" + text + "' is not in [0, 1]");
    return f;
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed, bool* from_entropy) {
    if (from_entropy) *from_entropy = false;
    if (seed) return *seed;
    if (const char* env = std::getenv("CMCE_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used, 0);
            if (env[used] != '\0') throw UsageError("");
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("CMCE_SEED is not an integer: ") + env);
        }
    }
    if (from_entropy) *from_entropy = true;
    std::random_device rd;
    return (std::uint64_t{rd()} << 32) ^ rd();
}

int cmd_keygen(const KeygenOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto params = opt.params.build();
        const auto pk_path = opt.out_prefix + ".pk";
        const auto sk_path = opt.out_prefix + ".sk";
        refuse_overwrite(pk_path, opt.force);
        refuse_overwrite(sk_path, opt.force);

        bool entropy = false;
        const auto seed = resolve_seed(opt.seed, &entropy);
        Rng rng(seed);
        const auto keys = keygen(params, rng);
        const auto fp = mix64(seed);
        write_file(pk_path, encode_public_key(keys.pub, make_key_header(KeyKind::Public, params, keys.pub.t, fp)));
        write_file(sk_path, encode_secret_key(keys.sec, make_key_header(KeyKind::Secret, params, keys.pub.t, fp)));
        out << "wrote " << pk_path << " and " << sk_path << '\n';
        if (entropy) out << "seed " << seed << '\n';
        return int{kOk};
    });
}

namespace {

void encrypt_stream(const PublicKey& pk, std::istream& in, std::ofstream& os, const CiphertextHeader& ch, std::uint64_t seed,
                    Fraction load) {
    const auto& field = *pk.field;
    const std::uint64_t frames = ch.ell + 1;
    const auto head = encode_ciphertext_header(ch);
    os.write(reinterpret_cast<const char*>(head.data()), static_cast<std::streamsize>(head.size()));

    StreamEncryptor enc(pk);
    ErrorSampler errors(pk.field, pk.n, pk.t, pk.mu, load);
    Rng rng(seed);
    std::vector<std::uint8_t> buf(pk.k);
    Vector u(pk.k);
    std::uint64_t offset = 0;
    const auto emit = [&](Vector c) {
        add_into(field, c, errors.next(rng));
        write_elements(os, c, field.element_bytes());
    };
    for (std::uint64_t j = 0; j < frames; ++j) {
        std::fill(buf.begin(), buf.end(), 0);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pk.k));
        for (std::size_t i = 0; i < pk.k; ++i) {
            if (!field.contains(buf[i]))
                throw FormatError("byte at offset " + std::to_string(offset + i) + " is not a field element");
            u[i] = buf[i];
        }
        offset += pk.k;
        emit(enc.push(u));
    }
    for (auto& c : enc.finish()) emit(std::move(c));
    if (!os) throw FormatError("write failed");
}

}  // namespace

int cmd_encrypt(const EncryptOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        KeyFileHeader hdr;
        const auto pk = decode_public_key(read_file(opt.public_key), &hdr);
        const auto& field = *pk.field;
        if (opt.error_load.den == 0 || opt.error_load.num > opt.error_load.den)
            throw UsageError("error load must lie in [0, 1]");
        refuse_overwrite(opt.output, opt.force);

        std::ifstream in(opt.input, std::ios::binary);
        if (!in) throw FormatError("cannot open " + opt.input);
        const std::uint64_t length = fs::file_size(opt.input);
        const std::uint64_t frames = length == 0 ? 1 : (length + pk.k - 1) / pk.k;

        CiphertextHeader ch;
        ch.ell = frames - 1;
        ch.n = static_cast<std::uint16_t>(pk.n);
        ch.element_bytes = static_cast<std::uint8_t>(field.element_bytes());
        ch.byte_length = length;

        auto os = open_output(opt.output);
        try {
            encrypt_stream(pk, in, os, ch, resolve_seed(opt.error_seed), opt.error_load);
        } catch (...) {
            os.close();
            std::error_code ec;
            fs::remove(opt.output, ec);
            throw;
        }
        out << "encrypted " << length << " bytes into " << frames + pk.memory() << " frames\n";
        return int{kOk};
    });
}

int cmd_decrypt(const DecryptOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto sk = decode_secret_key(read_file(opt.secret_key));
        const auto& params = sk.params;
        const auto& field = *params.field;
        refuse_overwrite(opt.output, opt.force);

        std::ifstream in(opt.input, std::ios::binary);
        if (!in) throw FormatError("cannot open " + opt.input);
        Bytes head(CiphertextHeader::kEncodedSize);
        in.read(reinterpret_cast<char*>(head.data()), static_cast<std::streamsize>(head.size()));
        head.resize(static_cast<std::size_t>(in.gcount()));
        const auto ch = decode_ciphertext_header(head);
        if (ch.n != params.n || ch.element_bytes != field.element_bytes())
            throw FormatError("ciphertext frame shape does not match the key");
        const std::uint64_t capacity = (ch.ell + 1) * params.k;
        if (ch.byte_length > capacity || (ch.ell > 0 && ch.byte_length + params.k <= capacity))
            throw FormatError("recorded byte length is inconsistent with the frame count");

        auto os = open_output(opt.output);
        StreamDecryptor dec(sk, ch.ell);
        std::uint64_t written = 0;
        const auto sink = [&](const std::vector<Vector>& us) {
            for (const auto& u : us)
                for (auto x : u) {
                    if (written == ch.byte_length) break;
                    if (x > 0xff) throw FormatError("recovered symbol does not fit a byte");
                    os.put(static_cast<char>(x));
                    ++written;
                }
            os.flush();
        };

        const std::size_t frame_bytes = params.n * field.element_bytes();
        Bytes frame(frame_bytes);
        while (true) {
            in.read(reinterpret_cast<char*>(frame.data()), static_cast<std::streamsize>(frame_bytes));
            const auto got = static_cast<std::size_t>(in.gcount());
            if (got == 0) break;
            if (got != frame_bytes)
                throw FormatError("truncated frame " + std::to_string(dec.received()) + " (" + std::to_string(got) + " of " +
                                  std::to_string(frame_bytes) + " bytes)");
            sink(dec.push(parse_elements(frame, params.n, field)));
        }
        sink(dec.finish());
        if (!dec.warnings().empty()) {
            for (const auto& w : dec.warnings()) err << "warning: " << w << '\n';
            err << "error: integrity check failed\n";
            return int{kDecodeFailure};
        }
        out << "decrypted " << written << " bytes from " << dec.received() << " frames\n";
        return int{kOk};
    });
}

std::vector<std::pair<std::string, std::string>> analyze_report(const PublicKey& pk, const SchemeParams& params,
                                                                const AnalyzeOptions& opt) {
    std::vector<std::pair<std::string, std::string>> kv;
    const auto put = [&](std::string key, std::string value) { kv.emplace_back(std::move(key), std::move(value)); };
    const auto put_log = [&](std::string key, std::optional<double> v) {
        put(std::move(key), v ? fmt_double(*v) : std::string("n/a"));
    };

    put("params.field", params.field->describe());
    put("params.q", std::to_string(params.field->order()));
    put("params.n", std::to_string(params.n));
    put("params.k", std::to_string(params.k));
    put("params.t", std::to_string(pk.t));
    put("params.mu", std::to_string(params.mu));
    put("params.nu", std::to_string(params.nu));
    put("params.family", family_name(params.family));
    put("params.density", fmt_fraction(params.density));

    const auto ks = keyspace_report(params);
    put_log("keyspace.log2_s", ks.log2_s);
    put_log("keyspace.log2_s_literal", ks.log2_s_literal);
    put_log("keyspace.log2_delta", ks.log2_delta);
    put_log("keyspace.log2_pi", ks.log2_pi);
    put_log("keyspace.log2_pi_literal", ks.log2_pi_literal);
    put_log("keyspace.log2_gamma", ks.log2_gamma);
    put_log("keyspace.log2_total", ks.log2_total);
    for (std::size_t i = 0; i < ks.notes.size(); ++i) put("keyspace.note" + std::to_string(i), ks.notes[i]);

    const auto n = static_cast<std::int64_t>(params.n);
    const auto k = static_cast<std::int64_t>(params.k);
    const auto ell = static_cast<std::int64_t>(opt.ell);
    const auto t = static_cast<std::int64_t>(pk.t);
    const auto attack = stern_attack(n, k, ell, params.mu, params.nu, t, opt.stern);
    put("stern.p", std::to_string(opt.stern.p));
    put("stern.m", std::to_string(opt.stern.m));
    put("stern.ell", std::to_string(opt.ell));
    put("stern.code_length", std::to_string(n * (ell + params.mu + params.nu + 1)));
    put("stern.code_dimension", std::to_string(k * (ell + 1)));
    put("stern.probability", fmt_rational(attack.probability));
    put_log("stern.log2_probability", attack.log2_probability);
    put_log("stern.log2_iteration_cost", log2_of(attack.iteration_cost));
    put_log("stern.log2_work_factor", attack.log2_work_factor);

    IsdChoice choice{opt.model, opt.stern};
    put("truncated.model", opt.model == IsdModel::Prange ? "prange" : "stern");
    for (auto s : opt.truncations) {
        const auto prefix = "truncated.s" + std::to_string(s) + ".";
        const auto tr = truncated_rank(pk, s);
        const auto full = params.k * (s + 1);
        put(prefix + "rows", std::to_string(full));
        put(prefix + "k_s", std::to_string(tr.k_s));
        put(prefix + "t_s", std::to_string(tr.t_s));
        put(prefix + "rank_deficit", std::to_string(full - tr.k_s));
        put_log(prefix + "log2_recovery_probability",
                log2_of(truncated_recovery_probability(params.field->order(), params.k, params.n, s, tr, choice)));
    }
    return kv;
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        SchemeParams params;
        PublicKey pk;
        if (opt.public_key) {
            KeyFileHeader hdr;
            pk = decode_public_key(read_file(*opt.public_key), &hdr);
            params = hdr.params();
        } else {
            params = opt.params.build();
            if (!opt.truncations.empty()) {
                Rng rng(resolve_seed(opt.seed));
                pk = keygen(params, rng).pub;
            } else {
                pk.field = params.field;
                pk.n = params.n;
                pk.k = params.k;
                pk.t = BlockCode::make(params.family, params.field, params.n, params.k).t();
                pk.mu = params.mu;
                pk.nu = params.nu;
            }
        }
        const auto kv = analyze_report(pk, params, opt);
        if (opt.format == ReportFormat::KeyValue) {
            for (const auto& [key, value] : kv) out << key << '=' << value << '\n';
        } else {
            std::string section;
            for (const auto& [key, value] : kv) {
                const auto dot = key.find('.');
                const auto sec = key.substr(0, dot);
                if (sec != section) {
                    if (!section.empty()) out << '\n';
                    out << sec << '\n';
                    section = sec;
                }
                char line[96];
                std::snprintf(line, sizeof line, "  %-36s ", key.substr(dot + 1).c_str());
                out << line << value << '\n';
            }
        }
        return int{kOk};
    });
}

int cmd_inspect(const InspectOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto bytes = read_file(opt.path);
        if (bytes.size() >= 4 && std::equal(bytes.begin(), bytes.begin() + 4, "CMCT")) {
            const auto ch = decode_ciphertext_header(bytes);
            const std::size_t frame = std::size_t{ch.n} * ch.element_bytes;
            const std::size_t body = bytes.size() - CiphertextHeader::kEncodedSize;
            out << "kind          ciphertext\n"
                << "ell           " << ch.ell << '\n'
                << "n             " << ch.n << '\n'
                << "element_bytes " << int{ch.element_bytes} << '\n'
                << "byte_length   " << ch.byte_length << '\n'
                << "frames        " << body / frame << (body % frame ? " (+ partial frame)" : "") << '\n';
            if (body % frame != 0 || body / frame <= ch.ell)
                throw FormatError("ciphertext body holds fewer complete frames than ell+1");
            out << "overhead      " << body / frame - ch.ell - 1 << " (mu+nu)\n"
                << "status        valid\n";
            return int{kOk};
        }
        const auto h = read_key_header(bytes);
        const auto params = h.params();
        out << "kind          " << (h.kind == KeyKind::Public ? "public" : "secret") << " key\n"
            << "field         " << params.field->describe() << '\n'
            << "n             " << h.n << '\n'
            << "k             " << h.k << '\n'
            << "t             " << h.t << '\n'
            << "mu            " << h.mu << '\n'
            << "nu            " << h.nu << '\n'
            << "family        " << family_name(h.family) << '\n'
            << "density       " << fmt_fraction(h.density) << '\n';
        char fp[32];
        std::snprintf(fp, sizeof fp, "%016llx", static_cast<unsigned long long>(h.seed_fingerprint));
        out << "fingerprint   " << fp << '\n'
            << "header_bytes  " << h.encoded_size() << '\n'
            << "payload_bytes " << bytes.size() - h.encoded_size() << '\n';
        if (h.kind == KeyKind::Public) {
            decode_public_key(bytes);
        } else {
            const auto sk = decode_secret_key(bytes);
            out << "profile       ";
            for (auto c : sk.factors.delta.counts()) out << c << ' ';
            out << "(exponents " << -sk.factors.delta.mu() << ".." << sk.factors.delta.mu() << ")\n";
        }
        out << "status        valid\n";
        return int{kOk};
    });
}

}  // namespace convmce::cli
