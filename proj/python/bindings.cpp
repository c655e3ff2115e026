#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "convmce/analysis.hpp"
#include "convmce/errors.hpp"
#include "convmce/io.hpp"
#include "convmce/keygen.hpp"
#include "convmce/stream.hpp"

namespace py = pybind11;
using namespace convmce;

namespace {

using Rows = std::vector<std::vector<Elem>>;

PolyVector to_poly(const Rows& rows, std::size_t width) {
    PolyVector v{width, {}};
    for (const auto& r : rows) {
        if (r.size() != width) throw UsageError("coefficient has " + std::to_string(r.size()) + " symbols, expected " +
                                                std::to_string(width));
        v.coeffs.push_back(r);
    }
    return v;
}

Rows to_rows(const Matrix& m) {
    Rows out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
    return out;
}

py::int_ to_py(const BigInt& x) { return py::int_(py::str(x.str())); }

std::string rational_str(const Rational& r) { return numerator(r).str() + "/" + denominator(r).str(); }

py::bytes to_py(const Bytes& b) { return py::bytes(reinterpret_cast<const char*>(b.data()), b.size()); }

Bytes from_py(const py::bytes& b) {
    const std::string s = b;
    return Bytes(s.begin(), s.end());
}

SchemeParams params_of(const PublicKey& pk, CodeFamily family, Fraction density) {
    SchemeParams p;
    p.field = pk.field;
    p.n = pk.n;
    p.k = pk.k;
    p.mu = pk.mu;
    p.nu = pk.nu;
    p.family = family;
    p.density = density;
    return p;
}

}  // namespace

PYBIND11_MODULE(_convmce, m) {
    m.doc() = "Convolutional McEliece core bindings";

    static py::exception<UsageError> usage_exc(m, "UsageError", PyExc_ValueError);
    static py::exception<ParameterError> param_exc(m, "ParameterError", PyExc_ValueError);
    static py::exception<FormatError> format_exc(m, "FormatError", PyExc_RuntimeError);
    static py::exception<DecodeFailure> decode_exc(m, "DecodeFailure", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DecodeFailure& e) {
            decode_exc(e.what());
        } catch (const FormatError& e) {
            format_exc(e.what());
        } catch (const ParameterError& e) {
            param_exc(e.what());
        } catch (const UsageError& e) {
            usage_exc(e.what());
        }
    });

    py::class_<Field, std::shared_ptr<Field>>(m, "Field")
        .def_static("with_order", [](std::uint32_t q) { return std::const_pointer_cast<Field>(Field::with_order(q)); })
        .def_static("create", [](std::uint32_t p, std::uint32_t deg, std::vector<std::uint32_t> red) {
            return std::const_pointer_cast<Field>(Field::create(p, deg, std::move(red)));
        })
        .def_property_readonly("order", &Field::order)
        .def_property_readonly("characteristic", &Field::characteristic)
        .def_property_readonly("degree", &Field::degree)
        .def_property_readonly("reduction", &Field::reduction)
        .def("add", &Field::add)
        .def("mul", &Field::mul)
        .def("inv", &Field::inv)
        .def("__repr__", &Field::describe);

    py::class_<SchemeParams>(m, "SchemeParams")
        .def(py::init([](std::uint32_t q, std::size_t n, std::size_t k, int mu, int nu, std::pair<std::uint32_t, std::uint32_t> density,
                         bool identity_code) {
                 SchemeParams p;
                 p.field = Field::with_order(q);
                 p.n = n;
                 p.k = k;
                 p.mu = mu;
                 p.nu = nu;
                 p.density = {density.first, density.second};
                 p.family = identity_code ? CodeFamily::IdentityTest : CodeFamily::ReedSolomon;
                 p.validate();
                 return p;
             }),
             py::arg("q"), py::arg("n"), py::arg("k"), py::arg("mu"), py::arg("nu"),
             py::arg("density") = std::make_pair(1u, 2u), py::arg("identity_code") = false)
        .def_static("reference", &SchemeParams::reference)
        .def_static("small", &SchemeParams::small)
        .def_property_readonly("q", [](const SchemeParams& p) { return p.field->order(); })
        .def_readonly("n", &SchemeParams::n)
        .def_readonly("k", &SchemeParams::k)
        .def_readonly("mu", &SchemeParams::mu)
        .def_readonly("nu", &SchemeParams::nu);

    py::class_<PublicKey>(m, "PublicKey")
        .def_readonly("n", &PublicKey::n)
        .def_readonly("k", &PublicKey::k)
        .def_readonly("t", &PublicKey::t)
        .def_readonly("mu", &PublicKey::mu)
        .def_readonly("nu", &PublicKey::nu)
        .def_property_readonly("coefficients",
                               [](const PublicKey& pk) {
                                   std::vector<Rows> out;
                                   for (const auto& c : pk.coeffs) out.push_back(to_rows(c));
                                   return out;
                               })
        .def(
            "to_bytes",
            [](const PublicKey& pk, const SchemeParams& params, std::uint64_t fingerprint) {
                return to_py(encode_public_key(
                    pk, make_key_header(KeyKind::Public, params_of(pk, params.family, params.density), pk.t, fingerprint)));
            },
            py::arg("params"), py::arg("fingerprint") = 0)
        .def_static("from_bytes", [](const py::bytes& b) { return decode_public_key(from_py(b)); })
        .def("__eq__", [](const PublicKey& a, const PublicKey& b) { return a == b; });

    py::class_<SecretKey>(m, "SecretKey")
        .def_readonly("params", &SecretKey::params)
        .def_property_readonly("t", &SecretKey::t_errors)
        .def_property_readonly("profile", [](const SecretKey& sk) { return sk.factors.delta.counts(); })
        .def_property_readonly("permutation", [](const SecretKey& sk) { return sk.factors.gamma.image(); })
        .def("public_key", &derive_public)
        .def(
            "to_bytes",
            [](const SecretKey& sk, std::uint64_t fingerprint) {
                return to_py(encode_secret_key(sk, make_key_header(KeyKind::Secret, sk.params, sk.t_errors(), fingerprint)));
            },
            py::arg("fingerprint") = 0)
        .def_static("from_bytes", [](const py::bytes& b) { return decode_secret_key(from_py(b)); })
        .def("__eq__", [](const SecretKey& a, const SecretKey& b) { return a == b; });

    m.def(
        "keygen",
        [](const SchemeParams& params, std::uint64_t seed) {
            Rng rng(seed);
            auto kp = keygen(params, rng);
            return py::make_tuple(std::move(kp.pub), std::move(kp.sec));
        },
        py::arg("params"), py::arg("seed"));

    m.def(
        "sample_error",
        [](const PublicKey& pk, std::size_t count, std::uint64_t seed, std::pair<std::uint32_t, std::uint32_t> load) {
            Rng rng(seed);
            return sample_error(pk.field, count, pk.n, pk.t, pk.mu, rng, {load.first, load.second}).coeffs;
        },
        py::arg("pk"), py::arg("count"), py::arg("seed"), py::arg("load") = std::make_pair(1u, 1u));

    m.def(
        "validate_error",
        [](const Rows& e, std::size_t t, int mu) {
            return validate_error(to_poly(e, e.empty() ? 0 : e.front().size()), t, mu);
        },
        "Index of the first window whose weight exceeds t, or None.");

    m.def("encrypt", [](const PublicKey& pk, const Rows& u, const Rows& e) {
        return encrypt(pk, to_poly(u, pk.k), to_poly(e, pk.n)).coeffs;
    });
    m.def("decrypt", [](const SecretKey& sk, const Rows& y) { return decrypt(sk, to_poly(y, sk.params.n)).coeffs; });

    m.def(
        "encrypt_bytes",
        [](const PublicKey& pk, const py::bytes& data, std::uint64_t seed, std::pair<std::uint32_t, std::uint32_t> load) {
            Rng rng(seed);
            return to_py(encrypt_bytes(pk, from_py(data), rng, {load.first, load.second}));
        },
        py::arg("pk"), py::arg("data"), py::arg("seed"), py::arg("load") = std::make_pair(1u, 1u));
    m.def("decrypt_bytes", [](const SecretKey& sk, const py::bytes& data) {
        std::vector<std::string> warnings;
        auto out = decrypt_bytes(sk, from_py(data), &warnings);
        if (!warnings.empty()) throw DecodeFailure(-1, "integrity check failed: " + warnings.front());
        return to_py(out);
    });

    m.def("partition_count", [](std::int64_t r, std::int64_t i, std::int64_t mu) { return to_py(partition_count(r, i, mu)); });
    m.def("count_delta", [](std::size_t n, int mu) { return to_py(count_delta(n, mu)); });
    m.def("count_s_keys", [](std::uint64_t q, std::uint64_t k, int mu, int nu) {
        const auto c = count_S_keys(q, k, mu, nu);
        return py::make_tuple(to_py(c.literal), to_py(c.derived));
    });
    m.def("keyspace_report", [](const SchemeParams& params) {
        const auto r = keyspace_report(params);
        py::dict d;
        d["log2_s"] = r.log2_s;
        d["log2_s_literal"] = r.log2_s_literal;
        d["log2_gamma"] = r.log2_gamma;
        d["log2_delta"] = r.log2_delta;
        d["log2_pi"] = r.log2_pi;
        d["log2_pi_literal"] = r.log2_pi_literal;
        d["log2_total"] = r.log2_total;
        d["notes"] = r.notes;
        return d;
    });

    m.def("_stern_success_probability", [](std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                                            std::uint32_t p, std::uint32_t mm) {
        return rational_str(stern_success_probability(n, k, ell, mu, nu, t, {p, mm}));
    });
    m.def("_stern_search_time", [](std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                                   std::uint32_t p, std::uint32_t mm) {
        return rational_str(stern_search_time(n, k, ell, mu, nu, t, {p, mm}));
    });
    m.def("_stern_attack", [](std::int64_t n, std::int64_t k, std::int64_t ell, int mu, int nu, std::int64_t t,
                              std::uint32_t p, std::uint32_t mm) {
        const auto r = stern_attack(n, k, ell, mu, nu, t, {p, mm});
        py::dict d;
        d["probability"] = rational_str(r.probability);
        d["iteration_cost"] = rational_str(r.iteration_cost);
        d["log2_probability"] = r.log2_probability;
        d["log2_work_factor"] = r.log2_work_factor;
        return d;
    });

    m.def("max_truncated_errors", &max_truncated_errors);
    m.def("truncated_rank", [](const PublicKey& pk, std::size_t s) {
        const auto r = truncated_rank(pk, s);
        return py::make_tuple(r.k_s, r.t_s);
    });
    m.def("_truncated_recovery_probability",
          [](const PublicKey& pk, std::size_t s, const std::string& model, std::uint32_t p, std::uint32_t mm) {
              IsdChoice c;
              if (model == "stern")
                  c = {IsdModel::Stern, {p, mm}};
              else if (model != "prange")
                  throw UsageError("model must be 'prange' or 'stern'");
              return rational_str(truncated_recovery_probability(pk, s, c));
          });
}
