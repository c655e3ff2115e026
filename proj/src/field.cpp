#include "convmce/field.hpp"

#include <sstream>

#include "convmce/errors.hpp"

namespace convmce {

namespace {

using Poly = std::vector<std::uint32_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

// Remainder of a by monic-or-not b over F_p (b nonzero, leading coeff invertible).
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    const std::uint64_t lead_inv = pow_mod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        const std::size_t shift = a.size() - b.size();
        const std::uint64_t c = a.back() * lead_inv % p;
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t sub = c * b[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

Poly digits_of(std::uint32_t v, std::uint32_t p, std::uint32_t m) {
    Poly d(m, 0);
    for (std::uint32_t i = 0; i < m; ++i) {
        d[i] = v % p;
        v /= p;
    }
    return d;
}

std::uint32_t value_of(const Poly& d, std::uint32_t p) {
    std::uint32_t v = 0;
    for (std::size_t i = d.size(); i-- > 0;) v = v * p + d[i];
    return v;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

namespace fp_poly {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t f = 2; f * f <= n; ++f)
        if (n % f == 0) return false;
    return true;
}

bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p) {
    Poly f = poly;
    trim(f);
    if (f.size() < 2) return false;
    const std::size_t m = f.size() - 1;
    // Trial division by every monic polynomial of degree 1..m/2.
    for (std::size_t d = 1; d <= m / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t c = 0; c < count; ++c) {
            Poly g(d + 1, 0);
            std::uint64_t x = c;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(x % p);
                x /= p;
            }
            g[d] = 1;
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace fp_poly

Field::Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> reduction)
    : p_(p), m_(m), q_(1), reduction_(std::move(reduction)) {
    for (std::uint32_t i = 0; i < m_; ++i) q_ *= p_;

    // Find a primitive element by checking its order against the prime
    // factors of q-1, using table-free multiplication.
    const std::uint32_t group = q_ - 1;
    const auto factors = prime_factors(group);
    auto slow_pow = [&](Elem a, std::uint64_t e) {
        Elem r = 1;
        while (e) {
            if (e & 1) r = mul_schoolbook(r, a);
            a = mul_schoolbook(a, a);
            e >>= 1;
        }
        return r;
    };
    Elem g = 0;
    for (Elem cand = 1; cand < q_; ++cand) {
        bool primitive = true;
        for (auto f : factors) {
            if (slow_pow(cand, group / f) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            g = cand;
            break;
        }
    }
    if (g == 0) throw ParameterError("no primitive element found; reduction polynomial not irreducible");

    exp_.assign(2 * static_cast<std::size_t>(group), 0);
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < group; ++i) {
        exp_[i] = x;
        exp_[i + group] = x;
        log_[x] = i;
        x = mul_schoolbook(x, g);
    }
}

FieldPtr Field::create(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> reduction) {
    if (!fp_poly::is_prime(p)) throw ParameterError("field characteristic must be prime");
    if (m == 0) throw ParameterError("extension degree must be at least 1");
    std::uint64_t q = 1;
    for (std::uint32_t i = 0; i < m; ++i) {
        q *= p;
        if (q > kMaxOrder) throw ParameterError("field order exceeds 2^16");
    }
    if (reduction.size() != m + 1) throw ParameterError("reduction polynomial must have m+1 coefficients");
    for (auto c : reduction)
        if (c >= p) throw ParameterError("reduction polynomial coefficient out of range");
    if (reduction.back() != 1) throw ParameterError("reduction polynomial must be monic");
    if (!fp_poly::is_irreducible(reduction, p)) throw ParameterError("reduction polynomial is not irreducible");
    return FieldPtr(new Field(p, m, std::move(reduction)));
}

FieldPtr Field::with_order(std::uint32_t q) {
    if (q < 2 || q > kMaxOrder) throw ParameterError("field order must be in [2, 2^16]");
    std::uint32_t p = 2;
    while (q % p != 0) ++p;
    std::uint32_t m = 0;
    for (std::uint32_t r = q; r > 1; r /= p) {
        if (r % p != 0) throw ParameterError("field order must be a prime power");
        ++m;
    }
    if (m == 1) return create(p, 1, {0, 1});
    if (q == 256) return create(2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1});

    // Smallest monic polynomial (by base-p encoding of the lower coefficients)
    // that is irreducible and has x as a primitive element.
    const auto factors = prime_factors(q - 1);
    for (std::uint32_t c = 1; c < q; ++c) {
        Poly f = digits_of(c, p, m);
        f.push_back(1);
        if (f[0] == 0 || !fp_poly::is_irreducible(f, p)) continue;
        FieldPtr field(new Field(p, m, f));
        const Elem x = p;  // the residue class of the polynomial x
        bool primitive = true;
        for (auto fac : factors) {
            if (field->pow(x, (q - 1) / fac) == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) return field;
    }
    throw ParameterError("no primitive polynomial found");
}

Elem Field::add_digits(Elem a, Elem b) const noexcept {
    Elem r = 0;
    Elem scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        r += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return r;
}

Elem Field::neg(Elem a) const noexcept {
    if (p_ == 2) return a;
    if (m_ == 1) return a == 0 ? 0 : p_ - a;
    Elem r = 0;
    Elem scale = 1;
    for (std::uint32_t i = 0; i < m_; ++i) {
        r += ((p_ - a % p_) % p_) * scale;
        a /= p_;
        scale *= p_;
    }
    return r;
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero");
    const std::uint32_t group = q_ - 1;
    return exp_[(group - log_[a]) % group];
}

Elem Field::pow(Elem a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const std::uint64_t group = q_ - 1;
    return exp_[static_cast<std::size_t>((log_[a] * (e % group)) % group)];
}

Elem Field::mul_schoolbook(Elem a, Elem b) const {
    const Poly da = digits_of(a, p_, m_);
    const Poly db = digits_of(b, p_, m_);
    Poly prod(2 * m_ - 1, 0);
    for (std::uint32_t i = 0; i < m_; ++i)
        for (std::uint32_t j = 0; j < m_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(da[i]) * db[j]) % p_);
    Poly r = poly_mod(prod, reduction_, p_);
    r.resize(m_, 0);
    return value_of(r, p_);
}

std::string Field::describe() const {
    std::ostringstream os;
    os << "F_" << q_ << " (p=" << p_ << ", m=" << m_ << ", reduction=";
    bool first = true;
    for (std::size_t i = reduction_.size(); i-- > 0;) {
        if (reduction_[i] == 0) continue;
        if (!first) os << '+';
        first = false;
        if (reduction_[i] != 1 || i == 0) os << reduction_[i];
        if (i >= 1) os << 'x';
        if (i >= 2) os << '^' << i;
    }
    os << ')';
    return os.str();
}

FieldElement::FieldElement(FieldPtr field, Elem value) : field_(std::move(field)), value_(value) {
    if (!field_) throw UsageError("field element without a field");
    if (!field_->contains(value_)) throw UsageError("field element out of range");
}

void FieldElement::check_same(const FieldElement& o) const {
    if (field_ != o.field_ && !(*field_ == *o.field_)) throw UsageError("field elements from different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same(o);
    return {field_, field_->add(value_, o.value_)};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same(o);
    return {field_, field_->sub(value_, o.value_)};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same(o);
    return {field_, field_->mul(value_, o.value_)};
}

FieldElement FieldElement::inv() const { return {field_, field_->inv(value_)}; }

}  // namespace convmce
