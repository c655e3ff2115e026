#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace convmce {

/// Canonical representative of an element of F_q: an integer in [0, q) whose
/// base-p digits are the coefficients of the residue polynomial.
using Elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

/// The finite field F_q, q = p^m <= 2^16, given by a monic irreducible
/// reduction polynomial over F_p. Immutable after construction; multiplication
/// and inversion go through log/antilog tables built once.
class Field {
public:
    static constexpr std::uint32_t kMaxOrder = 1u << 16;

    /// `reduction` lists the m+1 coefficients from the constant term upward.
    /// Throws ParameterError if p is not prime, q is too large, or the
    /// polynomial is not monic and irreducible.
    static FieldPtr create(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> reduction);

    /// F_q with a default reduction polynomial: the smallest primitive monic
    /// polynomial of degree m, except F_256 which uses x^8+x^4+x^3+x^2+1.
    /// Prime fields use the polynomial x.
    static FieldPtr with_order(std::uint32_t q);

    static FieldPtr gf256() { return with_order(256); }

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return m_; }
    std::uint32_t order() const noexcept { return q_; }
    const std::vector<std::uint32_t>& reduction() const noexcept { return reduction_; }

    /// Bytes per element on the wire: 1 if q <= 256, else 2.
    std::size_t element_bytes() const noexcept { return q_ <= 256 ? 1 : 2; }

    bool contains(Elem a) const noexcept { return a < q_; }

    Elem add(Elem a, Elem b) const noexcept {
        if (p_ == 2) return a ^ b;
        if (m_ == 1) return (a + b) % p_;
        return add_digits(a, b);
    }
    Elem neg(Elem a) const noexcept;
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }

    /// Throws DomainError for a == 0.
    Elem inv(Elem a) const;
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const noexcept;

    /// Reference multiplication: schoolbook polynomial product reduced by the
    /// reduction polynomial. Does not touch the tables.
    Elem mul_schoolbook(Elem a, Elem b) const;

    /// The primitive element used to build the tables.
    Elem generator() const noexcept { return exp_[1]; }

    /// Integer n mapped into F_p (the prime subfield).
    Elem from_integer(std::uint64_t n) const noexcept { return static_cast<Elem>(n % p_); }

    bool operator==(const Field& o) const noexcept {
        return p_ == o.p_ && m_ == o.m_ && reduction_ == o.reduction_;
    }

    std::string describe() const;

private:
    Field(std::uint32_t p, std::uint32_t m, std::vector<std::uint32_t> reduction);

    Elem add_digits(Elem a, Elem b) const noexcept;

    std::uint32_t p_;
    std::uint32_t m_;
    std::uint32_t q_;
    std::vector<std::uint32_t> reduction_;
    std::vector<Elem> exp_;           // size 2(q-1), exp_[i] = g^i
    std::vector<std::uint32_t> log_;  // size q, log_[0] unused
};

/// Field element bound to its field, for scalar-level code and tests.
/// Arithmetic between elements of different fields throws UsageError.
class FieldElement {
public:
    FieldElement(FieldPtr field, Elem value);

    const FieldPtr& field() const noexcept { return field_; }
    Elem value() const noexcept { return value_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement inv() const;

    bool operator==(const FieldElement& o) const noexcept {
        return value_ == o.value_ && *field_ == *o.field_;
    }

private:
    void check_same(const FieldElement& o) const;

    FieldPtr field_;
    Elem value_;
};

/// Polynomial helpers over F_p on dense coefficient vectors (constant term
/// first). Exposed for the irreducibility check and its tests.
namespace fp_poly {
bool is_irreducible(const std::vector<std::uint32_t>& poly, std::uint32_t p);
bool is_prime(std::uint64_t n);
}  // namespace fp_poly

}  // namespace convmce
