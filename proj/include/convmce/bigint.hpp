#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

namespace convmce {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// log2 of a positive integer; -infinity for zero.
double log2_of(const BigInt& x);
/// log2 of a nonnegative rational; -infinity for zero.
double log2_of(const Rational& x);

/// Binomial coefficient C(n, k); zero when k < 0, n < 0 or k > n.
BigInt binomial(std::int64_t n, std::int64_t k);

BigInt factorial(std::uint64_t n);

BigInt big_pow(const BigInt& base, std::uint64_t exp);

}  // namespace convmce
