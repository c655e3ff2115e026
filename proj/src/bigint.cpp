#include "convmce/bigint.hpp"

#include <cmath>
#include <limits>

namespace convmce {

double log2_of(const BigInt& x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    const std::size_t bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 60) return std::log2(x.convert_to<double>());
    // Keep the top 60 bits for the mantissa.
    const std::size_t drop = bits - 60;
    const BigInt top = x >> drop;
    return std::log2(top.convert_to<double>()) + static_cast<double>(drop);
}

double log2_of(const Rational& x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    return log2_of(BigInt(boost::multiprecision::numerator(x))) -
           log2_of(BigInt(boost::multiprecision::denominator(x)));
}

BigInt binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

BigInt factorial(std::uint64_t n) {
    BigInt r = 1;
    for (std::uint64_t i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt big_pow(const BigInt& base, std::uint64_t exp) {
    BigInt r = 1;
    BigInt b = base;
    while (exp) {
        if (exp & 1) r *= b;
        exp >>= 1;
        if (exp) b *= b;
    }
    return r;
}

}  // namespace convmce
