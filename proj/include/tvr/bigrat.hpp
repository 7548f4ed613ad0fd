#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace tvr {

// Arbitrary-precision rational; mpq_class keeps gcd(num, den) = 1 and den > 0.
using BigRat = mpq_class;
using BigInt = mpz_class;

inline bool is_zero(const BigRat& x) { return sgn(x) == 0; }

// n/d in canonical form; d != 0.
inline BigRat rat(long n, long d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    BigRat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string to_string(const BigRat& x) { return x.get_str(); }

inline BigRat parse_bigrat(const std::string& text) {
    BigRat r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
    r.canonicalize();
    return r;
}

inline BigRat factorial(unsigned n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return BigRat(f);
}

// (2n-1)!! with (-1)!! = 1.
inline BigRat double_factorial_odd(int n) {
    BigInt f = 1;
    for (int k = 2 * n - 1; k > 1; k -= 2) f *= k;
    return BigRat(f);
}

inline BigRat pow(const BigRat& x, int e) {
    if (e < 0) {
        if (is_zero(x)) throw std::domain_error("zero to a negative power");
        return pow(BigRat(1) / x, -e);
    }
    BigRat r = 1, base = x;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= base;
        base *= base;
    }
    return r;
}

}  // namespace tvr
