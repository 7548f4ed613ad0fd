#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "tvr/bigrat.hpp"

namespace tvr {

/// Dense univariate polynomial in the framing parameter a with rational
/// coefficients. coefficients()[k] multiplies a^k; the highest stored
/// coefficient is nonzero unless the polynomial is zero (empty vector).
class PolyA {
public:
    PolyA() = default;
    explicit PolyA(std::vector<BigRat> coeffs);
    PolyA(std::initializer_list<BigRat> coeffs) : PolyA(std::vector<BigRat>(coeffs)) {}
    PolyA(const BigRat& c);  // NOLINT: constants convert implicitly
    PolyA(long c) : PolyA(BigRat(c)) {}  // NOLINT

    static PolyA monomial(const BigRat& c, int degree);
    static PolyA variable() { return monomial(1, 1); }

    /// Maximum degree any PolyA may reach; exceeding it throws std::overflow_error.
    static int degree_cap();
    static void set_degree_cap(int cap);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const std::vector<BigRat>& coefficients() const { return c_; }
    BigRat coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : BigRat(0); }
    const BigRat& leading() const { return c_.back(); }
    /// Multiplicity of the root a = 0.
    int low_order() const;

    BigRat eval(const BigRat& a) const;
    PolyA derivative() const;
    PolyA monic() const;

    /// Rational content c and primitive integer polynomial p with *this = c * p
    /// and p's leading coefficient positive.
    std::pair<BigRat, PolyA> content_primitive() const;

    PolyA& operator+=(const PolyA& o);
    PolyA& operator-=(const PolyA& o);
    PolyA& operator*=(const PolyA& o);
    PolyA& operator*=(const BigRat& s);
    PolyA operator-() const;

    friend PolyA operator+(PolyA x, const PolyA& y) { return x += y; }
    friend PolyA operator-(PolyA x, const PolyA& y) { return x -= y; }
    friend PolyA operator*(const PolyA& x, const PolyA& y);
    friend PolyA operator*(PolyA x, const BigRat& s) { return x *= s; }
    friend bool operator==(const PolyA& x, const PolyA& y) { return x.c_ == y.c_; }

    /// Euclidean division; throws std::domain_error on a zero divisor.
    static std::pair<PolyA, PolyA> divmod(const PolyA& num, const PolyA& den);
    /// Exact quotient; throws std::domain_error when the division leaves a remainder.
    static PolyA exact_div(const PolyA& num, const PolyA& den);

    /// Horner composition *this(inner).
    PolyA compose(const PolyA& inner) const;

    std::string to_string(const std::string& var = "a") const;

private:
    void trim();
    void check_cap() const;
    std::vector<BigRat> c_;
};

/// Monic gcd over Q[a]; gcd(0, 0) = 0.
PolyA gcd(const PolyA& x, const PolyA& y);

PolyA pow(const PolyA& x, int e);

}  // namespace tvr
