#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tvr/poly.hpp"

namespace tvr {

/// An element of Q(a) in canonical form: num and den have integer
/// coefficients, are coprime in Q[a], share no integer content, and den has a
/// positive leading coefficient. Zero is 0/1. Canonical form makes equality
/// structural.
class RatFuncA {
public:
    RatFuncA() : den_(1) {}
    RatFuncA(const BigRat& c);  // NOLINT
    RatFuncA(long c) : RatFuncA(BigRat(c)) {}  // NOLINT
    RatFuncA(const PolyA& p);  // NOLINT
    /// num / den, reduced. Throws std::domain_error when den is zero.
    RatFuncA(const PolyA& num, const PolyA& den);

    /// The framing parameter a itself.
    static RatFuncA a() { return RatFuncA(PolyA::variable()); }

    const PolyA& num() const { return num_; }
    const PolyA& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    /// Constant value; throws std::logic_error if the value depends on a.
    BigRat constant_value() const;

    RatFuncA& operator+=(const RatFuncA& o);
    RatFuncA& operator-=(const RatFuncA& o);
    RatFuncA& operator*=(const RatFuncA& o);
    RatFuncA& operator/=(const RatFuncA& o);
    RatFuncA operator-() const;

    friend RatFuncA operator+(RatFuncA x, const RatFuncA& y) { return x += y; }
    friend RatFuncA operator-(RatFuncA x, const RatFuncA& y) { return x -= y; }
    friend RatFuncA operator*(RatFuncA x, const RatFuncA& y) { return x *= y; }
    friend RatFuncA operator/(RatFuncA x, const RatFuncA& y) { return x /= y; }
    friend bool operator==(const RatFuncA& x, const RatFuncA& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }

    RatFuncA inverse() const;
    /// d/da, exact.
    RatFuncA derivative() const;
    /// Composition a -> image(a). Throws std::domain_error if the composed
    /// denominator vanishes identically.
    RatFuncA subst(const RatFuncA& image) const;
    /// Value at a rational point; throws std::domain_error if the denominator
    /// vanishes there.
    BigRat eval(const BigRat& a) const;

    /// "(num) / (den)" with integer coefficients, e.g. "(-1 - a) / (a)".
    std::string to_string() const;
    static RatFuncA parse(const std::string& text);

    std::size_t hash() const;

private:
    struct Reduced {};
    RatFuncA(PolyA num, PolyA den, Reduced);
    static RatFuncA from_coprime(PolyA num, PolyA den);

    PolyA num_;
    PolyA den_;
};

inline bool is_zero(const RatFuncA& x) { return x.is_zero(); }

/// Sum of many terms, kept unreduced and grouped by denominator; reduction
/// happens once in value(). Much cheaper than repeated += for long sums.
class RatFuncSum {
public:
    void add(const RatFuncA& x);
    void add_product(const RatFuncA& x, const RatFuncA& y);
    RatFuncA value() const;

private:
    void add_raw(PolyA num, PolyA den);
    std::vector<std::pair<PolyA, PolyA>> groups_;  // (den, num)
};

RatFuncA pow(const RatFuncA& x, int e);

/// Parses an integer-coefficient polynomial in a such as "3 - 2*a + a^2".
PolyA parse_poly(const std::string& text);

}  // namespace tvr

template <>
struct std::hash<tvr::RatFuncA> {
    std::size_t operator()(const tvr::RatFuncA& x) const { return x.hash(); }
};
