#include "tvr/ratfunc.hpp"

#include <cctype>
#include <functional>
#include <stdexcept>

namespace tvr {

RatFuncA::RatFuncA(const BigRat& c)
    : num_(PolyA(BigRat(c.get_num()))), den_(PolyA(BigRat(c.get_den()))) {}

RatFuncA::RatFuncA(const PolyA& p) : den_(1) {
    auto [c, prim] = p.content_primitive();
    if (p.is_zero()) return;
    num_ = prim * BigRat(c.get_num());
    den_ = PolyA(BigRat(c.get_den()));
}

RatFuncA::RatFuncA(PolyA num, PolyA den, Reduced) : num_(std::move(num)), den_(std::move(den)) {}

RatFuncA::RatFuncA(const PolyA& num, const PolyA& den) {
    if (den.is_zero()) throw std::domain_error("RatFuncA: zero denominator");
    PolyA g = gcd(num, den);
    if (g.degree() > 0) {
        *this = from_coprime(PolyA::exact_div(num, g), PolyA::exact_div(den, g));
    } else {
        *this = from_coprime(num, den);
    }
}

// Normalizes integer content and sign of an already coprime pair.
RatFuncA RatFuncA::from_coprime(PolyA num, PolyA den) {
    if (num.is_zero()) return RatFuncA();
    auto [cn, pn] = num.content_primitive();
    auto [cd, pd] = den.content_primitive();
    BigRat c = cn / cd;
    pn *= BigRat(c.get_num());
    pd *= BigRat(c.get_den());
    return RatFuncA(std::move(pn), std::move(pd), Reduced{});
}

BigRat RatFuncA::constant_value() const {
    if (!is_constant()) throw std::logic_error("RatFuncA is not constant: " + to_string());
    return num_.coeff(0) / den_.coeff(0);
}

RatFuncA& RatFuncA::operator+=(const RatFuncA& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    if (den_ == o.den_) {
        PolyA n = num_ + o.num_;
        if (den_.is_constant()) return *this = from_coprime(std::move(n), den_);
        return *this = RatFuncA(n, den_);
    }
    if (den_.is_constant() && o.den_.is_constant()) {
        PolyA n = num_ * o.den_.coeff(0) + o.num_ * den_.coeff(0);
        return *this = from_coprime(std::move(n), PolyA(den_.coeff(0) * o.den_.coeff(0)));
    }
    PolyA g = gcd(den_, o.den_);
    PolyA d1 = g.degree() > 0 ? PolyA::exact_div(den_, g) : den_;
    PolyA d2 = g.degree() > 0 ? PolyA::exact_div(o.den_, g) : o.den_;
    PolyA n = num_ * d2 + o.num_ * d1;
    PolyA d = den_ * d2;
    if (g.degree() > 0) {
        PolyA h = gcd(n, g);
        if (h.degree() > 0) {
            n = PolyA::exact_div(n, h);
            d = PolyA::exact_div(d, h);
        }
    }
    return *this = from_coprime(std::move(n), std::move(d));
}

RatFuncA& RatFuncA::operator-=(const RatFuncA& o) { return *this += -o; }

RatFuncA& RatFuncA::operator*=(const RatFuncA& o) {
    if (is_zero() || o.is_zero()) return *this = RatFuncA();
    if (is_polynomial() && o.is_polynomial())
        return *this = from_coprime(num_ * o.num_, den_ * o.den_);
    PolyA g1 = gcd(num_, o.den_);
    PolyA g2 = gcd(o.num_, den_);
    PolyA n1 = g1.degree() > 0 ? PolyA::exact_div(num_, g1) : num_;
    PolyA d2 = g1.degree() > 0 ? PolyA::exact_div(o.den_, g1) : o.den_;
    PolyA n2 = g2.degree() > 0 ? PolyA::exact_div(o.num_, g2) : o.num_;
    PolyA d1 = g2.degree() > 0 ? PolyA::exact_div(den_, g2) : den_;
    return *this = from_coprime(n1 * n2, d1 * d2);
}

RatFuncA& RatFuncA::operator/=(const RatFuncA& o) { return *this *= o.inverse(); }

RatFuncA RatFuncA::operator-() const { return RatFuncA(-num_, den_, Reduced{}); }

void RatFuncSum::add_raw(PolyA num, PolyA den) {
    for (auto& [d, n] : groups_)
        if (d == den) {
            n += num;
            return;
        }
    groups_.emplace_back(std::move(den), std::move(num));
}

void RatFuncSum::add(const RatFuncA& x) {
    if (!x.is_zero()) add_raw(x.num(), x.den());
}

void RatFuncSum::add_product(const RatFuncA& x, const RatFuncA& y) {
    if (x.is_zero() || y.is_zero()) return;
    add_raw(x.num() * y.num(), x.den() * y.den());
}

RatFuncA RatFuncSum::value() const {
    RatFuncA r;
    for (const auto& [d, n] : groups_)
        if (!n.is_zero()) r += RatFuncA(n, d);
    return r;
}

RatFuncA RatFuncA::inverse() const {
    if (is_zero()) throw std::domain_error("RatFuncA: division by zero");
    return from_coprime(den_, num_);
}

RatFuncA RatFuncA::derivative() const {
    if (is_constant()) return RatFuncA();
    if (is_polynomial()) return RatFuncA(num_.derivative(), den_);
    return RatFuncA(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFuncA RatFuncA::subst(const RatFuncA& image) const {
    auto horner = [&](const PolyA& p) {
        RatFuncA r;
        const auto& c = p.coefficients();
        for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * image + RatFuncA(*it);
        return r;
    };
    RatFuncA d = horner(den_);
    if (d.is_zero()) throw std::domain_error("RatFuncA::subst: denominator vanishes identically");
    return horner(num_) / d;
}

BigRat RatFuncA::eval(const BigRat& a) const {
    BigRat d = den_.eval(a);
    if (tvr::is_zero(d))
        throw std::domain_error("RatFuncA::eval: denominator " + den_.to_string() + " vanishes at a = " +
                                a.get_str());
    return num_.eval(a) / d;
}

std::string RatFuncA::to_string() const { return "(" + num_.to_string() + ") / (" + den_.to_string() + ")"; }

namespace {

struct PolyParser {
    const std::string& s;
    std::size_t i = 0;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        skip();
        return i < s.size() && s[i] == c;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("cannot parse polynomial '" + s + "': " + what);
    }
    BigInt integer() {
        skip();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) fail("expected digits");
        return BigInt(s.substr(start, i - start));
    }
    PolyA term(int sign) {
        skip();
        BigInt coef = 1;
        bool have_coef = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            coef = integer();
            have_coef = true;
            if (peek('*')) ++i;
            else return PolyA(BigRat(coef * sign));
        }
        skip();
        if (i >= s.size() || s[i] != 'a') {
            if (have_coef) fail("expected 'a' after '*'");
            fail("expected term");
        }
        ++i;
        int e = 1;
        if (peek('^')) {
            ++i;
            e = static_cast<int>(integer().get_si());
        }
        return PolyA::monomial(BigRat(coef * sign), e);
    }
    PolyA poly() {
        PolyA r;
        int sign = 1;
        if (peek('-')) {
            ++i;
            sign = -1;
        } else if (peek('+')) {
            ++i;
        }
        r += term(sign);
        for (;;) {
            if (peek('+')) {
                ++i;
                r += term(1);
            } else if (peek('-')) {
                ++i;
                r += term(-1);
            } else {
                break;
            }
        }
        return r;
    }
    PolyA group() {
        if (peek('(')) {
            ++i;
            PolyA p = poly();
            if (!peek(')')) fail("expected ')'");
            ++i;
            return p;
        }
        return poly();
    }
};

}  // namespace

PolyA parse_poly(const std::string& text) {
    PolyParser p{text};
    PolyA r = p.group();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

RatFuncA RatFuncA::parse(const std::string& text) {
    PolyParser p{text};
    PolyA num = p.group();
    PolyA den(1);
    if (p.peek('/')) {
        ++p.i;
        den = p.group();
    }
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return RatFuncA(num, den);
}

std::size_t RatFuncA::hash() const {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](const PolyA& p) {
        for (const auto& c : p.coefficients()) {
            h ^= std::hash<std::string>{}(c.get_str());
            h *= 1099511628211ull;
        }
        h ^= 0x9e3779b97f4a7c15ull;
    };
    mix(num_);
    mix(den_);
    return h;
}

RatFuncA pow(const RatFuncA& x, int e) {
    if (e < 0) return pow(x.inverse(), -e);
    RatFuncA r(1), base = x;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= base;
        if (e > 1) base *= base;
    }
    return r;
}

}  // namespace tvr
