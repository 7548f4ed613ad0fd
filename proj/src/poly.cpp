#include "tvr/poly.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>

namespace tvr {

namespace {
std::atomic<int> g_degree_cap{4096};
}

int PolyA::degree_cap() { return g_degree_cap.load(); }
void PolyA::set_degree_cap(int cap) { g_degree_cap.store(cap); }

PolyA::PolyA(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) {
    trim();
    check_cap();
}

PolyA::PolyA(const BigRat& c) {
    if (!tvr::is_zero(c)) c_.push_back(c);
}

PolyA PolyA::monomial(const BigRat& c, int degree) {
    if (tvr::is_zero(c)) return {};
    std::vector<BigRat> v(degree + 1);
    v[degree] = c;
    return PolyA(std::move(v));
}

void PolyA::trim() {
    while (!c_.empty() && tvr::is_zero(c_.back())) c_.pop_back();
}

void PolyA::check_cap() const {
    if (degree() > degree_cap())
        throw std::overflow_error("PolyA degree " + std::to_string(degree()) + " exceeds cap " +
                                  std::to_string(degree_cap()));
}

int PolyA::low_order() const {
    for (int k = 0; k < static_cast<int>(c_.size()); ++k)
        if (!tvr::is_zero(c_[k])) return k;
    return 0;
}

BigRat PolyA::eval(const BigRat& a) const {
    BigRat r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * a + *it;
    return r;
}

PolyA PolyA::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigRat> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
    return PolyA(std::move(d));
}

PolyA PolyA::monic() const {
    if (is_zero()) return {};
    PolyA r = *this;
    BigRat inv = 1 / leading();
    for (auto& x : r.c_) x *= inv;
    return r;
}

std::pair<BigRat, PolyA> PolyA::content_primitive() const {
    if (is_zero()) return {BigRat(0), PolyA()};
    BigInt l = 1, g = 0;
    for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<BigRat> v(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) {
        v[k] = c_[k] * l;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v[k].get_num_mpz_t());
    }
    if (sgn(c_.back()) < 0) g = -g;
    for (auto& x : v) x /= g;
    PolyA p;
    p.c_ = std::move(v);
    return {BigRat(g) / BigRat(l), std::move(p)};
}

PolyA& PolyA::operator+=(const PolyA& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
}

PolyA& PolyA::operator-=(const PolyA& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
}

PolyA operator*(const PolyA& x, const PolyA& y) {
    if (x.is_zero() || y.is_zero()) return {};
    PolyA r;
    r.c_.assign(x.c_.size() + y.c_.size() - 1, BigRat(0));
    if (r.degree() > PolyA::degree_cap()) r.check_cap();
    auto integral = [](const std::vector<BigRat>& v) {
        for (const auto& c : v)
            if (mpz_cmp_ui(c.get_den_mpz_t(), 1) != 0) return false;
        return true;
    };
    if (integral(x.c_) && integral(y.c_)) {
        // integer coefficients: accumulate numerators without rational canonicalization
        for (std::size_t i = 0; i < x.c_.size(); ++i) {
            mpz_srcptr xi = x.c_[i].get_num_mpz_t();
            if (mpz_sgn(xi) == 0) continue;
            for (std::size_t j = 0; j < y.c_.size(); ++j)
                mpz_addmul(r.c_[i + j].get_num_mpz_t(), xi, y.c_[j].get_num_mpz_t());
        }
        r.trim();
        return r;
    }
    BigRat t;
    for (std::size_t i = 0; i < x.c_.size(); ++i) {
        if (tvr::is_zero(x.c_[i])) continue;
        for (std::size_t j = 0; j < y.c_.size(); ++j) {
            t = x.c_[i] * y.c_[j];
            r.c_[i + j] += t;
        }
    }
    r.trim();
    return r;
}

PolyA& PolyA::operator*=(const PolyA& o) { return *this = *this * o; }

PolyA& PolyA::operator*=(const BigRat& s) {
    if (tvr::is_zero(s)) {
        c_.clear();
        return *this;
    }
    for (auto& x : c_) x *= s;
    return *this;
}

PolyA PolyA::operator-() const {
    PolyA r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

std::pair<PolyA, PolyA> PolyA::divmod(const PolyA& num, const PolyA& den) {
    if (den.is_zero()) throw std::domain_error("polynomial division by zero");
    if (num.degree() < den.degree()) return {PolyA(), num};
    std::vector<BigRat> rem = num.c_;
    std::vector<BigRat> q(num.c_.size() - den.c_.size() + 1);
    const int dd = den.degree();
    const BigRat inv = 1 / den.leading();
    for (int k = num.degree(); k >= dd; --k) {
        if (tvr::is_zero(rem[k])) continue;
        BigRat f = rem[k] * inv;
        q[k - dd] = f;
        for (int j = 0; j <= dd; ++j) rem[k - dd + j] -= f * den.c_[j];
    }
    rem.resize(dd);
    return {PolyA(std::move(q)), PolyA(std::move(rem))};
}

PolyA PolyA::exact_div(const PolyA& num, const PolyA& den) {
    auto [q, r] = divmod(num, den);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
}

PolyA PolyA::compose(const PolyA& inner) const {
    PolyA r;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * inner + PolyA(*it);
    return r;
}

std::string PolyA::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= degree(); ++k) {
        const BigRat& c = c_[k];
        if (tvr::is_zero(c)) continue;
        BigRat mag = abs(c);
        if (first) {
            if (sgn(c) < 0) os << "-";
        } else {
            os << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0) {
            os << mag.get_str();
            continue;
        }
        if (mag != 1) os << mag.get_str() << "*";
        os << var;
        if (k > 1) os << "^" << k;
    }
    return os.str();
}

namespace {

// Multiplicity of the root a = -1, by repeated synthetic division.
int root_multiplicity_minus_one(PolyA p) {
    int m = 0;
    while (p.degree() > 0) {
        const auto& c = p.coefficients();
        std::vector<BigRat> q(c.size() - 1);
        BigRat carry = 0;
        for (int k = p.degree(); k >= 1; --k) {
            carry = c[k] - carry;
            q[k - 1] = carry;
        }
        // remainder is c[0] - q[0]
        if (!is_zero(c[0] - carry)) break;
        p = PolyA(std::move(q));
        ++m;
    }
    return m;
}

// Recognizes p = c * a^i * (a+1)^j; denominators in this code base are almost
// always of this shape, and it makes their gcds trivial.
bool split_a_ap1(const PolyA& p, int& i, int& j) {
    i = p.low_order();
    const auto& c = p.coefficients();
    j = p.degree() - i;
    const BigRat& lead = c.back();
    BigInt binom;
    for (int k = 0; k <= j; ++k) {
        mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(k));
        if (c[i + k] != lead * binom) return false;
    }
    return true;
}

PolyA a_ap1_power(int i, int j) {
    PolyA r = PolyA::monomial(1, i);
    if (j > 0) r *= pow(PolyA{1, 1}, j);
    return r;
}

}  // namespace

PolyA gcd(const PolyA& x, const PolyA& y) {
    if (x.is_zero()) return y.monic();
    if (y.is_zero()) return x.monic();
    if (x.is_constant() || y.is_constant()) return PolyA(1);
    int i = 0, j = 0;
    const PolyA* other = nullptr;
    if (split_a_ap1(x, i, j)) other = &y;
    else if (split_a_ap1(y, i, j)) other = &x;
    if (other) {
        int i2 = std::min(i, other->low_order());
        int j2 = j > 0 ? std::min(j, root_multiplicity_minus_one(*other)) : 0;
        return a_ap1_power(i2, j2);
    }
    PolyA r0 = x.degree() >= y.degree() ? x.monic() : y.monic();
    PolyA r1 = x.degree() >= y.degree() ? y.monic() : x.monic();
    while (!r1.is_zero()) {
        PolyA r2 = PolyA::divmod(r0, r1).second.monic();
        r0 = std::move(r1);
        r1 = std::move(r2);
    }
    return r0;
}

PolyA pow(const PolyA& x, int e) {
    if (e < 0) throw std::domain_error("negative polynomial power");
    PolyA r(1), base = x;
    for (; e > 0; e >>= 1) {
        if (e & 1) r *= base;
        if (e > 1) base = base * base;
    }
    return r;
}

}  // namespace tvr
