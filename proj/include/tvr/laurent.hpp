#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvr/accum.hpp"
#include "tvr/bigrat.hpp"
#include "tvr/errors.hpp"
#include "tvr/ratfunc.hpp"

namespace tvr {

/// Truncated Laurent series in one variable z over a coefficient field S
/// (RatFuncA or BigRat). Coefficients are known for low() <= e < order();
/// everything from z^order() on is unknown. The coefficient at low() is
/// nonzero unless the series is zero to its order, in which case low() ==
/// order() and no coefficients are stored.
template <class S>
class ZLaurent {
public:
    ZLaurent() = default;

    /// sum_k coeffs[k] z^(low + k) + O(z^order).
    ZLaurent(std::vector<S> coeffs, int low, int order) : low_(low), order_(order), c_(std::move(coeffs)) {
        if (order_ < low_) throw std::invalid_argument("ZLaurent: order below lowest exponent");
        c_.resize(static_cast<std::size_t>(order_ - low_), S(0));
        normalize();
    }

    static ZLaurent zero(int order) { return ZLaurent({}, order, order); }
    static ZLaurent constant(const S& c, int order) { return ZLaurent({c}, 0, order); }
    static ZLaurent monomial(const S& c, int exponent, int order) {
        return ZLaurent({c}, exponent, std::max(order, exponent));
    }
    static ZLaurent variable(int order) { return monomial(S(1), 1, order); }

    int low() const { return low_; }
    int order() const { return order_; }
    bool is_zero() const { return c_.empty(); }

    /// Coefficient of z^e. Throws TruncationError when e is not determined.
    S coeff(int e) const {
        if (e >= order_)
            throw TruncationError("ZLaurent coefficient of z^" + std::to_string(e) + " requested, known below z^" +
                                      std::to_string(order_),
                                  e + 1);
        if (e < low_) return S(0);
        return c_[static_cast<std::size_t>(e - low_)];
    }

    /// Coefficient of z^-1.
    S residue() const {
        if (order_ <= -1)
            throw TruncationError("residue undetermined: series known only below z^" + std::to_string(order_), 0);
        return coeff(-1);
    }

    ZLaurent truncated(int order) const {
        if (order >= order_) return *this;
        std::vector<S> c;
        for (int e = low_; e < order; ++e) c.push_back(coeff(e));
        return ZLaurent(std::move(c), std::min(low_, order), order);
    }

    ZLaurent operator-() const {
        ZLaurent r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend ZLaurent operator+(const ZLaurent& x, const ZLaurent& y) { return x.combine(y, false); }
    friend ZLaurent operator-(const ZLaurent& x, const ZLaurent& y) { return x.combine(y, true); }

    friend ZLaurent operator*(const ZLaurent& x, const ZLaurent& y) {
        int order = std::min(x.low_ + y.order_, y.low_ + x.order_);
        int low = x.low_ + y.low_;
        if (x.is_zero() || y.is_zero() || order <= low) return zero(order);
        std::size_t n = static_cast<std::size_t>(order - low);
        std::vector<Accum<S>> acc(n);
        for (std::size_t i = 0; i < x.c_.size() && i < n; ++i) {
            if (tvr::is_zero(x.c_[i])) continue;
            for (std::size_t j = 0; i + j < n && j < y.c_.size(); ++j) acc[i + j].add_product(x.c_[i], y.c_[j]);
        }
        std::vector<S> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = acc[i].value();
        return ZLaurent(std::move(c), low, order);
    }

    friend ZLaurent operator*(ZLaurent x, const S& s) {
        if (tvr::is_zero(s)) return zero(x.order_);
        for (auto& v : x.c_) v *= s;
        return x;
    }
    friend ZLaurent operator*(const S& s, const ZLaurent& x) { return x * s; }

    /// Multiplication by z^k.
    ZLaurent shifted(int k) const {
        ZLaurent r = *this;
        r.low_ += k;
        r.order_ += k;
        return r;
    }

    ZLaurent inverse() const {
        if (is_zero()) throw std::domain_error("ZLaurent: inverse of a series with no known nonzero term");
        std::size_t n = c_.size();
        std::vector<S> r(n, S(0));
        S inv0 = S(1) / c_[0];
        r[0] = inv0;
        for (std::size_t k = 1; k < n; ++k) {
            Accum<S> s;
            for (std::size_t j = 1; j <= k; ++j)
                if (!tvr::is_zero(c_[j])) s.add_product(c_[j], r[k - j]);
            r[k] = -(s.value() * inv0);
        }
        return ZLaurent(std::move(r), -low_, -low_ + static_cast<int>(n));
    }

    friend ZLaurent operator/(const ZLaurent& x, const ZLaurent& y) { return x * y.inverse(); }

    ZLaurent derivative() const {
        std::vector<S> c;
        for (int e = low_; e < order_; ++e) c.push_back(coeff(e) * S(BigRat(e)));
        return ZLaurent(std::move(c), low_ - 1, order_ - 1);
    }

    /// Antiderivative with zero constant; requires no z^-1 term.
    ZLaurent integral() const {
        std::vector<S> c;
        for (int e = low_; e < order_; ++e) {
            S v = coeff(e);
            if (e == -1) {
                if (!tvr::is_zero(v)) throw std::domain_error("ZLaurent: integral of a series with a z^-1 term");
                c.push_back(S(0));
                continue;
            }
            c.push_back(v * S(rat(1, e + 1)));
        }
        return ZLaurent(std::move(c), low_ + 1, order_ + 1);
    }

    /// ln(1 + u) for u with lowest exponent >= 1.
    ZLaurent log1p() const {
        if (low_ < 1) throw std::domain_error("log1p: argument must vanish at z = 0");
        ZLaurent one_plus = *this + constant(S(1), order_);
        return (derivative() * one_plus.inverse()).integral().truncated(order_);
    }

    /// sqrt(1 + u) for u with lowest exponent >= 1.
    ZLaurent sqrt1p() const {
        if (low_ < 1) throw std::domain_error("sqrt1p: argument must vanish at z = 0");
        std::size_t n = static_cast<std::size_t>(order_);
        std::vector<S> s(n, S(0));
        s[0] = S(1);
        const S half(rat(1, 2));
        for (std::size_t k = 1; k < n; ++k) {
            S acc = coeff(static_cast<int>(k));
            for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
            s[k] = acc * half;
        }
        return ZLaurent(std::move(s), 0, order_);
    }

    /// this(inner) for a power series `this` and inner with lowest exponent >= 1.
    ZLaurent compose(const ZLaurent& inner) const {
        if (low_ < 0) throw std::domain_error("compose: outer series has a pole");
        if (!inner.is_zero() && inner.low_ < 1) throw std::domain_error("compose: inner series must vanish at 0");
        int lg = inner.is_zero() ? inner.order_ : inner.low_;
        int order = std::min(inner.order_, order_ * std::max(lg, 1));
        ZLaurent r = zero(order);
        for (int e = order_ - 1; e >= 0; --e) r = (r * inner).truncated(order) + constant(coeff(e), order);
        return r;
    }

    /// v with this(v(t)) = t, for this = c1 z + ... with c1 != 0 (Lagrange inversion).
    ZLaurent compose_inverse() const {
        if (low_ != 1) throw std::domain_error("compose_inverse: series must start at z^1 with nonzero coefficient");
        int order = order_;
        // h = z / u
        ZLaurent h = shifted(-1).inverse();
        std::vector<S> v(static_cast<std::size_t>(order), S(0));
        ZLaurent hp = constant(S(1), h.order_);
        for (int n = 1; n < order; ++n) {
            hp = hp * h;
            v[static_cast<std::size_t>(n)] = hp.coeff(n - 1) * S(rat(1, n));
        }
        return ZLaurent(std::move(v), 0, order);
    }

    friend bool operator==(const ZLaurent& x, const ZLaurent& y) {
        return x.low_ == y.low_ && x.order_ == y.order_ && x.c_ == y.c_;
    }

    /// Coefficients low()..order()-1.
    const std::vector<S>& coefficients() const { return c_; }

private:
    ZLaurent combine(const ZLaurent& y, bool subtract) const {
        int order = std::min(order_, y.order_);
        int low = std::min(low_, y.low_);
        if (order <= low) return zero(order);
        std::vector<S> c(static_cast<std::size_t>(order - low), S(0));
        for (int e = low_; e < order; ++e) c[e - low] += c_[e - low_];
        for (int e = y.low_; e < order; ++e) {
            if (subtract) c[e - low] -= y.c_[e - y.low_];
            else c[e - low] += y.c_[e - y.low_];
        }
        return ZLaurent(std::move(c), low, order);
    }

    void normalize() {
        std::size_t k = 0;
        while (k < c_.size() && tvr::is_zero(c_[k])) ++k;
        if (k == c_.size()) {
            c_.clear();
            low_ = order_;
            return;
        }
        if (k > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(k));
            low_ += static_cast<int>(k);
        }
    }

    int low_ = 0;
    int order_ = 0;
    std::vector<S> c_;
};

/// Res_{z=0} x*y computed as a dot product without forming the product.
template <class S>
S residue_of_product(const ZLaurent<S>& x, const ZLaurent<S>& y) {
    int order = std::min(x.low() + y.order(), y.low() + x.order());
    if (order <= -1)
        throw TruncationError("residue of product undetermined: product known below z^" + std::to_string(order),
                              -1 - order);
    Accum<S> r;
    for (int e = x.low(); -1 - e >= y.low(); ++e) {
        const S& xe = x.coefficients()[static_cast<std::size_t>(e - x.low())];
        if (tvr::is_zero(xe)) continue;
        r.add_product(xe, y.coeff(-1 - e));
    }
    return r.value();
}

}  // namespace tvr
