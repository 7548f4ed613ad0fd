#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvr/ratfunc.hpp"

namespace tvr {

/// The variable x^leg_index.
struct LegVar {
    int leg = 1;
    int index = 1;
    friend bool operator==(const LegVar& x, const LegVar& y) { return x.leg == y.leg && x.index == y.index; }
    std::string name() const { return "x" + std::to_string(leg) + "_" + std::to_string(index); }
};

/// Truncated power series in several leg variables over Q(a). Storage is a
/// dense box: exponent e_k runs over 0..orders()[k] for each variable.
/// Binary operations require identical variable lists and truncate to the
/// per-variable minimum order.
class MSeries {
public:
    MSeries() = default;
    MSeries(std::vector<LegVar> vars, std::vector<int> orders);

    static MSeries constant(const std::vector<LegVar>& vars, const std::vector<int>& orders, const RatFuncA& c);
    /// sum_m c[m] x_k^m inside the given variable box.
    static MSeries in_variable(const std::vector<LegVar>& vars, const std::vector<int>& orders, std::size_t k,
                               const std::vector<RatFuncA>& c);
    static MSeries variable(const std::vector<LegVar>& vars, const std::vector<int>& orders, std::size_t k);

    const std::vector<LegVar>& variables() const { return vars_; }
    const std::vector<int>& orders() const { return orders_; }
    std::size_t size() const { return c_.size(); }

    /// Coefficient of prod x_k^e[k]; throws TruncationError beyond the box.
    const RatFuncA& at(const std::vector<int>& e) const;
    void set(const std::vector<int>& e, RatFuncA value);
    const RatFuncA& at_index(std::size_t i) const { return c_[i]; }
    std::vector<int> exponents(std::size_t i) const;

    bool is_zero() const;
    friend bool operator==(const MSeries& x, const MSeries& y);
    friend bool operator!=(const MSeries& x, const MSeries& y) { return !(x == y); }

    MSeries operator-() const;
    friend MSeries operator+(const MSeries& x, const MSeries& y);
    friend MSeries operator-(const MSeries& x, const MSeries& y);
    friend MSeries operator*(const MSeries& x, const MSeries& y);
    friend MSeries operator*(MSeries x, const RatFuncA& s);
    friend MSeries operator*(const RatFuncA& s, MSeries x) { return std::move(x) * s; }

    /// 1/x; requires an invertible constant term.
    MSeries inverse() const;

    /// Product and inverse computed only for total degree <= cap; the rest
    /// of the box is left zero. For callers that read a triangle only.
    static MSeries product_to_total(const MSeries& x, const MSeries& y, int cap);
    MSeries inverse_to_total(int cap) const;
    friend MSeries operator/(const MSeries& x, const MSeries& y) { return x * y.inverse(); }
    /// ln(1+u); requires zero constant term.
    MSeries log1p() const;
    /// ln(x) for x with constant term 1.
    MSeries log() const;

    /// d/dx_k; the order in x_k drops by one.
    MSeries derivative(std::size_t k) const;
    /// x_k d/dx_k; orders unchanged.
    MSeries euler(std::size_t k) const;

    /// Exact quotient by (x_k - x_l)^p. Requires equal orders o in x_k and x_l
    /// and vanishing on the diagonal to the needed multiplicity; each division
    /// loses one total degree, and the result is cropped to the largest box
    /// that is still fully determined, floor((o - p) / 2) in both variables.
    MSeries divide_by_difference(std::size_t k, std::size_t l, int p = 1) const;

    /// Restriction to a smaller box.
    MSeries truncated(const std::vector<int>& orders) const;
    /// Applies a -> image to every coefficient.
    MSeries subst(const RatFuncA& image) const;

    nlohmann::json to_json() const;
    static MSeries from_json(const nlohmann::json& j);

private:
    std::size_t index(const std::vector<int>& e) const;
    void check_compatible(const MSeries& y, const char* op) const;
    std::vector<int> min_orders(const MSeries& y) const;
    MSeries reboxed(const std::vector<int>& orders) const;

    std::vector<LegVar> vars_;
    std::vector<int> orders_;
    std::vector<std::size_t> strides_;
    std::vector<RatFuncA> c_;
};

}  // namespace tvr
