#include "tvr/mseries.hpp"

#include <algorithm>
#include <stdexcept>

#include "tvr/errors.hpp"

namespace tvr {

MSeries::MSeries(std::vector<LegVar> vars, std::vector<int> orders) : vars_(std::move(vars)), orders_(std::move(orders)) {
    if (vars_.size() != orders_.size()) throw std::invalid_argument("MSeries: one order per variable required");
    strides_.assign(vars_.size(), 1);
    std::size_t n = 1;
    for (std::size_t k = vars_.size(); k-- > 0;) {
        if (orders_[k] < 0) throw std::invalid_argument("MSeries: negative truncation order");
        strides_[k] = n;
        n *= static_cast<std::size_t>(orders_[k] + 1);
    }
    c_.assign(n, RatFuncA());
}

MSeries MSeries::constant(const std::vector<LegVar>& vars, const std::vector<int>& orders, const RatFuncA& c) {
    MSeries r(vars, orders);
    r.c_[0] = c;
    return r;
}

MSeries MSeries::in_variable(const std::vector<LegVar>& vars, const std::vector<int>& orders, std::size_t k,
                             const std::vector<RatFuncA>& c) {
    MSeries r(vars, orders);
    for (int m = 0; m <= orders[k] && m < static_cast<int>(c.size()); ++m)
        r.c_[static_cast<std::size_t>(m) * r.strides_[k]] = c[static_cast<std::size_t>(m)];
    return r;
}

MSeries MSeries::variable(const std::vector<LegVar>& vars, const std::vector<int>& orders, std::size_t k) {
    return in_variable(vars, orders, k, {RatFuncA(), RatFuncA(1)});
}

std::size_t MSeries::index(const std::vector<int>& e) const {
    if (e.size() != vars_.size()) throw std::invalid_argument("MSeries: exponent arity mismatch");
    std::size_t i = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (e[k] < 0) throw std::invalid_argument("MSeries: negative exponent");
        if (e[k] > orders_[k])
            throw TruncationError("MSeries: exponent " + std::to_string(e[k]) + " of " + vars_[k].name() +
                                      " beyond truncation order " + std::to_string(orders_[k]),
                                  e[k]);
        i += static_cast<std::size_t>(e[k]) * strides_[k];
    }
    return i;
}

std::vector<int> MSeries::exponents(std::size_t i) const {
    std::vector<int> e(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
        e[k] = static_cast<int>(i / strides_[k]);
        i %= strides_[k];
    }
    return e;
}

const RatFuncA& MSeries::at(const std::vector<int>& e) const { return c_[index(e)]; }
void MSeries::set(const std::vector<int>& e, RatFuncA value) { c_[index(e)] = std::move(value); }

bool MSeries::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const RatFuncA& x) { return x.is_zero(); });
}

bool operator==(const MSeries& x, const MSeries& y) {
    return x.vars_ == y.vars_ && x.orders_ == y.orders_ && x.c_ == y.c_;
}

void MSeries::check_compatible(const MSeries& y, const char* op) const {
    if (!(vars_ == y.vars_)) throw std::invalid_argument(std::string("MSeries ") + op + ": variable lists differ");
}

std::vector<int> MSeries::min_orders(const MSeries& y) const {
    std::vector<int> o(orders_.size());
    for (std::size_t k = 0; k < o.size(); ++k) o[k] = std::min(orders_[k], y.orders_[k]);
    return o;
}

MSeries MSeries::reboxed(const std::vector<int>& orders) const {
    if (orders == orders_) return *this;
    MSeries r(vars_, orders);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = at(r.exponents(i));
    return r;
}

MSeries MSeries::truncated(const std::vector<int>& orders) const {
    for (std::size_t k = 0; k < orders.size(); ++k)
        if (orders[k] > orders_[k]) throw TruncationError("MSeries::truncated: cannot enlarge the box", orders[k]);
    return reboxed(orders);
}

MSeries MSeries::operator-() const {
    MSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

MSeries operator+(const MSeries& x, const MSeries& y) {
    x.check_compatible(y, "add");
    MSeries r = x.reboxed(x.min_orders(y));
    MSeries yy = y.reboxed(r.orders_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += yy.c_[i];
    return r;
}

MSeries operator-(const MSeries& x, const MSeries& y) { return x + (-y); }

MSeries operator*(MSeries x, const RatFuncA& s) {
    for (auto& v : x.c_) v *= s;
    return x;
}

MSeries operator*(const MSeries& x, const MSeries& y) { return MSeries::product_to_total(x, y, -1); }

MSeries MSeries::product_to_total(const MSeries& x, const MSeries& y, int cap) {
    x.check_compatible(y, "mul");
    std::vector<int> o = x.min_orders(y);
    MSeries xx = x.reboxed(o), yy = y.reboxed(o);
    MSeries r(x.vars_, o);
    const std::size_t n = r.c_.size(), d = o.size();
    std::vector<std::vector<int>> ex(n);
    for (std::size_t i = 0; i < n; ++i) ex[i] = r.exponents(i);
    std::vector<std::size_t> ynz;
    for (std::size_t j = 0; j < n; ++j)
        if (!yy.c_[j].is_zero()) ynz.push_back(j);
    std::vector<int> deg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (int v : ex[i]) deg[i] += v;
    std::vector<RatFuncSum> acc(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (xx.c_[i].is_zero() || (cap >= 0 && deg[i] > cap)) continue;
        for (std::size_t j : ynz) {
            if (cap >= 0 && deg[i] + deg[j] > cap) continue;
            bool ok = true;
            for (std::size_t k = 0; k < d && ok; ++k) ok = ex[i][k] + ex[j][k] <= o[k];
            if (ok) acc[i + j].add_product(xx.c_[i], yy.c_[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i) r.c_[i] = acc[i].value();
    return r;
}

MSeries MSeries::inverse() const { return inverse_to_total(-1); }

MSeries MSeries::inverse_to_total(int cap) const {
    if (c_[0].is_zero()) throw std::domain_error("MSeries::inverse: zero constant term");
    const std::size_t n = c_.size(), d = orders_.size();
    MSeries r(vars_, orders_);
    RatFuncA inv0 = c_[0].inverse();
    r.c_[0] = inv0;
    std::vector<std::vector<int>> ex(n);
    for (std::size_t i = 0; i < n; ++i) ex[i] = exponents(i);
    std::vector<std::size_t> fnz;
    for (std::size_t j = 1; j < n; ++j)
        if (!c_[j].is_zero()) fnz.push_back(j);
    // Row-major order visits every componentwise-smaller exponent first.
    for (std::size_t i = 1; i < n; ++i) {
        if (cap >= 0) {
            int t = 0;
            for (int v : ex[i]) t += v;
            if (t > cap) continue;
        }
        RatFuncSum s;
        for (std::size_t j : fnz) {
            if (j > i) break;
            bool ok = true;
            for (std::size_t k = 0; k < d && ok; ++k) ok = ex[j][k] <= ex[i][k];
            if (ok) s.add_product(c_[j], r.c_[i - j]);
        }
        r.c_[i] = -(s.value() * inv0);
    }
    return r;
}

MSeries MSeries::log1p() const {
    if (!c_[0].is_zero()) throw std::domain_error("MSeries::log1p: nonzero constant term");
    // E log(1+u) = E(u) / (1+u) with E the total-degree Euler operator.
    MSeries eu(vars_, orders_);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        auto e = exponents(i);
        long deg = 0;
        for (int v : e) deg += v;
        eu.c_[i] = c_[i] * RatFuncA(deg);
    }
    MSeries one_plus = *this;
    one_plus.c_[0] = RatFuncA(1);
    MSeries q = eu * one_plus.inverse();
    for (std::size_t i = 1; i < q.c_.size(); ++i) {
        auto e = exponents(i);
        long deg = 0;
        for (int v : e) deg += v;
        q.c_[i] *= RatFuncA(rat(1, deg));
    }
    return q;
}

MSeries MSeries::log() const {
    if (!(c_[0] == RatFuncA(1))) throw std::domain_error("MSeries::log: constant term must be 1");
    MSeries u = *this;
    u.c_[0] = RatFuncA();
    return u.log1p();
}

MSeries MSeries::derivative(std::size_t k) const {
    std::vector<int> o = orders_;
    if (o[k] == 0) throw TruncationError("MSeries::derivative: no terms left in " + vars_[k].name(), 1);
    o[k] -= 1;
    MSeries r(vars_, o);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        auto e = r.exponents(i);
        e[k] += 1;
        r.c_[i] = at(e) * RatFuncA(static_cast<long>(e[k]));
    }
    return r;
}

MSeries MSeries::euler(std::size_t k) const {
    MSeries r = *this;
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        long ek = static_cast<long>(i / strides_[k] % static_cast<std::size_t>(orders_[k] + 1));
        r.c_[i] *= RatFuncA(ek);
    }
    return r;
}

MSeries MSeries::divide_by_difference(std::size_t k, std::size_t l, int p) const {
    if (k == l || orders_[k] != orders_[l])
        throw std::invalid_argument("divide_by_difference: needs two distinct variables with equal orders");
    const int o = orders_[k];
    MSeries cur = *this;
    int valid = o;  // coefficients with e_k + e_l <= valid are exact
    for (int step = 0; step < p; ++step) {
        MSeries next(vars_, orders_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            auto e = exponents(i);
            if (e[k] != 0 || e[l] != 0) continue;
            // diagonal restriction must vanish
            for (int s = 0; s <= valid; ++s) {
                RatFuncA diag;
                for (int a = 0; a <= s; ++a) {
                    if (a > o || s - a > o) continue;
                    auto f = e;
                    f[k] = a;
                    f[l] = s - a;
                    diag += cur.at(f);
                }
                if (!diag.is_zero())
                    throw std::domain_error("divide_by_difference: series does not vanish on " + vars_[k].name() +
                                            " = " + vars_[l].name());
            }
            for (int a = 0; a <= o; ++a)
                for (int b = 0; a + b + 1 <= valid && b <= o; ++b) {
                    RatFuncA m;
                    for (int t = 0; t <= b; ++t) {
                        auto f = e;
                        f[k] = a + 1 + t;
                        f[l] = b - t;
                        if (f[k] > o) break;
                        m += cur.at(f);
                    }
                    auto g = e;
                    g[k] = a;
                    g[l] = b;
                    next.set(g, m);
                }
        }
        cur = std::move(next);
        --valid;
    }
    std::vector<int> box = orders_;
    box[k] = box[l] = std::max(valid, 0) / 2;
    return cur.reboxed(box);
}

MSeries MSeries::subst(const RatFuncA& image) const {
    MSeries r = *this;
    for (auto& x : r.c_) x = x.subst(image);
    return r;
}

nlohmann::json MSeries::to_json() const {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : vars_) vars.push_back({{"leg", v.leg}, {"index", v.index}});
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].is_zero()) terms.push_back({{"exponents", exponents(i)}, {"coefficient", c_[i].to_string()}});
    return {{"variables", vars}, {"orders", orders_}, {"terms", terms}};
}

MSeries MSeries::from_json(const nlohmann::json& j) {
    std::vector<LegVar> vars;
    for (const auto& v : j.at("variables")) vars.push_back({v.at("leg").get<int>(), v.at("index").get<int>()});
    MSeries r(vars, j.at("orders").get<std::vector<int>>());
    for (const auto& t : j.at("terms"))
        r.set(t.at("exponents").get<std::vector<int>>(), RatFuncA::parse(t.at("coefficient").get<std::string>()));
    return r;
}

}  // namespace tvr
