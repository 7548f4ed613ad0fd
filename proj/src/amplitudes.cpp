#include "tvr/amplitudes.hpp"

#include <functional>
#include <sstream>

namespace tvr {

namespace {

template <class S, class Bracket>
S assemble_core(int g, const PartitionTriple& t, const std::array<S, 3>& w, Bracket bracket) {
    std::vector<int> mu, leg;
    for (int L = 0; L < 3; ++L)
        for (int p : t[static_cast<std::size_t>(L)].parts()) {
            mu.push_back(p);
            leg.push_back(L);
        }
    const int ell = static_cast<int>(mu.size());
    if (ell == 0) throw std::invalid_argument("assemble_G: the empty triple has no amplitude");
    if (g < 0) throw std::invalid_argument("assemble_G: negative genus");
    S pref = S(BigRat(1) / BigRat(triple_aut(t)));
    for (int j = 0; j < ell; ++j) pref *= leg_factor_w(mu[j], leg[j] + 1, w);
    if (g == 0 && ell == 1) return S(pref / S(BigRat(mu[0] * mu[0])));
    const S W = w[0] * w[1] * w[2];
    if (g == 0 && ell == 2) {
        const S& u = w[static_cast<std::size_t>(leg[0])];
        const S& v = w[static_cast<std::size_t>(leg[1])];
        S conv = unstable_convention<S>(UnstableCase::TwoPointTwoDenominators,
                                        {S(S(BigRat(mu[0])) / u), S(S(BigRat(mu[1])) / v)});
        return S(pref * W / (u * u * v * v) * conv);
    }
    const int dim = 3 * g - 3 + ell;
    // slot factor mu^b / w^(b+2)
    std::vector<std::vector<S>> f(static_cast<std::size_t>(ell));
    for (int j = 0; j < ell; ++j) {
        const S& wl = w[static_cast<std::size_t>(leg[j])];
        S inv_w = S(S(1) / wl);
        S cur = S(inv_w * inv_w);
        for (int b = 0; b <= dim; ++b) {
            f[static_cast<std::size_t>(j)].push_back(cur);
            cur = S(cur * S(BigRat(mu[j])) * inv_w);
        }
    }
    S total(0);
    std::vector<int> b(static_cast<std::size_t>(ell), 0);
    const int min_sum = std::max(0, ell - 3);
    std::function<void(int, int, const S&)> rec = [&](int j, int used, const S& prod) {
        if (j == ell) {
            if (used < min_sum) return;
            S br = bracket(b);
            if (!is_zero(br)) total += S(br * prod);
            return;
        }
        for (int v = 0; used + v <= dim; ++v) {
            b[static_cast<std::size_t>(j)] = v;
            rec(j + 1, used + v, S(prod * f[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]));
        }
    };
    rec(0, 0, S(1));
    return S(pref * pow(W, ell - 1) * total);
}

std::vector<int> slot_exponent_legs(const LegCounts& n) {
    std::vector<int> legs;
    for (int L = 0; L < 3; ++L)
        for (int j = 0; j < n[static_cast<std::size_t>(L)]; ++j) legs.push_back(L + 1);
    return legs;
}

// Visits every b with sum in [lo, hi], b_j >= 0.
void for_each_index(int slots, int lo, int hi, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> b(static_cast<std::size_t>(slots), 0);
    std::function<void(int, int)> rec = [&](int j, int used) {
        if (j == slots) {
            if (used >= lo) f(b);
            return;
        }
        for (int v = 0; used + v <= hi; ++v) {
            b[static_cast<std::size_t>(j)] = v;
            rec(j + 1, used + v);
        }
    };
    rec(0, 0);
}

// out[e] = sum_b coeffs[b] prod_j table[j][b_j][e_j], exponents 0..order.
MSeries tensor_series(const std::vector<LegVar>& vars, int order, const std::map<std::vector<int>, RatFuncA>& coeffs,
                      const std::vector<std::vector<std::vector<RatFuncA>>>& table) {
    const std::size_t n = vars.size();
    MSeries out(vars, std::vector<int>(n, order));
    std::vector<RatFuncA> acc(out.size());
    const std::size_t side = static_cast<std::size_t>(order + 1);
    for (const auto& [b, c] : coeffs) {
        if (c.is_zero()) continue;
        // nested loops with partial products, row-major like MSeries
        std::vector<RatFuncA> partial(n + 1);
        partial[0] = c;
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t j, std::size_t flat) {
            if (j == n) {
                acc[flat] += partial[n];
                return;
            }
            const auto& s = table[j][static_cast<std::size_t>(b[j])];
            for (std::size_t e = 0; e < side; ++e) {
                if (s[e].is_zero()) continue;
                partial[j + 1] = partial[j] * s[e];
                rec(j + 1, flat * side + e);
            }
        };
        rec(0, 0);
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
        if (!acc[i].is_zero()) out.set(out.exponents(i), acc[i]);
    return out;
}

RatFuncA leg_weight(int leg, int b) {
    const RatFuncA A = RatFuncA::a();
    if (leg == 1) return RatFuncA(1);
    if (leg == 2) return pow(A, -(2 + b));
    return pow(-A - 1, -(2 + b));
}

// dphi_b(x; alpha)/dx coefficients for exponents 0..order.
std::vector<RatFuncA> dphi_dx_series(int b, const RatFuncA& alpha, int order) {
    std::vector<RatFuncA> c(static_cast<std::size_t>(order + 1));
    for (int e = 0; e <= order; ++e)
        c[static_cast<std::size_t>(e)] = framing_factor(e + 1, alpha) * RatFuncA(pow(BigRat(e + 1), b + 1));
    return c;
}

std::vector<std::vector<BigRat>> inverse_vandermonde(int B) {
    const int n = B + 1;
    std::vector<std::vector<BigRat>> m(static_cast<std::size_t>(n), std::vector<BigRat>(2 * n));
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m[r][c] = pow(BigRat(r + 1), c);
        m[r][n + r] = 1;
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (is_zero(m[p][c])) ++p;
        std::swap(m[p], m[c]);
        BigRat inv = 1 / m[c][c];
        for (auto& x : m[c]) x *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == c || is_zero(m[r][c])) continue;
            BigRat f = m[r][c];
            for (int k = 0; k < 2 * n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    // rows of V^-1: m[b][n + r]
    std::vector<std::vector<BigRat>> inv(static_cast<std::size_t>(n), std::vector<BigRat>(n));
    for (int b = 0; b < n; ++b)
        for (int r = 0; r < n; ++r) inv[b][r] = m[b][n + r];
    return inv;
}

}  // namespace

template <class S>
S assemble_G(int g, const PartitionTriple& t, const HodgeProvider& hp, const S& a) {
    return assemble_core<S>(g, t, leg_weights(a), [&](const std::vector<int>& b) -> S {
        RatFuncA r = hp.correlator(g, b);
        if constexpr (std::is_same_v<S, RatFuncA>) return r;
        else return r.eval(a);
    });
}

template RatFuncA assemble_G<RatFuncA>(int, const PartitionTriple&, const HodgeProvider&, const RatFuncA&);
template BigRat assemble_G<BigRat>(int, const PartitionTriple&, const HodgeProvider&, const BigRat&);

BigRat assemble_G_w(int g, const PartitionTriple& t, const std::array<BigRat, 3>& w, const HodgeProvider& hp) {
    return assemble_core<BigRat>(g, t, w,
                                 [&](const std::vector<int>& b) -> BigRat { return hp.correlator_w(g, b, w); });
}

std::vector<std::pair<PartitionTriple, RatFuncA>> amplitude_table(int g, int max_size, const HodgeProvider& hp) {
    std::vector<std::pair<PartitionTriple, RatFuncA>> out;
    const RatFuncA A = RatFuncA::a();
    for (const auto& t : enumerate_triples(max_size)) out.emplace_back(t, assemble_G(g, t, hp, A));
    return out;
}

std::string amplitudes_csv(const std::vector<std::tuple<int, PartitionTriple, std::string>>& rows) {
    std::ostringstream os;
    os << "g,mu1,mu2,mu3,value\n";
    for (const auto& [g, t, v] : rows)
        os << g << ",\"" << t[0].to_string() << "\",\"" << t[1].to_string() << "\",\"" << t[2].to_string() << "\","
           << v << "\n";
    return os.str();
}

std::vector<RatFuncA> phi_series(int b, const RatFuncA& alpha, int order) {
    std::vector<RatFuncA> c(static_cast<std::size_t>(order + 1));
    for (int m = 1; m <= order; ++m)
        c[static_cast<std::size_t>(m)] = framing_factor(m, alpha) * RatFuncA(pow(BigRat(m), b));
    return c;
}

std::vector<RatFuncA> y_series(const RatFuncA& alpha, int order) {
    std::vector<RatFuncA> c(static_cast<std::size_t>(order + 1));
    c[0] = RatFuncA(1);
    for (int n = 1; n <= order; ++n) {
        RatFuncA p(1);
        for (int j = 0; j <= n - 2; ++j) p *= RatFuncA(BigRat(n)) * alpha + RatFuncA(BigRat(j));
        c[static_cast<std::size_t>(n)] = -p / RatFuncA(factorial(static_cast<unsigned>(n)));
    }
    return c;
}

std::vector<LegVar> leg_variables(const LegCounts& n) {
    std::vector<LegVar> v;
    for (int L = 0; L < 3; ++L)
        for (int j = 1; j <= n[static_cast<std::size_t>(L)]; ++j) v.push_back({L + 1, j});
    return v;
}

int total_slots(const LegCounts& n) { return n[0] + n[1] + n[2]; }

std::vector<int> slot_legs(const LegCounts& n) { return slot_exponent_legs(n); }

MSeries symmetrize_to_Phi(int g, const LegCounts& n, const HodgeProvider& hp, int order) {
    auto vars = leg_variables(n);
    MSeries out(vars, std::vector<int>(vars.size(), order));
    const auto legs = slot_legs(n);
    const RatFuncA A = RatFuncA::a();
    std::map<PartitionTriple, RatFuncA> cache;
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto e = out.exponents(i);
        if (std::find(e.begin(), e.end(), 0) != e.end()) continue;
        std::array<std::vector<int>, 3> parts;
        for (std::size_t k = 0; k < e.size(); ++k) parts[static_cast<std::size_t>(legs[k] - 1)].push_back(e[k]);
        PartitionTriple t{Partition(parts[0]), Partition(parts[1]), Partition(parts[2])};
        auto it = cache.find(t);
        if (it == cache.end())
            it = cache.emplace(t, RatFuncA(BigRat(triple_aut(t))) * assemble_G(g, t, hp, A)).first;
        out.set(e, it->second);
    }
    return out;
}

MSeries closed_Phi(int g, const LegCounts& n, const HodgeProvider& hp, int order) {
    const int N = total_slots(n);
    if (2 * g - 2 + N <= 0) throw std::invalid_argument("closed_Phi: unstable (g, n)");
    const int dim = 3 * g - 3 + N;
    const RatFuncA A = RatFuncA::a();
    const auto legs = slot_legs(n);
    std::map<std::vector<int>, RatFuncA> coeffs;
    const RatFuncA pref = pow(-A * (A + 1), N - 1);
    for_each_index(N, std::max(0, N - 3), dim, [&](const std::vector<int>& b) {
        RatFuncA br = hp.correlator(g, b);
        if (br.is_zero()) return;
        RatFuncA c = pref * br;
        for (int j = 0; j < N; ++j) c *= leg_weight(legs[j], b[j]);
        coeffs[b] = c;
    });
    std::vector<std::vector<std::vector<RatFuncA>>> table(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
        for (int b = 0; b <= dim; ++b) table[j].push_back(phi_series(b, leg_framing(legs[j], A), order));
    return tensor_series(leg_variables(n), order, coeffs, table);
}

Correlator<RatFuncA> assemble_W(int g, const LegCounts& n, const HodgeProvider& hp) {
    const int N = total_slots(n);
    if (2 * g - 2 + N <= 0) throw std::invalid_argument("assemble_W: unstable (g, n) has no basis form");
    const int dim = 3 * g - 3 + N;
    const RatFuncA A = RatFuncA::a();
    const auto legs = slot_legs(n);
    Correlator<RatFuncA> w;
    w.g = g;
    w.n = n;
    RatFuncA pref = pow(A * (A + 1), N - 1);
    if ((g + N) % 2) pref = -pref;
    for_each_index(N, std::max(0, N - 3), dim, [&](const std::vector<int>& b) {
        RatFuncA br = hp.correlator(g, b);
        if (br.is_zero()) return;
        RatFuncA c = pref * br;
        for (int j = 0; j < N; ++j) c *= leg_weight(legs[j], b[j]);
        w.coeffs[b] = c;
    });
    return w;
}

MSeries basis_to_series(const Correlator<RatFuncA>& w, int order) {
    const int N = w.slots();
    const RatFuncA A = RatFuncA::a();
    const auto legs = slot_legs(w.n);
    int bmax = 0;
    for (const auto& [b, c] : w.coeffs)
        for (int x : b) bmax = std::max(bmax, x);
    std::vector<std::vector<std::vector<RatFuncA>>> table(static_cast<std::size_t>(N));
    std::map<int, std::vector<std::vector<RatFuncA>>> per_leg;
    for (int j = 0; j < N; ++j) {
        auto it = per_leg.find(legs[j]);
        if (it == per_leg.end()) {
            std::vector<std::vector<RatFuncA>> t;
            for (int b = 0; b <= bmax; ++b) t.push_back(dphi_dx_series(b, leg_framing(legs[j], A), order));
            it = per_leg.emplace(legs[j], std::move(t)).first;
        }
        table[j] = it->second;
    }
    return tensor_series(leg_variables(w.n), order, w.coeffs, table);
}

MSeries W_series_from_amplitudes(int g, const LegCounts& n, const HodgeProvider& hp, int order) {
    MSeries phi = symmetrize_to_Phi(g, n, hp, order + 1);
    for (std::size_t k = 0; k < phi.variables().size(); ++k) phi = phi.derivative(k);
    if (g % 2 == 0) phi = -phi;
    return phi;
}

BasisFit series_to_basis(const MSeries& w, int g, const LegCounts& n, int bmax) {
    const int N = total_slots(n);
    if (static_cast<int>(w.variables().size()) != N) throw std::invalid_argument("series_to_basis: slot count mismatch");
    int order = *std::min_element(w.orders().begin(), w.orders().end());
    if (order < bmax) throw TruncationError("series_to_basis: need exponents up to " + std::to_string(bmax), bmax);
    const RatFuncA A = RatFuncA::a();
    const auto legs = slot_legs(n);
    const std::size_t side = static_cast<std::size_t>(bmax + 1);
    std::size_t total = 1;
    for (int j = 0; j < N; ++j) total *= side;
    std::vector<RatFuncA> t(total);
    std::vector<int> e(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t r = i;
        for (int j = N - 1; j >= 0; --j) {
            e[j] = static_cast<int>(r % side);
            r /= side;
        }
        t[i] = w.at(e);
    }
    const auto vinv = inverse_vandermonde(bmax);
    std::size_t stride = total;
    for (int j = 0; j < N; ++j) {
        stride /= side;
        const RatFuncA alpha = leg_framing(legs[j], A);
        std::vector<RatFuncA> scale(side);
        for (std::size_t m = 1; m <= side; ++m)
            scale[m - 1] = RatFuncA(1) / (framing_factor(static_cast<int>(m), alpha) * RatFuncA(BigRat(m)));
        for (std::size_t base = 0; base < total; ++base) {
            if ((base / stride) % side != 0) continue;
            std::vector<RatFuncA> f(side), c(side);
            for (std::size_t m = 0; m < side; ++m) f[m] = t[base + m * stride] * scale[m];
            for (std::size_t b = 0; b < side; ++b)
                for (std::size_t m = 0; m < side; ++m)
                    if (!is_zero(vinv[b][m])) c[b] += f[m] * RatFuncA(vinv[b][m]);
            for (std::size_t b = 0; b < side; ++b) t[base + b * stride] = c[b];
        }
    }
    BasisFit fit;
    fit.form.g = g;
    fit.form.n = n;
    for (std::size_t i = 0; i < total; ++i) {
        if (t[i].is_zero()) continue;
        std::size_t r = i;
        std::vector<int> b(static_cast<std::size_t>(N));
        for (int j = N - 1; j >= 0; --j) {
            b[j] = static_cast<int>(r % side);
            r /= side;
        }
        fit.form.coeffs[b] = t[i];
    }
    MSeries box = w.truncated(std::vector<int>(static_cast<std::size_t>(N), order));
    fit.residual = box - basis_to_series(fit.form, order);
    fit.residual_zero = fit.residual.is_zero();
    return fit;
}

nlohmann::json correlator_to_json(const Correlator<RatFuncA>& w) {
    nlohmann::json j;
    j["g"] = w.g;
    j["n"] = {w.n[0], w.n[1], w.n[2]};
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& [b, c] : w.coeffs) cs.push_back({{"b", b}, {"value", c.to_string()}});
    j["coefficients"] = cs;
    return j;
}

Correlator<RatFuncA> correlator_from_json(const nlohmann::json& j) {
    Correlator<RatFuncA> w;
    w.g = j.at("g").get<int>();
    auto n = j.at("n").get<std::vector<int>>();
    if (n.size() != 3) throw std::invalid_argument("correlator json: n must have three entries");
    w.n = {n[0], n[1], n[2]};
    for (const auto& c : j.at("coefficients")) {
        auto b = c.at("b").get<std::vector<int>>();
        if (static_cast<int>(b.size()) != w.slots()) throw std::invalid_argument("correlator json: index length");
        w.coeffs[b] = RatFuncA::parse(c.at("value").get<std::string>());
    }
    return w;
}

Correlator<RatFuncA> rotate_legs(const Correlator<RatFuncA>& w) {
    const RatFuncA A = RatFuncA::a();
    const RatFuncA a2 = leg_framing(2, A);
    Correlator<RatFuncA> r;
    r.g = w.g;
    r.n = {w.n[2], w.n[0], w.n[1]};
    const auto n1 = static_cast<std::ptrdiff_t>(w.n[0]), n2 = static_cast<std::ptrdiff_t>(w.n[1]);
    for (const auto& [b, c] : w.coeffs) {
        std::vector<int> nb(b.begin() + n1 + n2, b.end());
        nb.insert(nb.end(), b.begin(), b.begin() + n1);
        nb.insert(nb.end(), b.begin() + n1, b.begin() + n1 + n2);
        r.coeffs[nb] = c.subst(a2);
    }
    return r;
}

}  // namespace tvr
