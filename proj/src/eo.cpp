#include "tvr/eo.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "tvr/accum.hpp"

namespace tvr {

namespace {

// Bumped whenever the recursion output format or conventions change.
constexpr const char* kEngineVersion = "eo-basis-3";

template <class S>
S num(long k) {
    return S(BigRat(k));
}

template <class S>
UPoly<S> poly_mul(const UPoly<S>& x, const UPoly<S>& y) {
    if (x.empty() || y.empty()) return {};
    UPoly<S> r(x.size() + y.size() - 1, S(0));
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (tvr::is_zero(x[i])) continue;
        for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
    }
    return r;
}

LegCounts counts_with_leg1(const std::vector<int>& legs) {
    LegCounts c{1, 0, 0};
    for (int l : legs) ++c[static_cast<std::size_t>(l - 1)];
    return c;
}

bool stable(int g, int n) { return 2 * g - 2 + n > 0; }

}  // namespace

template <class S>
LocalCurve<S> build_local_curve(const S& a, int order) {
    using L = ZLaurent<S>;
    const S one(1);
    const S ap1 = S(a + one);
    LocalCurve<S> c;
    c.a = a;
    c.ystar = S(a / ap1);
    c.order = order;
    const int top = order + 3;
    L z = L::variable(top);
    c.lambda = (z * S(-ap1)).log1p() + (z * S(ap1 / a)).log1p() * a;
    const S lam2 = c.lambda.coeff(2);
    L ratio = c.lambda.shifted(-2) * S(one / lam2);
    L s = (ratio - L::constant(one, ratio.order())).sqrt1p().shifted(1);
    c.P = s.compose_inverse().compose(-s);
    c.dP = c.P.derivative();
    const S inv_ystar = S(one / c.ystar);
    c.omega = ((z * inv_ystar).log1p() - (c.P * inv_ystar).log1p()) * c.lambda.derivative();
    return c;
}

template <class S>
std::vector<UPoly<S>> leg_basis_polys(const S& alpha, int bmax) {
    const S one(1);
    const S ap1 = S(alpha + one);
    const S ys = S(alpha / ap1);
    // x d/dx in u = 1/(y - y*): (y*(1-y*) u^3 + (1-2y*) u^2 - u)/(alpha+1) d/du
    const UPoly<S> theta{S(0), S(-one / ap1), S((one - num<S>(2) * ys) / ap1), S(ys * (one - ys) / ap1)};
    UPoly<S> phi{S(-one / ap1), S(one / (ap1 * ap1))};
    std::vector<UPoly<S>> out;
    for (int b = 0; b <= bmax; ++b) {
        UPoly<S> d(phi.size() > 1 ? phi.size() - 1 : 0, S(0));
        for (std::size_t j = 1; j < phi.size(); ++j) d[j - 1] = phi[j] * num<S>(static_cast<long>(j));
        UPoly<S> D(d.size() + 2, S(0));
        for (std::size_t j = 0; j < d.size(); ++j) D[j + 2] = -d[j];
        out.push_back(D);
        phi = poly_mul(theta, d);
    }
    return out;
}

template LocalCurve<RatFuncA> build_local_curve(const RatFuncA&, int);
template LocalCurve<BigRat> build_local_curve(const BigRat&, int);
template std::vector<UPoly<RatFuncA>> leg_basis_polys(const RatFuncA&, int);
template std::vector<UPoly<BigRat>> leg_basis_polys(const BigRat&, int);

std::vector<CorrelatorKey> recursion_inputs(int g, const LegCounts& n) {
    std::vector<CorrelatorKey> out;
    auto push = [&](int gg, const LegCounts& c) {
        CorrelatorKey k{gg, c};
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    };
    const int N = total_slots(n);
    if (g >= 1 && !(g == 1 && N == 1)) push(g - 1, {n[0] + 1, n[1], n[2]});
    auto legs = slot_legs(n);
    std::vector<int> spec(legs.begin() + 1, legs.end());
    const int m = static_cast<int>(spec.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::vector<int> la, lb;
        for (int j = 0; j < m; ++j) (mask >> j & 1 ? la : lb).push_back(spec[static_cast<std::size_t>(j)]);
        for (int g1 = 0; g1 <= g; ++g1) {
            const int g2 = g - g1;
            const int na = 1 + static_cast<int>(la.size()), nb = 1 + static_cast<int>(lb.size());
            if (!stable(g1, na) && na == 1) continue;
            if (!stable(g2, nb) && nb == 1) continue;
            if (stable(g1, na)) push(g1, counts_with_leg1(la));
            if (stable(g2, nb)) push(g2, counts_with_leg1(lb));
        }
    }
    return out;
}

template <class S>
struct EOEngine<S>::Impl {
    using L = ZLaurent<S>;
    using Poly = std::map<std::vector<int>, Accum<S>>;

    S a;
    S ystar1;
    LocalCurve<S> curve;
    std::array<S, 3> alpha;
    std::array<std::vector<UPoly<S>>, 3> D;
    std::map<CorrelatorKey, Correlator<S>> store;
    std::vector<TruncationRecord> ledger;

    // z-dependent tables, rebuilt when the working order grows
    L inv_omega_half, inv_z_minus_P_sq;
    std::vector<L> K, Ppow, Pinv_pow;
    std::map<int, L> Dz, DP;
    std::map<std::pair<int, int>, L> X;
    std::map<std::tuple<int, int, int>, S> Rk;
    std::map<int, S> Ek;
    std::map<std::pair<int, int>, L> sig_z, sig_P;
    std::map<std::tuple<int, int, int>, UPoly<S>> TQ;
    std::map<std::tuple<int, int, int>, std::map<std::vector<int>, S>> SQ;
    L delta_z, fac_z, delta_P, fac_P;

    Impl(S a_, int order) : a(std::move(a_)) {
        ystar1 = S(a / S(a + S(1)));
        for (int l = 1; l <= 3; ++l) alpha[static_cast<std::size_t>(l - 1)] = leg_framing(l, a);
        rebuild(order);
    }

    void rebuild(int order) {
        curve = build_local_curve(a, order);
        const L z = L::variable(curve.P.order());
        inv_omega_half = curve.omega.inverse() * S(rat(1, 2));
        inv_z_minus_P_sq = (z - curve.P).inverse();
        inv_z_minus_P_sq = inv_z_minus_P_sq * inv_z_minus_P_sq;
        K.clear();
        Ppow.assign(1, L::constant(S(1), curve.P.order()));
        Pinv_pow.assign(1, L::constant(S(1), curve.P.order()));
        Dz.clear();
        DP.clear();
        X.clear();
        Rk.clear();
        Ek.clear();
        sig_z.clear();
        sig_P.clear();
        TQ.clear();
        SQ.clear();
        const S ap1 = S(a + S(1));
        const S ap1sq = S(ap1 * ap1);
        auto delta_of = [&](const L& t, L& delta, L& fac) {
            L inv = (L::constant(S(1), t.order()) - t * ap1).inverse();
            delta = t * inv * ap1sq;
            fac = inv * inv * ap1sq;
        };
        delta_of(z, delta_z, fac_z);
        delta_of(curve.P, delta_P, fac_P);
    }

    const UPoly<S>& Dpoly(int leg, int b) {
        auto& v = D[static_cast<std::size_t>(leg - 1)];
        if (static_cast<int>(v.size()) <= b) v = leg_basis_polys(alpha[static_cast<std::size_t>(leg - 1)], b + 2);
        return v[static_cast<std::size_t>(b)];
    }

    UPoly<S> q(int leg, int m) {
        const S c = num<S>(m + 1);
        if (leg != 3) {
            UPoly<S> r(static_cast<std::size_t>(m + 3), S(0));
            r.back() = c;
            return r;
        }
        // (m+1) u^2 (u/y* - 1)^m / y*^(m+2) with the leg-1 y*
        const S inv = S(S(1) / ystar1);
        UPoly<S> base{S(-1), inv}, r{S(1)};
        for (int i = 0; i < m; ++i) r = poly_mul(r, base);
        S f = c;
        for (int i = 0; i < m + 2; ++i) f *= inv;
        UPoly<S> out(r.size() + 2, S(0));
        for (std::size_t j = 0; j < r.size(); ++j) out[j + 2] = r[j] * f;
        return out;
    }

    const L& P_pow(int k) {
        while (static_cast<int>(Ppow.size()) <= k) Ppow.push_back(Ppow.back() * curve.P);
        return Ppow[static_cast<std::size_t>(k)];
    }

    const L& P_inv_pow(int k) {
        if (Pinv_pow.size() == 1) Pinv_pow.push_back(curve.P.inverse());
        while (static_cast<int>(Pinv_pow.size()) <= k) Pinv_pow.push_back(Pinv_pow.back() * Pinv_pow[1]);
        return Pinv_pow[static_cast<std::size_t>(k)];
    }

    const L& Kk(int k) {
        while (static_cast<int>(K.size()) <= k) {
            int j = static_cast<int>(K.size());
            L zk = L::monomial(S(1), j, curve.P.order() + j);
            K.push_back((zk - P_pow(j)) * inv_omega_half);
        }
        return K[static_cast<std::size_t>(k)];
    }

    // D_b(1/z) dz on leg 1
    const L& Dz_of(int b) {
        auto it = Dz.find(b);
        if (it != Dz.end()) return it->second;
        const auto& d = Dpoly(1, b);
        const int deg = static_cast<int>(d.size()) - 1;
        std::vector<S> c(static_cast<std::size_t>(deg + 1), S(0));
        for (int p = 0; p <= deg; ++p) c[static_cast<std::size_t>(deg - p)] = d[static_cast<std::size_t>(p)];
        return Dz.emplace(b, L(std::move(c), -deg, curve.P.order())).first->second;
    }

    // D_c(1/P) P' dz on leg 1
    const L& DP_of(int c) {
        auto it = DP.find(c);
        if (it != DP.end()) return it->second;
        const auto& d = Dpoly(1, c);
        L s = L::zero(curve.P.order());
        bool first = true;
        for (std::size_t p = 0; p < d.size(); ++p) {
            if (tvr::is_zero(d[p])) continue;
            L t = P_inv_pow(static_cast<int>(p)) * d[p];
            s = first ? t : s + t;
            first = false;
        }
        return DP.emplace(c, s * curve.dP).first->second;
    }

    const S& R(int b, int c, int k) {
        auto key = std::make_tuple(b, c, k);
        auto it = Rk.find(key);
        if (it != Rk.end()) return it->second;
        auto xi = X.find({b, c});
        if (xi == X.end()) xi = X.emplace(std::make_pair(b, c), Dz_of(b) * DP_of(c)).first;
        return Rk.emplace(key, residue_of_product(Kk(k), xi->second)).first->second;
    }

    const S& E(int k) {
        auto it = Ek.find(k);
        if (it != Ek.end()) return it->second;
        return Ek.emplace(k, residue_of_product(Kk(k), curve.dP * inv_z_minus_P_sq)).first->second;
    }

    // seed expansion sigma^L_m at z (with dz) and at P (with P' dz)
    const L& sigma(int leg, int m, bool at_P) {
        auto& memo = at_P ? sig_P : sig_z;
        auto it = memo.find({leg, m});
        if (it != memo.end()) return it->second;
        L r;
        if (leg == 2) {
            const L& delta = at_P ? delta_P : delta_z;
            const L& fac = at_P ? fac_P : fac_z;
            L pw = L::constant(S(1), delta.order());
            for (int i = 0; i < m; ++i) pw = pw * delta;
            r = pw * fac;
        } else {
            r = at_P ? P_pow(m) : L::monomial(S(1), m, curve.P.order() + m);
        }
        if (at_P) r = r * curve.dP;
        return memo.emplace(std::make_pair(leg, m), r).first->second;
    }

    // sum_m Res[K_k (sigma_m(z) D_c(1/P) P' + D_c(1/z) sigma_m(P))] q_m(u)
    const UPoly<S>& T(int leg, int c, int k) {
        auto key = std::make_tuple(leg, c, k);
        auto it = TQ.find(key);
        if (it != TQ.end()) return it->second;
        UPoly<S> out;
        for (int m = 0; m <= 2 * c + 3; ++m) {
            S r = residue_of_product(Kk(k), sigma(leg, m, false) * DP_of(c)) +
                  residue_of_product(Kk(k), Dz_of(c) * sigma(leg, m, true));
            if (tvr::is_zero(r)) continue;
            UPoly<S> qm = q(leg, m);
            if (out.size() < qm.size()) out.resize(qm.size(), S(0));
            for (std::size_t j = 0; j < qm.size(); ++j) out[j] += r * qm[j];
        }
        return TQ.emplace(key, std::move(out)).first->second;
    }

    // seed x seed, both orientations, as a polynomial in (u_s1, u_s2)
    const std::map<std::vector<int>, S>& Sq(int l1, int l2, int k) {
        auto key = std::make_tuple(l1, l2, k);
        auto it = SQ.find(key);
        if (it != SQ.end()) return it->second;
        std::map<std::vector<int>, Accum<S>> acc;
        for (int m1 = 0; m1 <= 2; ++m1)
            for (int m2 = 0; m1 + m2 <= 2; ++m2) {
                S r = residue_of_product(Kk(k), sigma(l1, m1, false) * sigma(l2, m2, true)) +
                      residue_of_product(Kk(k), sigma(l2, m2, false) * sigma(l1, m1, true));
                if (tvr::is_zero(r)) continue;
                UPoly<S> q1 = q(l1, m1), q2 = q(l2, m2);
                for (std::size_t i = 0; i < q1.size(); ++i)
                    for (std::size_t j = 0; j < q2.size(); ++j)
                        if (!tvr::is_zero(q1[i]) && !tvr::is_zero(q2[j]))
                            acc[{static_cast<int>(i), static_cast<int>(j)}].add_product(r, S(q1[i] * q2[j]));
            }
        std::map<std::vector<int>, S> out;
        for (auto& [e, v] : acc) {
            S x = v.value();
            if (!tvr::is_zero(x)) out.emplace(e, std::move(x));
        }
        return SQ.emplace(key, std::move(out)).first->second;
    }

    const Correlator<S>& need(int g, const LegCounts& n) {
        auto it = store.find({g, n});
        if (it == store.end()) throw std::logic_error("recursion input missing from the store");
        return it->second;
    }

    Correlator<S> step(int g, const LegCounts& n) {
        const int N = total_slots(n);
        const int dim = 3 * g - 3 + N;
        const int kmax = 2 * dim + 3;
        const auto legs = slot_legs(n);
        const std::vector<int> spec_legs(legs.begin() + 1, legs.end());
        const int m = N - 1;
        // spectator pattern (basis index, or -1 for a polynomial slot) -> polynomial in (u1, poly slots)
        std::map<std::vector<int>, Poly> acc;

        if (g >= 1) {
            if (g == 1 && N == 1) {
                for (int k = 1; k <= kmax; ++k)
                    if (!tvr::is_zero(E(k))) acc[{}][{k + 1}].add(E(k));
            } else {
                for (const auto& [key, C] : need(g - 1, {n[0] + 1, n[1], n[2]}).coeffs) {
                    std::vector<int> spec(key.begin() + 2, key.end());
                    auto& poly = acc[spec];
                    for (int k = 1; k <= kmax; ++k) {
                        const S& r = R(key[0], key[1], k);
                        if (!tvr::is_zero(r)) poly[{k + 1}].add_product(C, r);
                    }
                }
            }
        }

        for (unsigned mask = 0; mask < (1u << m); ++mask) {
            std::vector<int> ia, ib, la, lb;
            for (int j = 0; j < m; ++j) {
                bool in_a = mask >> j & 1;
                (in_a ? ia : ib).push_back(j);
                (in_a ? la : lb).push_back(spec_legs[static_cast<std::size_t>(j)]);
            }
            const int na = 1 + static_cast<int>(ia.size()), nb = 1 + static_cast<int>(ib.size());
            for (int g1 = 0; g1 <= g; ++g1) {
                const int g2 = g - g1;
                const bool sa = stable(g1, na), sb = stable(g2, nb);
                if ((!sa && na == 1) || (!sb && nb == 1)) continue;
                if (sa && sb) {
                    const auto& left = need(g1, counts_with_leg1(la));
                    const auto& right = need(g2, counts_with_leg1(lb));
                    std::vector<int> spec(static_cast<std::size_t>(m));
                    for (const auto& [kl, Cl] : left.coeffs) {
                        for (std::size_t j = 0; j < ia.size(); ++j) spec[static_cast<std::size_t>(ia[j])] = kl[j + 1];
                        for (const auto& [kr, Cr] : right.coeffs) {
                            for (std::size_t j = 0; j < ib.size(); ++j)
                                spec[static_cast<std::size_t>(ib[j])] = kr[j + 1];
                            const S prod = S(Cl * Cr);
                            auto& poly = acc[spec];
                            for (int k = 1; k <= kmax; ++k) {
                                const S& r = R(kl[0], kr[0], k);
                                if (!tvr::is_zero(r)) poly[{k + 1}].add_product(prod, r);
                            }
                        }
                    }
                } else if (!sa && sb) {
                    // seed on the single slot of A; T covers both orientations
                    const int s = ia[0];
                    const int ls = la[0];
                    const auto& right = need(g2, counts_with_leg1(lb));
                    std::vector<int> spec(static_cast<std::size_t>(m));
                    spec[static_cast<std::size_t>(s)] = -1;
                    for (const auto& [kr, Cr] : right.coeffs) {
                        for (std::size_t j = 0; j < ib.size(); ++j) spec[static_cast<std::size_t>(ib[j])] = kr[j + 1];
                        auto& poly = acc[spec];
                        for (int k = 1; k <= kmax; ++k) {
                            const auto& t = T(ls, kr[0], k);
                            for (std::size_t p = 0; p < t.size(); ++p)
                                if (!tvr::is_zero(t[p])) poly[{k + 1, static_cast<int>(p)}].add_product(Cr, t[p]);
                        }
                    }
                } else if (!sa && !sb && ia.size() == 1 && ia[0] == 0) {
                    auto& poly = acc[{-1, -1}];
                    for (int k = 1; k <= kmax; ++k)
                        for (const auto& [e, v] : Sq(la[0], lb[0], k)) poly[{k + 1, e[0], e[1]}].add(v);
                }
            }
        }

        Correlator<S> w;
        w.g = g;
        w.n = n;
        std::map<std::vector<int>, Accum<S>> out;
        for (auto& [spec, poly] : acc) fit_group(spec, poly, spec_legs, out);
        for (auto& [key, v] : out) {
            S x = v.value();
            if (!tvr::is_zero(x)) w.coeffs.emplace(key, std::move(x));
        }
        return w;
    }

    // Top-down fit of one group to products of D_b in u1 and the polynomial slots.
    void fit_group(const std::vector<int>& spec, Poly& poly, const std::vector<int>& spec_legs,
                   std::map<std::vector<int>, Accum<S>>& out) {
        std::vector<int> var_legs{1};
        std::vector<int> var_pos;
        for (std::size_t j = 0; j < spec.size(); ++j)
            if (spec[j] < 0) {
                var_legs.push_back(spec_legs[j]);
                var_pos.push_back(static_cast<int>(j));
            }
        std::map<std::vector<int>, S> p;
        for (auto& [e, v] : poly) {
            S x = v.value();
            if (!tvr::is_zero(x)) p.emplace(e, std::move(x));
        }
        const std::size_t nv = var_legs.size();
        while (!p.empty()) {
            auto top = std::prev(p.end());
            const std::vector<int> e = top->first;
            std::vector<int> bs(nv);
            S lead(1);
            for (std::size_t j = 0; j < nv; ++j) {
                if (e[j] < 2 || e[j] % 2)
                    throw EOFitError("recursion output has a term outside the basis span (exponent " +
                                     std::to_string(e[j]) + ")");
                bs[j] = e[j] / 2 - 1;
                lead *= Dpoly(var_legs[j], bs[j]).back();
            }
            const S coef = S(top->second / lead);
            // subtract coef * prod_j D_{b_j}(u_j)
            std::vector<int> idx(nv, 0);
            std::function<void(std::size_t, S)> sub = [&](std::size_t j, S c) {
                if (j == nv) {
                    auto it = p.find(idx);
                    if (it == p.end()) {
                        p.emplace(idx, S(-c));
                    } else {
                        it->second -= c;
                        if (tvr::is_zero(it->second)) p.erase(it);
                    }
                    return;
                }
                const UPoly<S> d = Dpoly(var_legs[j], bs[j]);
                for (std::size_t t = 0; t < d.size(); ++t) {
                    if (tvr::is_zero(d[t])) continue;
                    idx[j] = static_cast<int>(t);
                    sub(j + 1, S(c * d[t]));
                }
            };
            sub(0, coef);
            std::vector<int> key{bs[0]};
            key.insert(key.end(), spec.begin(), spec.end());
            for (std::size_t j = 0; j < var_pos.size(); ++j)
                key[static_cast<std::size_t>(var_pos[j] + 1)] = bs[j + 1];
            out[key].add(coef);
        }
    }

    void compute(int g, const LegCounts& n) {
        if (store.count({g, n})) return;
        const int N = total_slots(n);
        if (n[0] < 1) throw std::invalid_argument("recursion needs a slot on leg 1");
        if (!stable(g, N)) throw std::invalid_argument("recursion target must be stable");
        for (const auto& [gi, ni] : recursion_inputs(g, n)) compute(gi, ni);
        for (;;) {
            try {
                store.emplace(CorrelatorKey{g, n}, step(g, n));
                return;
            } catch (const TruncationError& e) {
                const int from = curve.order;
                const int to = from + std::max(8, from / 2);
                if (to > 600) throw;
                ledger.push_back({g, n, from, to, e.what()});
                rebuild(to);
            }
        }
    }
};

template <class S>
EOEngine<S>::EOEngine(S a, int initial_order) : impl_(std::make_unique<Impl>(std::move(a), initial_order)) {}
template <class S>
EOEngine<S>::~EOEngine() = default;
template <class S>
EOEngine<S>::EOEngine(EOEngine&&) noexcept = default;
template <class S>
EOEngine<S>& EOEngine<S>::operator=(EOEngine&&) noexcept = default;

template <class S>
const Correlator<S>& EOEngine<S>::compute(int g, const LegCounts& n) {
    impl_->compute(g, n);
    return impl_->store.at({g, n});
}

template <class S>
void EOEngine<S>::insert(Correlator<S> w) {
    CorrelatorKey k{w.g, w.n};
    impl_->store[k] = std::move(w);
}

template <class S>
bool EOEngine<S>::has(int g, const LegCounts& n) const {
    return impl_->store.count({g, n}) > 0;
}

template <class S>
const std::map<CorrelatorKey, Correlator<S>>& EOEngine<S>::store() const {
    return impl_->store;
}

template <class S>
const std::vector<TruncationRecord>& EOEngine<S>::truncation_ledger() const {
    return impl_->ledger;
}

template <class S>
int EOEngine<S>::working_order() const {
    return impl_->curve.order;
}

template <class S>
const LocalCurve<S>& EOEngine<S>::curve() const {
    return impl_->curve;
}

template class EOEngine<RatFuncA>;
template class EOEngine<BigRat>;

CorrelatorCache::CorrelatorCache(std::string dir, int order) : dir_(std::move(dir)), order_(order) {}

std::uint64_t CorrelatorCache::fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string cache_key_text(int g, const LegCounts& n, int order) {
    std::ostringstream s;
    s << "g=" << g << ";n=" << n[0] << "," << n[1] << "," << n[2] << ";order=" << order << ";v=" << kEngineVersion;
    return s.str();
}

}  // namespace

std::string CorrelatorCache::path_for(int g, const LegCounts& n) const {
    std::ostringstream s;
    s << std::hex << fnv1a(cache_key_text(g, n, order_));
    return (std::filesystem::path(dir_) / (s.str() + ".json")).string();
}

bool CorrelatorCache::load(int g, const LegCounts& n, Correlator<RatFuncA>& out) const {
    std::ifstream in(path_for(g, n));
    if (!in) return false;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception&) {
        return false;
    }
    if (!j.contains("key") || j["key"] != cache_key_text(g, n, order_)) return false;
    out = correlator_from_json(j.at("form"));
    return true;
}

void CorrelatorCache::save(const Correlator<RatFuncA>& w) const {
    std::filesystem::create_directories(dir_);
    nlohmann::json j;
    j["key"] = cache_key_text(w.g, w.n, order_);
    j["form"] = correlator_to_json(w);
    const std::string path = path_for(w.g, w.n);
    const std::string tmp = path + ".tmp";
    {
        std::ofstream o(tmp);
        if (!o) throw std::runtime_error("cannot write cache file " + tmp);
        o << j.dump(1) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

Correlator<RatFuncA> rotated_to(const std::map<CorrelatorKey, Correlator<RatFuncA>>& forms, int g,
                                const LegCounts& n) {
    if (auto it = forms.find({g, n}); it != forms.end()) return it->second;
    // one rotation sends (n1, n2, n3) to (n3, n1, n2)
    LegCounts src = n;
    for (int r = 1; r <= 2; ++r) {
        src = {src[1], src[2], src[0]};
        auto it = forms.find({g, src});
        if (it == forms.end()) continue;
        Correlator<RatFuncA> w = it->second;
        for (int i = 0; i < r; ++i) w = rotate_legs(w);
        return w;
    }
    throw std::invalid_argument("no stored form rotates to the requested leg counts");
}

RecursionRun run_recursion_targets(const std::vector<CorrelatorKey>& targets, const std::string& cache_dir,
                                   int order) {
    RecursionRun run;
    EOEngine<RatFuncA> eng(RatFuncA::a(), order > 0 ? order : 24);
    std::optional<CorrelatorCache> cache;
    if (!cache_dir.empty()) cache.emplace(cache_dir, order);
    std::set<CorrelatorKey> from_cache;
    for (const auto& [g, n] : targets) {
        if (n[0] < 1) throw std::invalid_argument("recursion targets need a slot on leg 1");
        Correlator<RatFuncA> w;
        if (cache && cache->load(g, n, w)) {
            eng.insert(std::move(w));
            from_cache.insert({g, n});
            ++run.cache_hits;
        }
    }
    for (const auto& [g, n] : targets) {
        const auto& w = eng.compute(g, n);
        run.forms.emplace(CorrelatorKey{g, n}, w);
        if (cache && !from_cache.count({g, n})) cache->save(w);
    }
    run.truncations = eng.truncation_ledger();
    return run;
}

RecursionRun run_recursion(int gmax, int nmax, const std::string& cache_dir, int order) {
    std::vector<CorrelatorKey> direct, rotated;
    for (int g = 0; g <= gmax; ++g)
        for (int N = 1; N <= nmax; ++N)
            for (int n1 = N; n1 >= 0; --n1)
                for (int n2 = N - n1; n2 >= 0; --n2)
                    if (stable(g, N)) (n1 >= 1 ? direct : rotated).push_back({g, {n1, n2, N - n1 - n2}});
    RecursionRun run = run_recursion_targets(direct, cache_dir, order);
    for (const auto& [g, n] : rotated) run.forms.emplace(CorrelatorKey{g, n}, rotated_to(run.forms, g, n));
    return run;
}

std::vector<EOComparison> compare_with_direct(const RecursionRun& run, const HodgeProvider& hp, int series_order,
                                              int series_max_slots) {
    std::vector<CorrelatorKey> keys;
    for (const auto& [k, w] : run.forms) keys.push_back(k);
    std::vector<EOComparison> out(keys.size());
    std::vector<std::future<void>> jobs;
    for (std::size_t i = 0; i < keys.size(); ++i)
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const auto& [g, n] = keys[i];
            const auto& w = run.forms.at(keys[i]);
            auto direct = assemble_W(g, n, hp);
            EOComparison c;
            c.g = g;
            c.n = n;
            c.basis_equal = w == direct;
            if (series_order >= 0 && w.slots() <= series_max_slots) {
                c.series_checked = true;
                c.series_equal = basis_to_series(w, series_order) == basis_to_series(direct, series_order);
            }
            out[i] = c;
        }));
    for (auto& j : jobs) j.get();
    return out;
}

GenusLoopResult run_genus_loop(int g, int nmax, int size_max, const HodgeProvider& hp, const std::string& cache_dir) {
    GenusLoopResult res;
    std::vector<CorrelatorKey> targets;
    for (int n = 1; n <= nmax; ++n)
        if (stable(g, n)) targets.push_back({g, {n, 0, 0}});
    const unsigned long before = hp.calls_at_positive_genus();
    res.run = run_recursion_targets(targets, cache_dir);
    res.positive_genus_calls_during_recursion = hp.calls_at_positive_genus() - before;
    HodgeProvider extended = hp;
    for (const auto& [g2, n] : targets) {
        auto br = extract_brackets(res.run.forms.at({g2, n}));
        install_brackets(extended, g, br);
        res.brackets.emplace(n[0], std::move(br));
    }
    GenFun gf = GenFun::direct(g, size_max, extended);
    res.report = verify_cj(gf, g, size_max, g);
    return res;
}

namespace {

void for_each_bracket_index(int N, int dim, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> b(static_cast<std::size_t>(N), 0);
    std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == N) {
            f(b);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            b[static_cast<std::size_t>(j)] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, dim);
}

}  // namespace

std::map<std::vector<int>, PolyA> extract_brackets(const Correlator<RatFuncA>& w) {
    if (w.n[1] != 0 || w.n[2] != 0) throw std::invalid_argument("bracket extraction needs a leg-1 form");
    const int N = w.slots();
    const int dim = 3 * w.g - 3 + N;
    const RatFuncA A = RatFuncA::a();
    RatFuncA pref = pow(A * (A + 1), N - 1);
    if ((w.g + N) % 2) pref = -pref;
    std::map<std::vector<int>, PolyA> out;
    for_each_bracket_index(N, dim, [&](const std::vector<int>& b) {
        auto it = w.coeffs.find(b);
        RatFuncA br = it == w.coeffs.end() ? RatFuncA() : it->second / pref;
        if (!br.is_polynomial() || br.num().degree() > 3 * w.g)
            throw std::runtime_error("extracted bracket is not a polynomial of degree <= 3g: " + br.to_string());
        PolyA p = br.num() * (BigRat(1) / br.den().coeff(0));
        out.emplace(b, p);
    });
    return out;
}

std::map<std::vector<int>, PolyA> extract_brackets_interpolated(int g, int n1, const std::vector<BigRat>& points) {
    const int deg = 3 * g;
    if (static_cast<int>(points.size()) < deg + 1) throw std::invalid_argument("interpolation needs 3g+1 points");
    const int N = n1;
    const int dim = 3 * g - 3 + N;
    std::vector<std::map<std::vector<int>, BigRat>> values;
    for (const auto& p : points) {
        EOEngine<BigRat> eng(p);
        const auto& w = eng.compute(g, {n1, 0, 0});
        BigRat pref = pow(BigRat(p * (p + 1)), N - 1);
        if ((g + N) % 2) pref = -pref;
        std::map<std::vector<int>, BigRat> v;
        for (const auto& [b, c] : w.coeffs) v[b] = c / pref;
        values.push_back(std::move(v));
    }
    std::map<std::vector<int>, PolyA> out;
    for_each_bracket_index(N, dim, [&](const std::vector<int>& b) {
        auto at = [&](std::size_t i) {
            auto it = values[i].find(b);
            return it == values[i].end() ? BigRat(0) : it->second;
        };
        // Lagrange form on the first deg+1 points
        PolyA r;
        for (int i = 0; i <= deg; ++i) {
            PolyA basis(1);
            BigRat den = 1;
            for (int j = 0; j <= deg; ++j) {
                if (j == i) continue;
                basis *= PolyA{BigRat(-points[static_cast<std::size_t>(j)]), BigRat(1)};
                den *= points[static_cast<std::size_t>(i)] - points[static_cast<std::size_t>(j)];
            }
            r += basis * BigRat(at(static_cast<std::size_t>(i)) / den);
        }
        for (std::size_t i = static_cast<std::size_t>(deg) + 1; i < points.size(); ++i)
            if (r.eval(points[i]) != at(i))
                throw std::runtime_error("interpolated bracket disagrees at a check point");
        out.emplace(b, r);
    });
    return out;
}

void install_brackets(HodgeProvider& hp, int g, const std::map<std::vector<int>, PolyA>& brackets) {
    for (const auto& [b, p] : brackets) hp.set_extracted(g, b, p);
}

}  // namespace tvr
