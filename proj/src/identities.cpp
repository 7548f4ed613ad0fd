#include "tvr/identities.hpp"

#include <functional>
#include <future>
#include <sstream>

namespace tvr {

namespace {

const RatFuncA& A() {
    static const RatFuncA a = RatFuncA::a();
    return a;
}

std::vector<int> box(std::size_t n, int order) { return std::vector<int>(n, order); }

MSeries constant(const std::vector<LegVar>& v, int order, const RatFuncA& c) {
    return MSeries::constant(v, box(v.size(), order), c);
}

// y(x_k; alpha)
MSeries y_in(const std::vector<LegVar>& v, int order, std::size_t k, const RatFuncA& alpha) {
    return MSeries::in_variable(v, box(v.size(), order), k, y_series(alpha, order));
}

// (1 - y(x_k; alpha)) / x_k, constant term 1
MSeries r_in(const std::vector<LegVar>& v, int order, std::size_t k, const RatFuncA& alpha) {
    auto y = y_series(alpha, order + 1);
    std::vector<RatFuncA> c(static_cast<std::size_t>(order + 1));
    for (int m = 0; m <= order; ++m) c[m] = -y[m + 1];
    return MSeries::in_variable(v, box(v.size(), order), k, c);
}

// (y(x_2) - y(x_1)) / (x_1 - x_2) = sum_{i,j} c_{i+j+1} x_1^i x_2^j with y = 1 - sum c_n x^n
MSeries difference_quotient(const std::vector<LegVar>& v, int order, const RatFuncA& alpha) {
    auto y = y_series(alpha, 2 * order + 1);
    MSeries q(v, box(2, order));
    for (int i = 0; i <= order; ++i)
        for (int j = 0; j <= order; ++j) q.set({i, j}, -y[i + j + 1]);
    return q;
}

MSeries phi_in(const std::vector<LegVar>& v, int order, std::size_t k, int b, const RatFuncA& alpha) {
    return MSeries::in_variable(v, box(v.size(), order), k, phi_series(b, alpha, order));
}

MSeries crop(const MSeries& s, int order) {
    std::vector<int> o = s.orders();
    for (auto& x : o) x = std::min(x, order);
    return s.truncated(o);
}

MSeries crop_square(const MSeries& s) {
    int o = *std::min_element(s.orders().begin(), s.orders().end());
    return crop(s, o);
}

std::string leg_name(int leg) { return "leg " + std::to_string(leg); }

struct Suite {
    int N;
    std::vector<IdentityResult> out;

    void compare(const std::string& name, const MSeries& lhs, const MSeries& rhs) {
        IdentityResult r;
        r.name = name;
        std::vector<int> o(lhs.orders().size());
        for (std::size_t k = 0; k < o.size(); ++k) o[k] = std::min({N, lhs.orders()[k], rhs.orders()[k]});
        if (*std::min_element(o.begin(), o.end()) < N) {
            r.detail = "series known only to smaller order";
            out.push_back(r);
            return;
        }
        MSeries d = lhs.truncated(o) - rhs.truncated(o);
        r.pass = d.is_zero();
        std::ostringstream os;
        if (r.pass) {
            os << "zero residual through x^" << N << " in " << o.size() << " variable(s)";
        } else {
            for (std::size_t i = 0; i < d.size(); ++i)
                if (!d.at_index(i).is_zero()) {
                    auto e = d.exponents(i);
                    os << "residual at exponent (";
                    for (std::size_t k = 0; k < e.size(); ++k) os << (k ? "," : "") << e[k];
                    os << "): " << d.at_index(i).to_string();
                    break;
                }
        }
        r.detail = os.str();
        out.push_back(r);
    }

    // Blocks run concurrently, each into its own Suite; results keep block order.
    std::vector<std::pair<std::string, std::function<void(Suite&)>>> blocks;

    void guarded(const std::string& name, std::function<void(Suite&)> f) { blocks.emplace_back(name, std::move(f)); }

    void run() {
        std::vector<std::future<std::vector<IdentityResult>>> jobs;
        for (auto& [name, f] : blocks)
            jobs.push_back(std::async(std::launch::async, [this, name = name, f = f] {
                Suite local{N, {}, {}};
                try {
                    f(local);
                } catch (const std::exception& e) {
                    local.out.push_back({name, false, std::string("exception: ") + e.what()});
                }
                return local.out;
            }));
        for (auto& j : jobs)
            for (auto& r : j.get()) out.push_back(std::move(r));
    }
};

int next_leg(int L) { return L % 3 + 1; }

LegCounts unit(int L) {
    LegCounts n{0, 0, 0};
    n[L - 1] = 1;
    return n;
}

}  // namespace

MSeries unstable_Phi(const LegCounts& n, int order) {
    const auto vars = leg_variables(n);
    const int total = total_slots(n);
    if (total == 1) {
        const int L = vars[0].leg;
        return phi_in(vars, order, 0, -2, leg_framing(L, A()));
    }
    if (total != 2) throw std::invalid_argument("unstable_Phi: one or two points only");
    if (vars[0].leg == vars[1].leg) {
        const RatFuncA al = leg_framing(vars[0].leg, A());
        return -difference_quotient(vars, order, al).log() + r_in(vars, order, 0, al).log() +
               r_in(vars, order, 1, al).log();
    }
    // two legs: first leg f, second leg next_leg(f)
    std::size_t f = 0, s = 1;
    if (next_leg(vars[0].leg) != vars[1].leg) std::swap(f, s);
    const MSeries yf = y_in(vars, order, f, leg_framing(vars[f].leg, A()));
    const MSeries ys = y_in(vars, order, s, leg_framing(vars[s].leg, A()));
    const MSeries one = constant(vars, order, RatFuncA(1));
    return -(one - ys + yf * ys).log() + yf.log();
}

MSeries unstable_W(const LegCounts& n, int order) {
    MSeries phi = unstable_Phi(n, order + 1);
    for (std::size_t k = 0; k < phi.variables().size(); ++k) phi = phi.derivative(k);
    return -phi;
}

std::vector<IdentityResult> verify_identities(int N) {
    if (N < 1) throw std::invalid_argument("verify_identities: N >= 1");
    Suite S{N, {}, {}};
    HodgeProvider hp;
    const RatFuncA a = A();

    for (int L = 1; L <= 3; ++L) {
        const RatFuncA al = leg_framing(L, a);
        const LegCounts n = unit(L);
        const auto v = leg_variables(n);
        const std::string tag = " (" + leg_name(L) + ")";
        S.guarded("one-point Phi" + tag, [=, &hp](Suite& S) {
            MSeries phi = symmetrize_to_Phi(0, n, hp, N);
            MSeries y = y_in(v, N, 0, al);
            S.compare("one-point Phi equals phi_{-2}" + tag, phi, phi_in(v, N, 0, -2, al));
            S.compare("one-point Phi equals closed form" + tag, phi, unstable_Phi(n, N));
            S.compare("x d/dx of one-point Phi equals phi_{-1}" + tag, phi.euler(0), phi_in(v, N, 0, -1, al));
            S.compare("phi_{-1} equals -ln y" + tag, phi_in(v, N, 0, -1, al), -y.log());
            MSeries one = constant(v, N, RatFuncA(1));
            S.compare("curve equation x y' (alpha - (alpha+1) y) = y (1 - y)" + tag,
                      y.euler(0) * (constant(v, N, al) - (al + 1) * y), y * (one - y));
            // 1/(1-y) = 1/(x r): x * (x d/dx) of it against x y / ((1-y)(alpha - (alpha+1) y))
            MSeries r = r_in(v, N + 1, 0, al);
            MSeries yy = y_in(v, N + 1, 0, al);
            MSeries lhs = -(r + r.euler(0)) * (r * r).inverse();
            MSeries rhs = yy * (r * (constant(v, N + 1, al) - (al + 1) * yy)).inverse();
            S.compare("x d/dx of 1/(1-y) equals y/((1-y)(alpha-(alpha+1)y))" + tag, lhs, rhs);
            // W_0(x) = ln y dx / x
            MSeries w = unstable_W(n, N);
            MSeries ly = y_in(v, N + 1, 0, al).log();
            MSeries shifted(v, box(1, N));
            for (int m = 0; m <= N; ++m) shifted.set({m}, ly.at({m + 1}));
            S.compare("one-point W_0 equals ln y / x" + tag, w, shifted);
        });
    }
    S.guarded("second framing", [=](Suite& S) {
        // curve equation at a_2 in the displayed form -a y(1-y)/((a+1) - y)
        const std::vector<LegVar> v{{2, 1}};
        MSeries y = y_in(v, N, 0, leg_framing(2, a));
        MSeries one = constant(v, N, RatFuncA(1));
        S.compare("curve equation at the second framing", y.euler(0) * (constant(v, N, a + 1) - y),
                  -a * y * (one - y));
    });

    for (int L = 1; L <= 3; ++L) {
        const RatFuncA al = leg_framing(L, a);
        LegCounts n{0, 0, 0};
        n[L - 1] = 2;
        const auto v = leg_variables(n);
        const std::string tag = " (" + leg_name(L) + ")";
        S.guarded("same-leg two-point" + tag, [=, &hp](Suite& S) {
            MSeries phi = symmetrize_to_Phi(0, n, hp, N);
            // defining double sum -alpha(alpha+1) sum LF LF x^m1 x^m2 / (m1 + m2)
            MSeries ds(v, box(2, N));
            auto lf = phi_series(0, al, N);
            for (int m1 = 1; m1 <= N; ++m1)
                for (int m2 = 1; m2 <= N; ++m2)
                    ds.set({m1, m2}, -al * (al + 1) * lf[m1] * lf[m2] / RatFuncA(BigRat(m1 + m2)));
            S.compare("same-leg Phi equals its double sum" + tag, phi, ds);
            S.compare("same-leg Phi equals the log of the difference quotient" + tag, phi, unstable_Phi(n, N));
            MSeries y1 = y_in(v, N, 0, al), y2 = y_in(v, N, 1, al);
            MSeries one = constant(v, N, RatFuncA(1));
            MSeries f1 = (y1 - one) * ((al + 1) * y1 - constant(v, N, al)).inverse();
            MSeries f2 = (y2 - one) * ((al + 1) * y2 - constant(v, N, al)).inverse();
            S.compare("Euler operator on same-leg Phi" + tag, phi.euler(0) + phi.euler(1), -al * (al + 1) * f1 * f2);

            // x1 d/dx1 Phi = (x1 y1'/Q + x2)/(x1 - x2) - y1'/r1
            const int o1 = 2 * N + 1;
            {
                MSeries q = difference_quotient(v, o1, al);
                MSeries ya = y_in(v, o1, 0, al);
                // divide_by_difference reads total degree <= o1 only
                MSeries num = MSeries::product_to_total(ya.euler(0), q.inverse_to_total(o1), o1) +
                              MSeries::variable(v, box(2, o1), 1);
                MSeries part = crop_square(num).divide_by_difference(0, 1, 1);
                MSeries y1d = y_in(v, N + 1, 0, al).derivative(0);
                MSeries rhs = crop(part, N) - crop(y1d * r_in(v, N, 0, al).inverse(), N);
                S.compare("first derivative of same-leg Phi" + tag, phi.euler(0), rhs);
            }
            // d1 d2 Phi = (Q^2 - y1' y2') / (Q^2 (x1 - x2)^2)
            const int o2 = 2 * N + 2;
            {
                MSeries q = difference_quotient(v, o2 + 1, al);
                MSeries ya = y_in(v, o2 + 1, 0, al).derivative(0), yb = y_in(v, o2 + 1, 1, al).derivative(1);
                MSeries q2 = crop(MSeries::product_to_total(q, q, o2), o2);
                MSeries yy = crop(MSeries::product_to_total(ya, yb, o2), o2);
                MSeries num = MSeries::product_to_total(q2 - yy, q2.inverse_to_total(o2), o2);
                MSeries rhs = num.divide_by_difference(0, 1, 2);
                MSeries lhs = symmetrize_to_Phi(0, n, hp, N + 1).derivative(0).derivative(1);
                S.compare("mixed second derivative of same-leg Phi" + tag, lhs, rhs);
                S.compare("same-leg W_0 is minus the mixed derivative" + tag, unstable_W(n, N), -lhs);
            }
        });
    }

    for (int L = 1; L <= 3; ++L) {
        const int M = next_leg(L);
        const RatFuncA al = leg_framing(L, a), be = leg_framing(M, a);
        LegCounts n{0, 0, 0};
        n[L - 1] = 1;
        n[M - 1] = 1;
        const auto v = leg_variables(n);
        const std::size_t f = v[0].leg == L ? 0 : 1, s = 1 - f;
        const std::string tag = " (" + leg_name(L) + ", " + leg_name(M) + ")";
        S.guarded("two-leg two-point" + tag, [=, &hp](Suite& S) {
            MSeries phi = symmetrize_to_Phi(0, n, hp, N);
            // -(alpha+1) sum LF(alpha) LF(beta) x_f^m x_s^k / (m alpha + k)
            MSeries ds(v, box(2, N));
            auto lf = phi_series(0, al, N), ls = phi_series(0, be, N);
            for (int m = 1; m <= N; ++m)
                for (int k = 1; k <= N; ++k) {
                    std::vector<int> e(2);
                    e[f] = m;
                    e[s] = k;
                    ds.set(e, -(al + 1) * lf[m] * ls[k] / (RatFuncA(BigRat(m)) * al + RatFuncA(BigRat(k))));
                }
            S.compare("two-leg Phi equals its double sum" + tag, phi, ds);
            S.compare("two-leg Phi equals the log form in 1/(1-y) and y" + tag, phi, unstable_Phi(n, N));

            MSeries yf = y_in(v, N, f, al), ys = y_in(v, N, s, be);
            MSeries one = constant(v, N, RatFuncA(1));
            MSeries den = one - ys + yf * ys;
            MSeries rhs = al * (yf - one) * (ys - one) *
                          ((yf - constant(v, N, al / (al + 1))) * (ys - constant(v, N, al + 1))).inverse();
            S.compare("weighted Euler operator on two-leg Phi" + tag, al * phi.euler(f) + phi.euler(s), rhs);

            // x_f d/dx_f Phi = -s/(1 - ys + yf ys) + s/yf with s = x_f yf'/(1 - yf)
            MSeries yfd = y_in(v, N + 1, f, al).derivative(f);
            MSeries sf = yfd * r_in(v, N, f, al).inverse();
            S.compare("first derivative in the first leg" + tag, phi.euler(f),
                      -sf * den.inverse() + sf * yf.inverse());
            // x_s d/dx_s Phi = x_s ys' (1 - yf) / (1 - ys + yf ys)
            S.compare("first derivative in the second leg" + tag, phi.euler(s),
                      ys.euler(s) * (one - yf) * den.inverse());
            // d_f d_s Phi = -yf' ys' / (1 - ys + yf ys)^2
            MSeries phi1 = symmetrize_to_Phi(0, n, hp, N + 1);
            MSeries yf1 = y_in(v, N + 1, f, al), ys1 = y_in(v, N + 1, s, be);
            MSeries den1 = constant(v, N + 1, RatFuncA(1)) - ys1 + yf1 * ys1;
            MSeries d2 = phi1.derivative(0).derivative(1);
            MSeries r2 = -(yf1.derivative(f) * ys1.derivative(s)) * (den1 * den1).inverse();
            S.compare("mixed second derivative of two-leg Phi" + tag, d2, r2);
            S.compare("two-leg W_0 is minus the mixed derivative" + tag, unstable_W(n, N), -d2);
        });
    }

    S.guarded("rotated two-leg Phi", [=, &hp](Suite& S) {
        // Phi_{0;1,1,0} with a -> a_2 is Phi_{0;0,1,1}; Phi_{0;0,1,1} with a -> a_2 is Phi_{0;1,0,1}
        const RatFuncA a2 = leg_framing(2, a);
        MSeries p12 = symmetrize_to_Phi(0, {1, 1, 0}, hp, N).subst(a2);
        MSeries p23 = symmetrize_to_Phi(0, {0, 1, 1}, hp, N);
        MSeries p31 = symmetrize_to_Phi(0, {1, 0, 1}, hp, N);
        MSeries p23r = p23.subst(a2);
        MSeries r1(p23.variables(), box(2, N)), r2(p31.variables(), box(2, N));
        for (int i = 0; i <= N; ++i)
            for (int j = 0; j <= N; ++j) {
                r1.set({i, j}, p12.at({i, j}));
                r2.set({j, i}, p23r.at({i, j}));
            }
        S.compare("two-leg Phi under the framing rotation, legs (1,2) to (2,3)", r1, p23);
        S.compare("two-leg Phi under the framing rotation, legs (2,3) to (3,1)", r2, p31);
    });
    S.run();
    return S.out;
}

}  // namespace tvr
