#include "tvr/cutjoin.hpp"

#include <algorithm>
#include <future>
#include <thread>

#include "tvr/amplitudes.hpp"

namespace tvr {

namespace {

int lambda_power(int g, const PartitionTriple& t) { return 2 * g - 2 + total_length(t); }

// (value, multiplicity) pairs of a partition.
std::vector<std::pair<int, int>> distinct_parts(const Partition& p) {
    std::vector<std::pair<int, int>> out;
    for (int v : p.parts()) {
        if (!out.empty() && out.back().first == v) ++out.back().second;
        else out.emplace_back(v, 1);
    }
    return out;
}

using Parts = std::array<std::vector<int>, 3>;

Parts parts_of(const PartitionTriple& t) { return {t[0].parts(), t[1].parts(), t[2].parts()}; }

void remove_one(std::vector<int>& v, int x) { v.erase(std::find(v.begin(), v.end(), x)); }

// Gaussian rationals over Q(a), enough for the original-form check.
struct GaussA {
    RatFuncA re, im;
    GaussA() = default;
    explicit GaussA(const BigRat& r) : re(r) {}
    GaussA(RatFuncA r, RatFuncA i) : re(std::move(r)), im(std::move(i)) {}
    GaussA& operator+=(const GaussA& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend GaussA operator*(const GaussA& x, const GaussA& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend bool operator==(const GaussA& x, const GaussA& y) { return x.re == y.re && x.im == y.im; }
    GaussA derivative() const { return {re.derivative(), im.derivative()}; }
};

// sqrt(-1)^k
GaussA i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {RatFuncA(1), RatFuncA()};
        case 1: return {RatFuncA(), RatFuncA(1)};
        case 2: return {RatFuncA(-1), RatFuncA()};
        default: return {RatFuncA(), RatFuncA(-1)};
    }
}

template <class C>
std::map<CJKey, C> rhs_core(const std::map<CJKey, C>& in, int gmax, int smax, const C& overall, int join_sign,
                            const std::array<C, 3>& legc) {
    std::map<CJKey, C> out;
    auto add = [&](int g, const Parts& p, int src_lambda, const C& v) {
        PartitionTriple t{Partition(p[0]), Partition(p[1]), Partition(p[2])};
        if (g > gmax || total_size(t) > smax) return;
        if (lambda_power(g, t) != src_lambda) throw std::logic_error("cut-and-join: lambda power bookkeeping failed");
        auto it = out.find({g, t});
        if (it == out.end()) out.emplace(CJKey{g, t}, v);
        else it->second += v;
    };
    std::array<C, 3> lc;
    for (int L = 0; L < 3; ++L) lc[L] = overall * legc[L];

    std::vector<std::vector<const std::pair<const CJKey, C>*>> by_size(static_cast<std::size_t>(smax + 1));
    for (const auto& e : in) {
        int s = total_size(e.first.second);
        if (s <= smax) by_size[static_cast<std::size_t>(s)].push_back(&e);
    }

    for (const auto& [key, G] : in) {
        const auto& [g, t] = key;
        const int lam = lambda_power(g, t);
        for (int L = 0; L < 3; ++L) {
            const auto dp = distinct_parts(t[L]);
            // join: -(i+j) q_i q_j d/dq_{i+j}
            for (auto [k, m] : dp)
                for (int i = 1; i < k; ++i) {
                    Parts p = parts_of(t);
                    remove_one(p[L], k);
                    p[L].push_back(i);
                    p[L].push_back(k - i);
                    add(g, p, lam + 1, lc[L] * C(BigRat(join_sign * k * m)) * G);
                }
            // cut: i j q_{i+j} d2/dq_i dq_j
            for (auto [i, mi] : dp)
                for (auto [j, mj] : dp) {
                    const int mult = i == j ? mi * (mi - 1) : mi * mj;
                    if (mult == 0) continue;
                    Parts p = parts_of(t);
                    remove_one(p[L], i);
                    remove_one(p[L], j);
                    p[L].push_back(i + j);
                    add(g + 1, p, lam + 1, lc[L] * C(BigRat(i * j * mult)) * G);
                }
        }
        // nonlinear: i j q_{i+j} dG/dq_i dG/dq_j
        const int s1 = total_size(t);
        for (int s2 = 1; s1 + s2 <= smax; ++s2)
            for (const auto* other : by_size[static_cast<std::size_t>(s2)]) {
                const auto& [g2, t2] = other->first;
                if (g + g2 > gmax) continue;
                const int lam2 = lambda_power(g2, t2);
                for (int L = 0; L < 3; ++L) {
                    if (t[L].empty() || t2[L].empty()) continue;
                    const auto d1 = distinct_parts(t[L]), d2 = distinct_parts(t2[L]);
                    const C prod = lc[L] * G * other->second;
                    for (auto [i, mi] : d1)
                        for (auto [j, mj] : d2) {
                            Parts p = parts_of(t);
                            const Parts q = parts_of(t2);
                            for (int M = 0; M < 3; ++M) p[M].insert(p[M].end(), q[M].begin(), q[M].end());
                            remove_one(p[L], i);
                            remove_one(p[L], j);
                            p[L].push_back(i + j);
                            add(g + g2, p, lam + lam2 + 1, C(BigRat(i * j * mi * mj)) * prod);
                        }
                }
            }
    }
    return out;
}

std::array<RatFuncA, 3> leg_prefactors() {
    const RatFuncA A = RatFuncA::a();
    return {RatFuncA(1), 1 / (A * A), 1 / ((A + 1) * (A + 1))};
}

}  // namespace

GenFun GenFun::direct(int gmax, int size_max, const HodgeProvider& hp) {
    GenFun gf;
    gf.gmax = gmax;
    gf.size_max = size_max;
    const auto triples = enumerate_triples(size_max);
    const RatFuncA A = RatFuncA::a();
    std::vector<CJKey> keys;
    for (int g = 0; g <= gmax; ++g)
        for (const auto& t : triples) keys.emplace_back(g, t);
    std::vector<RatFuncA> values(keys.size());
    const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < keys.size(); i += workers)
                values[i] = assemble_G(keys[i].first, keys[i].second, hp, A);
        }));
    for (auto& j : jobs) j.get();
    for (std::size_t i = 0; i < keys.size(); ++i) gf.coeffs.emplace(keys[i], values[i]);
    return gf;
}

const RatFuncA& GenFun::at(int g, const PartitionTriple& t) const {
    auto it = coeffs.find({g, t});
    if (it == coeffs.end())
        throw CJDependencyError("generating function lacks genus " + std::to_string(g) + " triple " +
                                triple_to_string(t));
    return it->second;
}

void GenFun::require_complete() const {
    for (int g = 0; g <= gmax; ++g)
        for (const auto& t : enumerate_triples(size_max)) at(g, t);
    for (const auto& [k, v] : coeffs)
        if (k.first > gmax || total_size(k.second) > size_max || total_size(k.second) == 0)
            throw std::invalid_argument("generating function entry outside its bounds: " +
                                        triple_to_string(k.second));
}

GenFun apply_cj(const GenFun& gf) {
    gf.require_complete();
    GenFun out;
    out.gmax = gf.gmax;
    out.size_max = gf.size_max;
    out.coeffs = rhs_core<RatFuncA>(gf.coeffs, gf.gmax, gf.size_max, RatFuncA(rat(1, 2)), -1, leg_prefactors());
    for (const auto& [k, v] : gf.coeffs) out.coeffs.try_emplace(k);
    return out;
}

std::vector<CJCell> CJReport::mismatches() const {
    std::vector<CJCell> m;
    for (const auto& c : cells)
        if (!c.equal) m.push_back(c);
    return m;
}

bool CJReport::passed() const {
    return std::all_of(cells.begin(), cells.end(), [](const CJCell& c) { return c.equal; });
}

nlohmann::json CJReport::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : cells)
        j.push_back({{"g", c.g},
                     {"triple", triple_to_string(c.triple)},
                     {"lhs", c.lhs.to_string()},
                     {"rhs", c.rhs.to_string()},
                     {"equal", c.equal}});
    return j;
}

CJReport verify_cj(const GenFun& gf, int gmax, int size_max, int gmin) {
    if (gmax > gf.gmax || size_max > gf.size_max)
        throw CJDependencyError("verify_cj: requested cells exceed the generating function bounds");
    GenFun bounded;
    bounded.gmax = gmax;
    bounded.size_max = size_max;
    for (const auto& [k, v] : gf.coeffs)
        if (k.first <= gmax && total_size(k.second) <= size_max) bounded.coeffs.emplace(k, v);
    const GenFun rhs = apply_cj(bounded);
    CJReport rep;
    for (const auto& [k, v] : bounded.coeffs) {
        if (k.first < gmin) continue;
        CJCell c;
        c.g = k.first;
        c.triple = k.second;
        c.lhs = v.derivative();
        auto it = rhs.coeffs.find(k);
        if (it != rhs.coeffs.end()) c.rhs = it->second;
        c.equal = c.lhs == c.rhs;
        rep.cells.push_back(std::move(c));
    }
    return rep;
}

std::vector<PFormCell> check_p_form(const GenFun& gf, int size_max) {
    if (size_max > gf.size_max) throw CJDependencyError("check_p_form: size bound exceeds the generating function");
    std::map<CJKey, GaussA> in;
    for (const auto& [k, v] : gf.coeffs)
        if (k.first == 0 && total_size(k.second) <= size_max)
            in.emplace(k, i_power(-total_length(k.second)) * GaussA(v, RatFuncA()));
    auto c = leg_prefactors();
    std::array<GaussA, 3> legc{GaussA(c[0], {}), GaussA(c[1], {}), GaussA(c[2], {})};
    auto rhs = rhs_core<GaussA>(in, 0, size_max, GaussA(RatFuncA(), RatFuncA(rat(1, 2))), +1, legc);
    std::vector<PFormCell> out;
    for (const auto& [k, v] : in) {
        auto it = rhs.find(k);
        GaussA r = it == rhs.end() ? GaussA() : it->second;
        out.push_back({k.second, v.derivative() == r});
    }
    return out;
}

}  // namespace tvr
