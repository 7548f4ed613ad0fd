#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tvr/eo.hpp"

using namespace tvr;

namespace {

using LB = ZLaurent<BigRat>;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// Power series in x from a coefficient list evaluated at a.
LB series_at(const std::vector<RatFuncA>& c, const BigRat& a) {
    std::vector<BigRat> v;
    for (const auto& x : c) v.push_back(x.eval(a));
    return LB(v, 0, static_cast<int>(v.size()));
}

bool same_numeric(const Correlator<BigRat>& w, const Correlator<RatFuncA>& direct, const BigRat& a) {
    if (w.coeffs.size() != direct.coeffs.size()) return false;
    for (const auto& [k, v] : direct.coeffs) {
        auto it = w.coeffs.find(k);
        if (it == w.coeffs.end() || it->second != v.eval(a)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("local curve at a rational point") {
    const BigRat a = rat(2, 7);
    auto c = build_local_curve(a, 16);
    const BigRat ap1 = a + 1;
    CHECK(c.ystar == a / ap1);
    CHECK(c.lambda.coeff(1) == 0);
    CHECK(c.lambda.coeff(2) == BigRat(-ap1 * ap1 * ap1 / (2 * a)));
    CHECK(c.P.coeff(1) == -1);
    CHECK(c.P.compose(c.P) == LB::variable(c.P.order()));
    CHECK(c.P.order() >= 16);
    auto diff = c.lambda.compose(c.P) - c.lambda;
    CHECK(diff.is_zero());
    CHECK(diff.order() >= 16);
    CHECK(c.lambda.derivative().coeff(1) == BigRat(-ap1 * ap1 * ap1 / a));
    CHECK(c.omega.low() == 2);
    CHECK(c.omega.coeff(2) == BigRat(-2 * ap1 * ap1 * ap1 * ap1 / (a * a)));
}

TEST_CASE("local curve with symbolic a") {
    const RatFuncA A = RatFuncA::a();
    auto c = build_local_curve(A, 10);
    using L = ZLaurent<RatFuncA>;
    CHECK(c.lambda.coeff(2) == -(A + 1) * (A + 1) * (A + 1) / (2 * A));
    CHECK(c.P.compose(c.P) == L::variable(c.P.order()));
    CHECK((c.lambda.compose(c.P) - c.lambda).is_zero());
    CHECK(c.omega.coeff(2) == -2 * pow(A + 1, 4) / (A * A));
}

TEST_CASE("basis polynomials reproduce dphi_b / dx") {
    // D_b(u(y(x))) y'(x) against the series of d/dx phi_b, on all three legs
    const BigRat a = rat(3, 5);
    const int order = 8;
    const RatFuncA A = RatFuncA::a();
    for (int leg = 1; leg <= 3; ++leg) {
        const RatFuncA alpha = leg_framing(leg, A);
        const BigRat al = alpha.eval(a);
        const BigRat ys = al / (al + 1);
        LB y = series_at(y_series(alpha, order), a);
        LB u = (y - LB::constant(ys, order + 1)).inverse();
        auto D = leg_basis_polys(al, 3);
        for (int b = 0; b <= 3; ++b) {
            REQUIRE(static_cast<int>(D[b].size()) == 2 * b + 3);
            CHECK(D[b][0] == 0);
            CHECK(D[b][1] == 0);
            LB lhs = LB::zero(order + 1);
            LB up = LB::constant(1, order + 1);
            for (std::size_t p = 0; p < D[b].size(); ++p) {
                lhs = lhs + up * D[b][p];
                up = up * u;
            }
            lhs = lhs * y.derivative();
            LB rhs = series_at(phi_series(b, alpha, order), a).derivative();
            for (int e = 0; e < order - 1; ++e) CHECK(lhs.coeff(e) == rhs.coeff(e));
        }
    }
}

TEST_CASE("recursion inputs") {
    CHECK(recursion_inputs(0, {3, 0, 0}).empty());
    CHECK(recursion_inputs(1, {1, 0, 0}).empty());
    auto in = recursion_inputs(1, {2, 0, 0});
    CHECK(std::find(in.begin(), in.end(), CorrelatorKey{0, {3, 0, 0}}) != in.end());
    CHECK(std::find(in.begin(), in.end(), CorrelatorKey{1, {1, 0, 0}}) != in.end());
    for (const auto& [g, n] : recursion_inputs(2, {2, 1, 0})) CHECK(n[0] >= 1);
}

TEST_CASE("recursion matches the direct side at two rational points") {
    HodgeProvider hp;
    const std::vector<CorrelatorKey> targets = {
        {0, {3, 0, 0}}, {0, {2, 1, 0}}, {0, {1, 1, 1}}, {0, {1, 2, 0}}, {0, {1, 0, 2}}, {0, {4, 0, 0}},
        {0, {2, 1, 1}}, {1, {1, 0, 0}}, {1, {2, 0, 0}}, {1, {1, 1, 0}}, {1, {1, 0, 1}}, {1, {1, 1, 1}}};
    for (const BigRat& a : {rat(2, 7), rat(-5, 3)}) {
        EOEngine<BigRat> eng(a);
        for (const auto& [g, n] : targets) {
            CAPTURE(g);
            CAPTURE(n[0] * 100 + n[1] * 10 + n[2]);
            CHECK(same_numeric(eng.compute(g, n), assemble_W(g, n, hp), a));
        }
    }
}

TEST_CASE("genus-one one-point form") {
    EOEngine<RatFuncA> eng(RatFuncA::a());
    const auto& w = eng.compute(1, {1, 0, 0});
    const RatFuncA A = RatFuncA::a();
    // b=1: -a(a+1) <tau_1>_1 with <tau_1>_1 = 1/24 from the Virasoro recursion
    CHECK(w.coeffs.at({1}) == -A * (A + 1) * RatFuncA(dvv_psi({1, {1}})));
    HodgeProvider hp;
    CHECK(w.coeffs.at({0}) == assemble_W(1, {1, 0, 0}, hp).coeffs.at({0}));
    // b=0 carries (1 + a + a^2) <lambda_1>_1
    CHECK(w.coeffs.at({0}) / (1 + A + A * A) == RatFuncA(rat(1, 24)));
}

TEST_CASE("same-leg symmetry of recursion output") {
    EOEngine<BigRat> eng(rat(4, 9));
    const auto& w = eng.compute(0, {5, 0, 0});
    for (const auto& [k, v] : w.coeffs) {
        std::vector<int> p = k;
        std::sort(p.begin() + 1, p.end());
        do {
            auto it = w.coeffs.find(p);
            REQUIRE(it != w.coeffs.end());
            CHECK(it->second == v);
        } while (std::next_permutation(p.begin(), p.end()));
    }
}

TEST_CASE("working order grows on demand and is recorded") {
    HodgeProvider hp;
    const BigRat a = rat(1, 3);
    EOEngine<BigRat> eng(a, 2);
    CHECK(same_numeric(eng.compute(1, {3, 0, 0}), assemble_W(1, {3, 0, 0}, hp), a));
    REQUIRE_FALSE(eng.truncation_ledger().empty());
    CHECK(eng.truncation_ledger().front().from_order == 2);
    CHECK(eng.working_order() > 2);
}

TEST_CASE("rotation reaches forms without a leg-1 slot") {
    HodgeProvider hp;
    EOEngine<RatFuncA> eng(RatFuncA::a());
    std::map<CorrelatorKey, Correlator<RatFuncA>> forms;
    forms[{0, {2, 1, 0}}] = eng.compute(0, {2, 1, 0});
    forms[{0, {1, 2, 0}}] = eng.compute(0, {1, 2, 0});
    forms[{0, {3, 0, 0}}] = eng.compute(0, {3, 0, 0});
    CHECK(rotated_to(forms, 0, {0, 2, 1}) == assemble_W(0, {0, 2, 1}, hp));
    CHECK(rotated_to(forms, 0, {0, 1, 2}) == assemble_W(0, {0, 1, 2}, hp));
    CHECK(rotated_to(forms, 0, {0, 0, 3}) == assemble_W(0, {0, 0, 3}, hp));
    CHECK(rotated_to(forms, 0, {0, 3, 0}) == assemble_W(0, {0, 3, 0}, hp));
    CHECK_THROWS_AS(rotated_to(forms, 1, {0, 1, 0}), std::invalid_argument);
}

TEST_CASE("cache round trip is byte-stable") {
    auto dir = std::filesystem::temp_directory_path() / "tvr_eo_cache_test";
    std::filesystem::remove_all(dir);
    auto first = run_recursion(0, 3, dir.string());
    CHECK(first.cache_hits == 0);
    std::map<std::string, std::string> bytes;
    for (const auto& e : std::filesystem::directory_iterator(dir)) bytes[e.path().string()] = slurp(e.path().string());
    CHECK(bytes.size() == 6);  // only the genus-0 three-point forms with n1 >= 1 are stored
    auto second = run_recursion(0, 3, dir.string());
    CHECK(second.cache_hits == static_cast<int>(bytes.size()));
    CHECK(second.forms == first.forms);
    for (const auto& [p, b] : bytes) CHECK(slurp(p) == b);
    CorrelatorCache c(dir.string());
    CHECK(c.path_for(0, {3, 0, 0}) != c.path_for(0, {2, 1, 0}));
    CHECK(CorrelatorCache::fnv1a("") == 14695981039346656037ull);
    CHECK(CorrelatorCache::fnv1a("a") == 0xaf63dc4c8601ec8cull);
    std::filesystem::remove_all(dir);
}

TEST_CASE("genus-two brackets by interpolation") {
    auto br = extract_brackets_interpolated(2, 1, {rat(1, 2), rat(2, 3), rat(-3, 4), rat(5, 2), rat(1, 7), rat(-7, 5),
                                                   rat(3, 1), rat(-2, 9), rat(9, 4)});
    const PolyA A = PolyA::variable();
    // top psi power: T_2 contributes a^2 (a+1)^2 at lambda-degree 0; <tau_4>_2 from the Virasoro recursion
    CHECK(br.at({4}) == A * A * (A + PolyA(1)) * (A + PolyA(1)) * dvv_psi({2, {4}}));
    CHECK(br.at({0}).is_zero());
    for (const auto& [b, p] : br) CHECK(p.degree() <= 6);
}
