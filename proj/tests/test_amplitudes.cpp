#include <doctest.h>

#include "tvr/amplitudes.hpp"

using namespace tvr;

namespace {

const RatFuncA A = RatFuncA::a();

PartitionTriple rotate_triple(const PartitionTriple& t) { return {t[2], t[0], t[1]}; }

}  // namespace

TEST_CASE("per-part framing factors") {
    CHECK(leg_factor(1, 1, A) == RatFuncA(1));
    CHECK(leg_factor(2, 1, A) == 2 * A + 1);
    CHECK(leg_factor(2, 2, A) == -(A + 2) / A);
    CHECK(leg_factor(3, 1, A) == (3 * A + 1) * (3 * A + 2) / 2);
    for (int leg = 1; leg <= 3; ++leg)
        for (int m = 1; m <= 5; ++m) CHECK(leg_factor(m, leg, A) == framing_factor(m, leg_framing(leg, A)));
}

TEST_CASE("small amplitudes") {
    HodgeProvider hp;
    auto G = [&](int g, const char* t) { return assemble_G(g, parse_triple(t), hp, A); };
    CHECK(G(0, "[[1]|[]|[]]") == RatFuncA(1));
    CHECK(G(0, "[[2]|[]|[]]") == (2 * A + 1) / 4);
    CHECK(G(0, "[[1,1]|[]|[]]") == -A * (A + 1) / 4);
    CHECK(G(0, "[[1]|[1]|[]]") == RatFuncA(-1));
    // <tau_0 T_1> + <tau_1 T_1> = (1 + a + a^2)/24 - a(a+1)/24
    CHECK(G(1, "[[1]|[]|[]]") == RatFuncA(rat(1, 24)));
    // genus-0 three-point: pref W^2 / prod w^2 with all brackets 1
    CHECK(G(0, "[[1]|[1]|[1]]") == RatFuncA(1));
    CHECK(assemble_G(0, parse_triple("[[2]|[]|[]]"), hp, rat(1, 2)) == rat(1, 2));
    CHECK_THROWS_AS(assemble_G(2, parse_triple("[[1]|[]|[]]"), hp, A), ProviderGap);
}

TEST_CASE("amplitudes are covariant under leg rotation") {
    HodgeProvider hp;
    const RatFuncA a2 = leg_framing(2, A);
    for (int g = 0; g <= 1; ++g)
        for (const auto& t : enumerate_triples(3))
            CHECK(assemble_G(g, t, hp, A).subst(a2) == assemble_G(g, rotate_triple(t), hp, A));
}

TEST_CASE("amplitudes are homogeneous of degree zero in the weights") {
    HodgeProvider hp;
    const BigRat av = rat(2, 7);
    for (int g = 0; g <= 1; ++g)
        for (const auto& t : enumerate_triples(3)) {
            BigRat base = assemble_G(g, t, hp, av);
            for (const BigRat c : {rat(3, 1), rat(-5, 2), rat(1, 9)}) {
                std::array<BigRat, 3> w{c, c * av, -c * (1 + av)};
                CHECK(assemble_G_w(g, t, w, hp) == base);
            }
        }
}

TEST_CASE("closed assembly matches symmetrized amplitudes") {
    HodgeProvider hp;
    CHECK(closed_Phi(0, {2, 1, 0}, hp, 4) == symmetrize_to_Phi(0, {2, 1, 0}, hp, 4));
    CHECK(closed_Phi(0, {1, 1, 1}, hp, 3) == symmetrize_to_Phi(0, {1, 1, 1}, hp, 3));
    CHECK(closed_Phi(1, {1, 0, 1}, hp, 4) == symmetrize_to_Phi(1, {1, 0, 1}, hp, 4));
    CHECK(closed_Phi(1, {0, 1, 0}, hp, 5) == symmetrize_to_Phi(1, {0, 1, 0}, hp, 5));
}

TEST_CASE("basis form round trip") {
    HodgeProvider hp;
    for (auto [g, n] : std::vector<std::pair<int, LegCounts>>{{0, {3, 0, 0}}, {0, {1, 2, 1}}, {1, {1, 0, 0}},
                                                              {1, {1, 1, 0}}}) {
        auto w = assemble_W(g, n, hp);
        const int order = 4;
        MSeries direct = W_series_from_amplitudes(g, n, hp, order);
        CHECK(basis_to_series(w, order) == direct);
        auto fit = series_to_basis(direct, g, n, 3 * g - 3 + total_slots(n));
        CHECK(fit.residual_zero);
        CHECK(fit.form == w);
        CHECK(correlator_from_json(correlator_to_json(w)) == w);
    }
    // a series off the basis leaves a residual
    std::vector<LegVar> v{{1, 1}};
    MSeries x = MSeries::variable(v, {4}, 0);
    CHECK_FALSE(series_to_basis(x * x * x, 1, {1, 0, 0}, 1).residual_zero);
}

TEST_CASE("basis forms rotate with the legs") {
    HodgeProvider hp;
    for (auto [g, n] : std::vector<std::pair<int, LegCounts>>{{0, {2, 1, 0}}, {1, {1, 0, 1}}, {1, {0, 2, 0}}}) {
        auto r = rotate_legs(assemble_W(g, n, hp));
        CHECK(r == assemble_W(g, {n[2], n[0], n[1]}, hp));
    }
}

TEST_CASE("series helpers and csv") {
    auto y = y_series(A, 3);
    CHECK(y[0] == RatFuncA(1));
    CHECK(y[1] == RatFuncA(-1));
    CHECK(y[2] == -A);
    CHECK(y[3] == -(3 * A) * (3 * A + 1) / 6);
    auto p = phi_series(-1, A, 2);
    CHECK(p[0].is_zero());
    CHECK(p[2] == (2 * A + 1) / 2);
    std::vector<std::tuple<int, PartitionTriple, std::string>> rows{{0, parse_triple("[[2,1]|[]|[1]]"), "1"}};
    CHECK(amplitudes_csv(rows) == "g,mu1,mu2,mu3,value\n0,\"[2,1]\",\"[]\",\"[1]\",1\n");
}
