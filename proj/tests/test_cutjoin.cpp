#include <doctest.h>

#include <set>

#include "tvr/amplitudes.hpp"
#include "tvr/cutjoin.hpp"

using namespace tvr;

namespace {

const RatFuncA A = RatFuncA::a();

const RatFuncA& rhs_at(const GenFun& r, int g, const char* t) { return r.at(g, parse_triple(t)); }

// Cells whose right-hand side reads the amplitude at (g, t): split a part
// (join), merge two parts (cut, genus + 1), or merge one part with a part of
// any other triple with a nonzero amplitude on the same leg (nonlinear).
std::set<CJKey> dependents(const GenFun& gf, int g, const PartitionTriple& t, int gmax, int smax) {
    std::set<CJKey> out;
    auto push = [&](int gg, std::array<std::vector<int>, 3> p) {
        PartitionTriple u{Partition(p[0]), Partition(p[1]), Partition(p[2])};
        if (gg <= gmax && total_size(u) <= smax) out.insert({gg, u});
    };
    for (int L = 0; L < 3; ++L) {
        const auto& ps = t[L].parts();
        for (std::size_t x = 0; x < ps.size(); ++x) {
            for (int i = 1; i < ps[x]; ++i) {
                std::array<std::vector<int>, 3> p{t[0].parts(), t[1].parts(), t[2].parts()};
                p[L].erase(p[L].begin() + static_cast<long>(x));
                p[L].push_back(i);
                p[L].push_back(ps[x] - i);
                push(g, p);
            }
            for (std::size_t y = 0; y < ps.size(); ++y) {
                if (y == x) continue;
                std::array<std::vector<int>, 3> p{t[0].parts(), t[1].parts(), t[2].parts()};
                int s = ps[x] + ps[y];
                p[L].erase(p[L].begin() + static_cast<long>(std::max(x, y)));
                p[L].erase(p[L].begin() + static_cast<long>(std::min(x, y)));
                p[L].push_back(s);
                push(g + 1, p);
            }
            for (int g2 = 0; g + g2 <= gmax; ++g2)
                for (const auto& o : enumerate_triples(smax - total_size(t) > 0 ? smax - total_size(t) : 0)) {
                    if (o[L].empty() || gf.at(g2, o).is_zero()) continue;
                    for (int j : o[L].parts()) {
                        std::array<std::vector<int>, 3> p{t[0].parts(), t[1].parts(), t[2].parts()};
                        for (int M = 0; M < 3; ++M) p[M].insert(p[M].end(), o[M].parts().begin(), o[M].parts().end());
                        p[L].erase(std::find(p[L].begin(), p[L].end(), ps[x]));
                        p[L].erase(std::find(p[L].begin(), p[L].end(), j));
                        p[L].push_back(ps[x] + j);
                        push(g + g2, p);
                    }
                }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("cut-and-join fixtures") {
    HodgeProvider hp;
    GenFun gf = GenFun::direct(0, 2, hp);
    GenFun r = apply_cj(gf);
    CHECK(rhs_at(r, 0, "[[1]|[]|[]]").is_zero());
    CHECK(rhs_at(r, 0, "[[2]|[]|[]]") == RatFuncA(rat(1, 2)));
    CHECK(gf.at(0, parse_triple("[[2]|[]|[]]")).derivative() == RatFuncA(rat(1, 2)));
    CHECK(rhs_at(r, 0, "[[1,1]|[]|[]]") == -(2 * A + 1) / 4);
    CHECK(gf.at(0, parse_triple("[[1,1]|[]|[]]")).derivative() == -(2 * A + 1) / 4);
}

TEST_CASE("cut-and-join holds on the direct side") {
    HodgeProvider hp;
    GenFun gf = GenFun::direct(1, 4, hp);
    auto rep = verify_cj(gf, 1, 4);
    CHECK(rep.mismatches().empty());
    CHECK(rep.cells.size() == 2 * enumerate_triples(4).size());
    CHECK(rep.to_json().size() == rep.cells.size());
}

TEST_CASE("original form with sqrt(-1) factors") {
    HodgeProvider hp;
    GenFun gf = GenFun::direct(0, 3, hp);
    auto cells = check_p_form(gf, 3);
    CHECK(cells.size() == enumerate_triples(3).size());
    for (const auto& c : cells) CHECK(c.equal);
}

TEST_CASE("a corrupted amplitude breaks exactly its dependents") {
    HodgeProvider hp;
    const int gmax = 1, smax = 4;
    GenFun gf = GenFun::direct(gmax, smax, hp);
    for (const char* s : {"[[1]|[1]|[]]", "[[2]|[]|[1]]", "[[1,1]|[]|[]]"}) {
        const PartitionTriple t = parse_triple(s);
        for (int g = 0; g <= gmax; ++g) {
            GenFun bad = gf;
            bad.coeffs[{g, t}] += RatFuncA(1);
            std::set<CJKey> got;
            for (const auto& c : verify_cj(bad, gmax, smax).mismatches()) got.insert({c.g, c.triple});
            CHECK(got == dependents(gf, g, t, gmax, smax));
        }
    }
}

TEST_CASE("one-leg restriction") {
    HodgeProvider hp;
    GenFun gf = GenFun::direct(1, 4, hp);
    for (auto& [k, v] : gf.coeffs)
        if (!k.second[1].empty() || !k.second[2].empty()) v = RatFuncA();
    CHECK(verify_cj(gf, 1, 4).passed());
}

TEST_CASE("missing inputs are reported") {
    HodgeProvider hp;
    GenFun gf = GenFun::direct(0, 3, hp);
    gf.coeffs.erase({0, parse_triple("[[2]|[1]|[]]")});
    CHECK_THROWS_WITH_AS(apply_cj(gf), doctest::Contains("[[2]|[1]|[]]"), CJDependencyError);
    CHECK_THROWS_AS(verify_cj(GenFun::direct(0, 2, hp), 1, 2), CJDependencyError);
}
