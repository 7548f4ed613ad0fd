#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "tvr/intersection.hpp"
#include "tvr/partitions.hpp"

using namespace tvr;

namespace {

// Count weakly decreasing compositions of n by walking all 2^(n-1) compositions.
int brute_partition_count(int n) {
    int count = 0;
    for (unsigned long mask = 0; mask < (1ul << (n - 1)); ++mask) {
        std::vector<int> parts;
        int cur = 1;
        for (int i = 0; i < n - 1; ++i) {
            if (mask >> i & 1) {
                parts.push_back(cur);
                cur = 1;
            } else {
                ++cur;
            }
        }
        parts.push_back(cur);
        if (std::is_sorted(parts.rbegin(), parts.rend())) ++count;
    }
    return count;
}

long kappa_by_definition(const std::vector<int>& p) {
    long k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) k += p[i] * (p[i] - 2 * static_cast<long>(i + 1) + 1);
    return k;
}

void all_vectors(int n, int maxv, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (static_cast<int>(cur.size()) == n) {
        f(cur);
        return;
    }
    for (int v = 0; v <= maxv; ++v) {
        cur.push_back(v);
        all_vectors(n, maxv, cur, f);
        cur.pop_back();
    }
}

}  // namespace

TEST_CASE("partition statistics") {
    const auto& e = partition_stats(Partition());
    CHECK(e.size == 0);
    CHECK(e.length == 0);
    CHECK(e.aut == 1);
    CHECK(e.z == 1);
    CHECK(e.kappa == 0);
    const auto& s = partition_stats(Partition({2, 1}));
    CHECK(s.size == 3);
    CHECK(s.length == 2);
    CHECK(s.aut == 1);
    CHECK(s.z == 2);
    CHECK(s.kappa == 0);
    const auto& t = partition_stats(Partition({2, 2}));
    CHECK(t.aut == 2);
    CHECK(t.z == 8);
    CHECK(Partition({1, 3, 1}).parts() == std::vector<int>{3, 1, 1});
    CHECK(Partition::parse("[3,1,1]").to_string() == "[3,1,1]");
    CHECK(Partition::parse("[]").empty());
    CHECK_THROWS_AS(Partition::parse("[1,3]"), std::invalid_argument);
    CHECK_THROWS_AS(Partition({0}), std::invalid_argument);
}

TEST_CASE("partition counts and conjugate kappa") {
    const int classical[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    for (int n = 1; n <= 10; ++n) {
        auto ps = partitions_of(n);
        CHECK(static_cast<int>(ps.size()) == brute_partition_count(n));
        CHECK(static_cast<int>(ps.size()) == classical[n - 1]);
        std::set<std::vector<int>> distinct;
        for (const auto& p : ps) {
            distinct.insert(p.parts());
            CHECK(p.size() == n);
            CHECK(partition_stats(p).kappa == kappa_by_definition(p.parts()));
            CHECK(kappa_by_definition(p.conjugate().parts()) == -kappa_by_definition(p.parts()));
            CHECK(p.conjugate().conjugate() == p);
        }
        CHECK(distinct.size() == ps.size());
    }
}

TEST_CASE("triple enumeration") {
    auto t1 = enumerate_triples(1);
    REQUIRE(t1.size() == 3);
    CHECK(triple_to_string(t1[0]) == "[[1]|[]|[]]");
    CHECK(triple_to_string(t1[1]) == "[[]|[1]|[]]");
    CHECK(triple_to_string(t1[2]) == "[[]|[]|[1]]");
    auto t2 = enumerate_triples(2);
    CHECK(t2.size() == 12);
    int single_two = 0, single_oneone = 0, two_leg = 0;
    for (const auto& t : t2) {
        CHECK(total_size(t) >= 1);
        if (total_size(t) != 2) continue;
        int nonempty = 0;
        for (const auto& p : t) nonempty += !p.empty();
        if (nonempty == 2) ++two_leg;
        for (const auto& p : t) {
            if (p == Partition({2})) ++single_two;
            if (p == Partition({1, 1})) ++single_oneone;
        }
    }
    CHECK(single_two == 3);
    CHECK(single_oneone == 3);
    CHECK(two_leg == 3);
    // brute-force count of triples up to size 5: sum over (s1,s2,s3) of p(s1)p(s2)p(s3)
    auto p = [](int n) { return n == 0 ? 1 : brute_partition_count(n); };
    std::size_t expect = 0;
    for (int a = 0; a <= 5; ++a)
        for (int b = 0; a + b <= 5; ++b)
            for (int c = 0; a + b + c <= 5; ++c)
                if (a + b + c > 0) expect += static_cast<std::size_t>(p(a) * p(b) * p(c));
    auto t5 = enumerate_triples(5);
    CHECK(t5.size() == expect);
    std::set<std::string> seen;
    for (const auto& t : t5) seen.insert(triple_to_string(t));
    CHECK(seen.size() == t5.size());
    CHECK(triple_to_string(parse_triple("[[2,1]|[]|[1]]")) == "[[2,1]|[]|[1]]");
    CHECK(triple_aut(parse_triple("[[1,1]|[2,2]|[1]]")) == 4);
    CHECK_THROWS_AS(parse_triple("[[1]|[1]]"), std::invalid_argument);
}

TEST_CASE("genus zero psi integrals") {
    CHECK(genus0_psi({0, 0, 0}) == 1);
    CHECK(genus0_psi({1, 0, 0, 0}) == 1);
    CHECK(genus0_psi({1, 1, 0, 0, 0}) == 2);
    CHECK(genus0_psi({2, 0, 0}) == 0);
    CHECK_THROWS_AS(genus0_psi({0, 0}), std::invalid_argument);
    for (int n = 3; n <= 8; ++n) {
        std::vector<int> cur;
        all_vectors(n, n - 3, cur, [&](const std::vector<int>& b) { CHECK(genus0_psi(b) == dvv_psi({0, b})); });
    }
}

TEST_CASE("unstable conventions") {
    using UC = UnstableCase;
    CHECK(unstable_convention<BigRat>(UC::TwoPointTwoDenominators, {2, 3}) == rat(1, 5));
    CHECK(unstable_convention<BigRat>(UC::TwoPointOneDenominator, {3}) == rat(1, 9));
    CHECK(unstable_convention<BigRat>(UC::TwoPointTwoDenominators, {7, 7}) == rat(1, 14));
    CHECK_THROWS_AS(unstable_convention<BigRat>(UC::TwoPointOneDenominator, {1, 2}), std::invalid_argument);
}

TEST_CASE("psi integrals from the Virasoro recursion") {
    CHECK(dvv_psi({0, {0, 0, 0}}) == 1);
    CHECK(dvv_psi({1, {1}}) == rat(1, 24));
    CHECK(dvv_psi({2, {4}}) == rat(1, 1152));
    // independent one-point closed form <tau_{3g-2}>_g = 1/(24^g g!)
    for (int g = 1; g <= 5; ++g) {
        BigRat expect = 1;
        for (int i = 1; i <= g; ++i) expect /= BigRat(24 * i);
        CHECK(dvv_psi({g, {3 * g - 2}}) == expect);
    }
    CHECK(dvv_psi({1, {1, 1}}) == rat(1, 24));
    CHECK(dvv_psi({2, {2, 3}}) == rat(29, 5760));
    CHECK(dvv_psi({1, {2}}) == 0);
}

TEST_CASE("string and dilaton equations") {
    for (int g = 0; g <= 2; ++g)
        for (int n = 1; n <= 4; ++n) {
            std::vector<int> cur;
            all_vectors(n, 3 * g - 2 + n, cur, [&](const std::vector<int>& b) {
                TauSpec base{g, b};
                std::vector<int> with0 = b;
                with0.push_back(0);
                TauSpec s{g, with0};
                if (!base.stable() || s.psi_degree() != s.dimension()) return;
                BigRat rhs = 0;
                for (std::size_t i = 0; i < b.size(); ++i) {
                    if (b[i] == 0) continue;
                    std::vector<int> t = b;
                    t[i] -= 1;
                    rhs += dvv_psi({g, t});
                }
                CHECK(dvv_psi(s) == rhs);
                std::vector<int> with1 = b;
                with1.push_back(1);
                if (base.stable() && base.psi_degree() == base.dimension())
                    CHECK(dvv_psi({g, with1}) == BigRat(2 * g - 2 + n) * dvv_psi(base));
            });
        }
}

TEST_CASE("Hodge product expansion") {
    auto t0 = expand_T(0);
    REQUIRE(t0.size() == 1);
    CHECK(t0[0].indices.empty());
    CHECK(t0[0].coeff == PolyA(1));
    auto t1 = expand_T(1);
    // (1 - l)(a - l)(-1 - a - l) with l^k retained
    std::map<std::vector<int>, PolyA> got;
    for (const auto& m : t1) got[m.indices] = m.coeff;
    CHECK(got[{}] == PolyA{0, -1, -1});
    CHECK(got[{1}] == PolyA{1, 1, 1});
    CHECK(got[{1, 1}] == PolyA(0));
    CHECK(got[{1, 1, 1}] == PolyA(-1));
    // evaluating lambda classes at formal numbers reproduces the product
    auto t2 = expand_T(2);
    const BigRat l1 = rat(2, 5), l2 = rat(-3, 7), av = rat(4, 3);
    BigRat sum = 0;
    for (const auto& m : t2) {
        BigRat v = m.coeff.eval(av);
        for (int i : m.indices) v *= (i == 1 ? l1 : l2);
        sum += v;
    }
    auto lam = [&](const BigRat& u) -> BigRat { return u * u - l1 * u + l2; };
    CHECK(sum == lam(1) * lam(av) * lam(-1 - av));
}

TEST_CASE("Hodge provider") {
    HodgeProvider hp;
    RatFuncA A = RatFuncA::a();
    CHECK(hp.correlator(0, {1, 0, 0, 0}) == RatFuncA(1));
    CHECK(hp.correlator(1, {1}) == -A * (A + 1) / 24);
    CHECK(hp.correlator(1, {0}) == (1 + A + A * A) / 24);
    CHECK(hp.correlator(1, {2, 0}) == hp.correlator(1, {0, 2}));
    CHECK(hp.correlator(1, {3}).is_zero());
    CHECK(hp.calls_at_positive_genus() == 5);
    CHECK_THROWS_AS(hp.correlator(2, {4}), ProviderGap);
    CHECK(hp.correlator(2, {9}).is_zero());
    CHECK_THROWS_AS(hp.correlator(0, {0, 0}), std::invalid_argument);

    hp.load_table_text("# one genus-two value\n2; 4; ; 1/1152\n2; 1; 1,2; 1/2880\n");
    CHECK(hp.lambda_integral(2, {4}, {}) == rat(1, 1152));
    CHECK(hp.lambda_integral(2, {1}, {1, 2}) == rat(1, 2880));
    CHECK_THROWS_AS(hp.lambda_integral(2, {2}, {2}), ProviderGap);
    CHECK_THROWS_AS(hp.load_table_text("2; 4; ; 1/1000\n"), std::invalid_argument);
    CHECK_THROWS_AS(hp.load_table_text("2; 4; 1/1000\n"), std::invalid_argument);
    auto st = hp.strategies_for(2);
    CHECK(std::find(st.begin(), st.end(), Strategy::ExternalTable) != st.end());

    HodgeProvider ex;
    ex.set_extracted(2, {1, 0}, PolyA{1, 2});
    CHECK(ex.correlator(2, {0, 1}) == RatFuncA(PolyA{1, 2}));
    CHECK(ex.has_extracted(2, 2));
    CHECK_FALSE(ex.has_extracted(2, 3));
}
