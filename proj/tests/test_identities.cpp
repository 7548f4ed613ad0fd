#include <doctest.h>

#include "tvr/identities.hpp"

using namespace tvr;

TEST_CASE("closed-form identities at low order") {
    auto res = verify_identities(5);
    CHECK(res.size() >= 60);
    for (const auto& r : res) {
        CAPTURE(r.name);
        CAPTURE(r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("unstable one-point form on leg 1") {
    // x d/dx of it is -ln y, with y = 1 - x - a x^2 + ...: x + (2a+1)/2 x^2 + ...
    auto phi = unstable_Phi({1, 0, 0}, 3);
    const RatFuncA A = RatFuncA::a();
    CHECK(phi.at({0}).is_zero());
    CHECK(phi.at({1}) == RatFuncA(1));
    CHECK(2 * phi.at({2}) == (2 * A + 1) / 2);
}
