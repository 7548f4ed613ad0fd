#pragma once

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "tvr/intersection.hpp"
#include "tvr/mseries.hpp"
#include "tvr/partitions.hpp"
#include "tvr/ratfunc.hpp"

namespace tvr {

using LegCounts = std::array<int, 3>;

/// Framing of leg 1, 2, 3 at a: a, -(a+1)/a, -1/(a+1).
template <class S>
S leg_framing(int leg, const S& a) {
    switch (leg) {
        case 1: return a;
        case 2: return S(-(a + S(1)) / a);
        case 3: return S(S(-1) / (a + S(1)));
    }
    throw std::invalid_argument("leg must be 1, 2 or 3");
}

/// The weights (w1, w2, w3) = (1, a, -1-a).
template <class S>
std::array<S, 3> leg_weights(const S& a) {
    return {S(1), a, S(S(-1) - a)};
}

/// prod_{k=1}^{m-1} (m alpha + k) / (m-1)!.
template <class S>
S framing_factor(int m, const S& alpha) {
    if (m < 1) throw std::invalid_argument("framing_factor: m >= 1");
    S r(1);
    for (int k = 1; k < m; ++k) r *= S(S(BigRat(m)) * alpha + S(BigRat(k)));
    return S(r / S(BigRat(factorial(static_cast<unsigned>(m - 1)))));
}

/// Per-part factor of leg i with weights w:
/// prod_{k=1}^{m-1} (m w_{i+1} + k w_i) / ((m-1)! w_i^(m-1)).
template <class S>
S leg_factor_w(int m, int leg, const std::array<S, 3>& w) {
    if (m < 1) throw std::invalid_argument("leg_factor: m >= 1");
    const S& wi = w[static_cast<std::size_t>(leg - 1)];
    const S& wn = w[static_cast<std::size_t>(leg % 3)];
    S r(1);
    for (int k = 1; k < m; ++k) r *= S(S(BigRat(m)) * wn + S(BigRat(k)) * wi);
    S den = S(BigRat(factorial(static_cast<unsigned>(m - 1))));
    for (int k = 1; k < m; ++k) den *= wi;
    return S(r / den);
}

template <class S>
S leg_factor(int m, int leg, const S& a) {
    return leg_factor_w(m, leg, leg_weights(a));
}

/// The i-normalized amplitude (sqrt(-1))^l G_{g;mu}(a), exact. Genus-0 cases
/// with one or two parts use the two unstable conventions. Instantiated for
/// RatFuncA (symbolic a) and BigRat (a = p/q).
template <class S>
S assemble_G(int g, const PartitionTriple& t, const HodgeProvider& hp, const S& a);

/// The same amplitude for arbitrary rational weights (w1, w2, w3), with T_g
/// built from the weights. Homogeneous of degree 0 in w.
BigRat assemble_G_w(int g, const PartitionTriple& t, const std::array<BigRat, 3>& w, const HodgeProvider& hp);

/// Amplitudes for every triple of total size 1..max_size, in enumeration order.
std::vector<std::pair<PartitionTriple, RatFuncA>> amplitude_table(int g, int max_size, const HodgeProvider& hp);

/// CSV with header "g,mu1,mu2,mu3,value"; partitions quoted.
std::string amplitudes_csv(const std::vector<std::tuple<int, PartitionTriple, std::string>>& rows);

/// Coefficients of phi_b(x; alpha) = sum_m framing_factor(m, alpha) m^b x^m for
/// exponents 0..order; b may be negative.
std::vector<RatFuncA> phi_series(int b, const RatFuncA& alpha, int order);

/// Coefficients of y(x; alpha) = 1 - sum_n prod_{j=0}^{n-2}(n alpha + j)/n! x^n.
std::vector<RatFuncA> y_series(const RatFuncA& alpha, int order);

/// Variables x^1_1..x^1_n1, x^2_1.., x^3_1.. in slot order.
std::vector<LegVar> leg_variables(const LegCounts& n);
int total_slots(const LegCounts& n);
/// Leg (1..3) of each slot.
std::vector<int> slot_legs(const LegCounts& n);

/// Phi_{g;n} from the amplitudes: coefficient of prod x^m is |Aut| times the
/// amplitude of the sorted exponents. Orders are per variable, exponents 0..order.
MSeries symmetrize_to_Phi(int g, const LegCounts& n, const HodgeProvider& hp, int order);

/// Phi_{g;n} from the closed assembly (-a(a+1))^(n-1) sum <..T_g> prod phi^L_b.
/// Stable (g, n) only.
MSeries closed_Phi(int g, const LegCounts& n, const HodgeProvider& hp, int order);

/// Basis coefficients of W_g: map from per-slot basis indices b to the
/// coefficient of prod dphi_b(x^L; a_L). Slots are ordered leg 1, leg 2, leg 3.
template <class S>
struct Correlator {
    int g = 0;
    LegCounts n{0, 0, 0};
    std::map<std::vector<int>, S> coeffs;

    int slots() const { return n[0] + n[1] + n[2]; }
    friend bool operator==(const Correlator& x, const Correlator& y) {
        return x.g == y.g && x.n == y.n && x.coeffs == y.coeffs;
    }
};

/// Direct-side basis form (-1)^(g+n) (a(a+1))^(n-1) <prod tau T_g> prod weights.
Correlator<RatFuncA> assemble_W(int g, const LegCounts& n, const HodgeProvider& hp);

/// Scalar series W / prod dx of a basis form, exponents 0..order.
MSeries basis_to_series(const Correlator<RatFuncA>& w, int order);

/// W / prod dx computed as (-1)^(g-1) times the mixed derivative of the
/// symmetrized amplitude series.
MSeries W_series_from_amplitudes(int g, const LegCounts& n, const HodgeProvider& hp, int order);

struct BasisFit {
    Correlator<RatFuncA> form;
    bool residual_zero = false;
    MSeries residual;
};

/// Fits a series to the dphi basis with indices 0..bmax per slot by exact
/// interpolation on the first bmax+1 coefficients in each variable, then
/// reports the residual over the whole box.
BasisFit series_to_basis(const MSeries& w, int g, const LegCounts& n, int bmax);

nlohmann::json correlator_to_json(const Correlator<RatFuncA>& w);
Correlator<RatFuncA> correlator_from_json(const nlohmann::json& j);

/// Relabels legs (1,2,3) -> (2,3,1) and substitutes a -> -(a+1)/a in every
/// coefficient; (n1,n2,n3) becomes (n3,n1,n2).
Correlator<RatFuncA> rotate_legs(const Correlator<RatFuncA>& w);

}  // namespace tvr
