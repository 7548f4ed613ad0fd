#pragma once

#include <array>
#include <atomic>
#include <tuple>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "tvr/errors.hpp"
#include "tvr/poly.hpp"
#include "tvr/ratfunc.hpp"

namespace tvr {

/// <tau_b1 ... tau_bn> on Mbar_{g,n}.
struct TauSpec {
    int genus = 0;
    std::vector<int> psi;
    int n() const { return static_cast<int>(psi.size()); }
    bool stable() const { return 2 * genus - 2 + n() > 0; }
    int dimension() const { return 3 * genus - 3 + n(); }
    int psi_degree() const;
};

/// Product of lambda classes (indices ascending, lambda_0 omitted) with a
/// polynomial coefficient in a.
struct LambdaMonomial {
    std::vector<int> indices;
    PolyA coeff;
    int degree() const;
};

/// Coefficient of prod a_i^b_i in (a_1 + ... + a_n)^(n-3): (n-3)!/prod b_i!.
/// Zero when sum b != n - 3. Throws std::invalid_argument for n < 3.
BigRat genus0_psi(const std::vector<int>& b);

enum class UnstableCase { TwoPointTwoDenominators, TwoPointOneDenominator };

/// The two conventions for Mbar_{0,2}: 1/(a1+a2) and 1/a1^2.
template <class S>
S unstable_convention(UnstableCase which, const std::vector<S>& weights) {
    if (which == UnstableCase::TwoPointTwoDenominators) {
        if (weights.size() != 2) throw std::invalid_argument("two-denominator convention takes two weights");
        return S(1) / (weights[0] + weights[1]);
    }
    if (weights.size() != 1) throw std::invalid_argument("one-denominator convention takes one weight");
    return S(1) / (weights[0] * weights[0]);
}

/// psi-class intersection numbers via the DVV (Virasoro) recursion, memoized.
BigRat dvv_psi(const TauSpec& spec);

/// Lambda_g(1) Lambda_g(a) Lambda_g(-1-a) expanded into lambda monomials,
/// no relations imposed. Sorted by (degree, indices).
std::vector<LambdaMonomial> expand_T(int g);

enum class Strategy { Genus0ClosedForm, DvvPsiOnly, BuiltinGenus1, ExternalTable, EoExtracted };
std::string to_string(Strategy s);

/// Source of the brackets <prod tau_b T_g(a)>_g. Genus 0 and genus 1 are
/// always covered; higher genus needs a loaded table or extracted brackets.
class HodgeProvider {
public:
    /// Genus-0 closed form, DVV, built-in genus-1 lambda_1 values.
    HodgeProvider() = default;

    /// Reads "g; b1,..,bn; lambda-indices; value" lines. Throws on malformed
    /// lines or on duplicate keys with conflicting values.
    void load_table(const std::string& path);
    void load_table_text(const std::string& text);
    void add_table_entry(int g, std::vector<int> psi, std::vector<int> lambdas, const BigRat& value);

    /// Stores whole brackets <prod tau_b T_g>_g, e.g. read off recursion output.
    void set_extracted(int g, std::vector<int> psi, const PolyA& bracket);
    bool has_extracted(int g, int n) const;

    /// <prod tau_b lambda_I>_g for one lambda monomial. Throws ProviderGap.
    BigRat lambda_integral(int g, const std::vector<int>& psi, const std::vector<int>& lambdas) const;

    /// <prod tau_b T_g(a)>_g as a polynomial in a of degree <= 3g. Throws
    /// ProviderGap when no source covers the query.
    RatFuncA correlator(int g, const std::vector<int>& psi) const;
    /// Same bracket with T_g built from arbitrary weights (w1, w2, w3); only
    /// lambda-level sources (closed forms, built-ins, tables) can answer.
    BigRat correlator_w(int g, const std::vector<int>& psi, const std::array<BigRat, 3>& w) const;

    /// Strategies that can answer genus-g queries.
    std::vector<Strategy> strategies_for(int g) const;

    unsigned long calls() const { return calls_.load(); }
    unsigned long calls_at_positive_genus() const { return positive_genus_calls_.load(); }

    HodgeProvider(const HodgeProvider& o);
    HodgeProvider& operator=(const HodgeProvider& o);

private:
    using TableKey = std::tuple<int, std::vector<int>, std::vector<int>>;
    std::map<TableKey, BigRat> table_;
    std::map<std::pair<int, std::vector<int>>, PolyA> extracted_;
    std::map<int, int> table_genera_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<int, std::vector<int>>, RatFuncA> memo_;
    mutable std::atomic<unsigned long> calls_{0};
    mutable std::atomic<unsigned long> positive_genus_calls_{0};
};

/// <prod tau_b lambda_1>_1 = (n-1)!/(24 prod b_i!) when sum b = n - 1.
BigRat builtin_genus1_lambda1(const std::vector<int>& b);

}  // namespace tvr
