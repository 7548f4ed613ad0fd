#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tvr/amplitudes.hpp"
#include "tvr/cutjoin.hpp"
#include "tvr/laurent.hpp"

namespace tvr {

/// Polynomial in one variable over S, coefficients by ascending power.
template <class S>
using UPoly = std::vector<S>;

/// Curve data near the ramification point y* = a/(a+1) of leg 1, in the local
/// coordinate z = y - y*. All series are known below z^order.
template <class S>
struct LocalCurve {
    S a;
    S ystar;
    int order = 0;
    ZLaurent<S> lambda;  // ln x(y* + z) - ln x(y*)
    ZLaurent<S> P;       // the other sheet: lambda(P(z)) = lambda(z), P = -z + ...
    ZLaurent<S> dP;
    ZLaurent<S> omega;   // (ln y(z) - ln y(P)) dlambda/dz
};

template <class S>
LocalCurve<S> build_local_curve(const S& a, int order);

/// D_b(u) with dphi_b = D_b(u) dy, u = 1/(y - y*), for framing alpha; b = 0..bmax.
/// D_b has degree 2b+2 and lowest term u^2.
template <class S>
std::vector<UPoly<S>> leg_basis_polys(const S& alpha, int bmax);

/// The recursion output did not lie in the span of the dphi basis.
class EOFitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One enlargement of the z working order during a recursion step.
struct TruncationRecord {
    int g = 0;
    LegCounts n{0, 0, 0};
    int from_order = 0;
    int to_order = 0;
    std::string reason;
};

using CorrelatorKey = std::pair<int, LegCounts>;

/// Topological recursion on the local curve, producing basis forms of W_{g;n}
/// with at least one slot on leg 1. Coefficients live in S: RatFuncA for
/// symbolic a, BigRat for a fixed rational a. Only basis forms produced by the
/// recursion itself (and the genus-zero seeds) are consulted.
template <class S>
class EOEngine {
public:
    explicit EOEngine(S a, int initial_order = 24);
    ~EOEngine();
    EOEngine(EOEngine&&) noexcept;
    EOEngine& operator=(EOEngine&&) noexcept;

    /// W_{g;n} for n1 >= 1, computing every input it depends on.
    const Correlator<S>& compute(int g, const LegCounts& n);
    /// Adds a known form (for instance read from a cache) to the store.
    void insert(Correlator<S> w);
    bool has(int g, const LegCounts& n) const;

    const std::map<CorrelatorKey, Correlator<S>>& store() const;
    const std::vector<TruncationRecord>& truncation_ledger() const;
    int working_order() const;
    const LocalCurve<S>& curve() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Inputs consulted by one recursion step for (g, n), in dependency order.
std::vector<CorrelatorKey> recursion_inputs(int g, const LegCounts& n);

/// Caches symbolic basis forms as JSON files named by an FNV-1a hash of
/// (g, n, order, code version).
class CorrelatorCache {
public:
    explicit CorrelatorCache(std::string dir, int order = 0);
    std::string path_for(int g, const LegCounts& n) const;
    bool load(int g, const LegCounts& n, Correlator<RatFuncA>& out) const;
    void save(const Correlator<RatFuncA>& w) const;
    static std::uint64_t fnv1a(const std::string& text);

private:
    std::string dir_;
    int order_;
};

struct RecursionRun {
    std::map<CorrelatorKey, Correlator<RatFuncA>> forms;
    std::vector<TruncationRecord> truncations;
    int cache_hits = 0;
};

/// Every stable W_{g;n} with g <= gmax and 1 <= |n| <= nmax, symbolic in a.
/// Forms with n1 >= 1 come from the recursion; the rest are obtained by
/// rotating the legs. With a cache directory, forms are read from and written
/// to the cache.
RecursionRun run_recursion(int gmax, int nmax, const std::string& cache_dir = "", int order = 0);

/// Recursion output for the given targets only (each needs n1 >= 1), with the
/// same cache behaviour.
RecursionRun run_recursion_targets(const std::vector<CorrelatorKey>& targets, const std::string& cache_dir = "",
                                   int order = 0);

/// Rotates a stored form until it lands on the requested leg counts.
Correlator<RatFuncA> rotated_to(const std::map<CorrelatorKey, Correlator<RatFuncA>>& forms, int g,
                                const LegCounts& n);

/// Brackets <prod tau_b T_g(a)>_g read off a leg-1 basis form:
/// coefficient * (-1)^(g+n) / (a(a+1))^(n-1). Every index vector with sum up to
/// the dimension is listed, zeros included. Throws if a bracket is not a
/// polynomial of degree <= 3g.
std::map<std::vector<int>, PolyA> extract_brackets(const Correlator<RatFuncA>& w);

/// Same brackets for one genus from forms computed at rational points a_i and
/// interpolated; extra points beyond 3g+1 are used as checks.
std::map<std::vector<int>, PolyA> extract_brackets_interpolated(int g, int n1, const std::vector<BigRat>& points);

/// Loads extracted brackets for genus g into a provider.
void install_brackets(HodgeProvider& hp, int g, const std::map<std::vector<int>, PolyA>& brackets);

struct EOComparison {
    int g = 0;
    LegCounts n{0, 0, 0};
    bool basis_equal = false;
    bool series_checked = false;
    bool series_equal = false;
    bool pass() const { return basis_equal && (!series_checked || series_equal); }
};

/// Compares every form of a run with the direct-side basis form, exactly, and
/// as series to series_order in every variable for forms with at most
/// series_max_slots slots.
std::vector<EOComparison> compare_with_direct(const RecursionRun& run, const HodgeProvider& hp, int series_order,
                                              int series_max_slots = 3);

struct GenusLoopResult {
    std::map<int, std::map<std::vector<int>, PolyA>> brackets;  // by number of points
    CJReport report;
    unsigned long positive_genus_calls_during_recursion = 0;
    RecursionRun run;
};

/// Computes W_g(n, 0, 0) for n = 1..nmax by recursion, installs the extracted
/// genus-g brackets into a copy of hp, and checks cut-and-join at genus g on
/// every triple of size <= size_max.
GenusLoopResult run_genus_loop(int g, int nmax, int size_max, const HodgeProvider& hp,
                               const std::string& cache_dir = "");

}  // namespace tvr
