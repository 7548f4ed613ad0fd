#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tvr/intersection.hpp"
#include "tvr/partitions.hpp"
#include "tvr/ratfunc.hpp"

namespace tvr {

/// A cut-and-join input the bounds demand is absent from the map.
class CJDependencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using CJKey = std::pair<int, PartitionTriple>;

/// Truncated generating function sum lambda^(2g-2+l) G(g; mu) q_mu of
/// i-normalized amplitudes, q_mu = prod over legs and parts of q^L_{mu_j}.
struct GenFun {
    int gmax = 0;
    int size_max = 0;
    std::map<CJKey, RatFuncA> coeffs;

    /// Every triple with 1 <= |mu| <= size_max at every genus 0..gmax, from
    /// the intersection-number side.
    static GenFun direct(int gmax, int size_max, const HodgeProvider& hp);

    const RatFuncA& at(int g, const PartitionTriple& t) const;
    /// Throws CJDependencyError naming the first missing (g, triple).
    void require_complete() const;
};

/// Right-hand side of the i-free cut-and-join equation
///   dG/da = (lambda/2) sum_L c_L sum_{i,j} [ i j q_{i+j} d2G/dq_i dq_j
///           + i j q_{i+j} dG/dq_i dG/dq_j - (i+j) q_i q_j dG/dq_{i+j} ]
/// with c = (1, 1/a^2, 1/(a+1)^2), on every cell inside the bounds.
GenFun apply_cj(const GenFun& gf);

struct CJCell {
    int g = 0;
    PartitionTriple triple;
    RatFuncA lhs, rhs;
    bool equal = false;
};

struct CJReport {
    std::vector<CJCell> cells;
    std::vector<CJCell> mismatches() const;
    bool passed() const;
    /// List of {g, triple, lhs, rhs, equal}.
    nlohmann::json to_json() const;
};

/// Compares d/da of each amplitude with the right-hand side on the cells with
/// gmin <= g <= gmax and |mu| <= size_max; these must lie inside gf's bounds.
CJReport verify_cj(const GenFun& gf, int gmax, int size_max, int gmin = 0);

/// Reinstates the factors sqrt(-1)^(-l) and checks the equation in its
/// original form, prefactor sqrt(-1) lambda/2 and join sign +, over Q(a)[i]
/// on the genus-0 cells of size <= size_max.
struct PFormCell {
    PartitionTriple triple;
    bool equal = false;
};
std::vector<PFormCell> check_p_form(const GenFun& gf, int size_max = 2);

}  // namespace tvr
