#pragma once

#include <string>
#include <vector>

#include "tvr/amplitudes.hpp"
#include "tvr/mseries.hpp"

namespace tvr {

/// Genus-0 Phi for the nine unstable leg patterns, from the closed log forms
/// over y(x; a_L), expanded exactly. n must have total 1 or 2.
MSeries unstable_Phi(const LegCounts& n, int order);

/// Scalar part of the unstable W_0 (W / prod dx), minus the mixed derivative
/// of unstable_Phi; for two points on one leg this is the regular combination
/// y'y'/(y-y)^2 - 1/(x-x)^2.
MSeries unstable_W(const LegCounts& n, int order);

struct IdentityResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Every closed-form identity for the unstable Phi and their derivatives,
/// compared exactly with the amplitude side up to x^N in each variable.
std::vector<IdentityResult> verify_identities(int N);

}  // namespace tvr
