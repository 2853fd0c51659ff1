#pragma once

// Context-table generation: value combinations per control action,
// combinatorial (t-wise) reduction, and RUCA/RSSR text rewriting.

#include <string>
#include <vector>

#include "stpatc/stpa.hpp"

namespace stpatc {

/// Cartesian product of the variables' domains in declaration order; the
/// last variable varies fastest. Hazard judgment left unset.
/// Throws UnboundedDomainError for a real variable without a partition.
std::vector<ContextCombination> full_combinations(
    const std::vector<ProcessModelVariable>& vars);

/// Deterministic greedy t-wise covering array (in-parameter-order): every
/// t-tuple of values over every t variables appears in at least one row,
/// and every row is a genuine member of the full product.
std::vector<ContextCombination> pairwise_reduce(
    const std::vector<ProcessModelVariable>& vars, int strength);

/// Renders a combination's assignment list as "P1=v1, P2=v2"; relational
/// values (e.g. ">=desiredSpeed") are concatenated verbatim to the name.
std::string render_combination(const ContextCombination& cs);

/// The timing words used in requirement texts: "any time" / "too early" /
/// "too late".
std::string timing_words(Timing t);

/// Rules 1-2: rewrites a hazardous combination into a refined unsafe
/// control action. Throws NotHazardousError unless cs is judged hazardous.
Ruca refine_uca(const ControlAction& ca, const ContextCombination& cs,
                std::string id = "");

/// Rules 3-4: rewrites a RUCA into a refined software safety requirement.
Rssr refine_ssr(const Ruca& r, std::string id = "");

}  // namespace stpatc
