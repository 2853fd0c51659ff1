#pragma once

// Token-similarity traceability between safe software requirements and the
// transitions of the flattened safe test model.

#include <string>
#include <vector>

#include "stpatc/efsm.hpp"
#include "stpatc/stpa.hpp"

namespace stpatc {

/// Natural-language rendering of a truth-table row: source state, the
/// control action emitted when the transition is taken, and the guard, as
/// "states==<Src> and controlAction==<CA> and <guard>". Absent clauses are
/// omitted.
std::string full_transition_string(const Efsm& e, const Transition& t);

/// Percentage of matching tokens between two sentences: both are lowercased
/// and split on non-alphanumeric runs, tokens are matched one-to-one without
/// replacement, and the match count is divided by the larger token count.
double similarity(const std::string& a, const std::string& b);

struct TraceLink {
  std::string ssr_id;
  std::string transition_id;
  double score = 0;  // percentage
};

struct TraceMatrix {
  double threshold = 0;
  std::vector<std::string> ssr_ids;         // row order
  std::vector<std::string> transition_ids;  // column order (truth-table)
  std::vector<TraceLink> links;             // ssr-major, column order within a row

  std::vector<std::string> transitions_for(const std::string& ssr_id) const;
  std::vector<std::string> ssrs_for(const std::string& transition_id) const;
  /// Requirements with no transition at or above the threshold.
  std::vector<std::string> unlinked_ssrs() const;
};

/// Scores every requirement against every truth-table transition and keeps
/// the pairs at or above `threshold` (a percentage in [5,100]; anything else
/// raises ThresholdRangeError).
TraceMatrix build_matrix(const std::vector<Rssr>& rssrs, const Efsm& e,
                         double threshold);

/// One line per kept link: `ssr_id,transition_id,similarity`.
std::string matrix_to_csv(const TraceMatrix& m);

}  // namespace stpatc
