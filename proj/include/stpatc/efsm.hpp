#pragma once

// Flattening of the hierarchical statechart into the safe test model:
// an extended finite state machine over leaf states only.

#include <string>
#include <vector>

#include "stpatc/statechart.hpp"

namespace stpatc {

struct Efsm {
  std::vector<StateNode> states;  // leaf copies; children always empty
  std::string initial;            // ssid of the initial leaf
  std::vector<Transition> truth_table;  // endpoints are members of states
  std::vector<ChartVariable> variables;

  const StateNode* find(const std::string& ssid) const;
  const StateNode* find_by_name(const std::string& name) const;
  VarTable var_table() const;
};

/// Appends a copy of `t` with endpoints (src, dst), preserving event, guard
/// and actions; `t` itself is never mutated.
void update_truth_table(const StateNode& src, const StateNode& dst,
                        const Transition& t, std::vector<Transition>& table);

/// Rewrites the truth-table until no endpoint is a superstate, applying the
/// six decomposition cases (source children × destination children, with
/// OR destinations retargeted to their default child). The initial state is
/// the transitive default leaf from the root.
/// Throws NoDefaultChildError / NonterminationError on malformed trees.
Efsm flatten(const StatechartTree& t);

/// Debug dump: one DOT node per leaf state, one edge per transition
/// labeled with its guard.
std::string efsm_to_dot(const Efsm& e);

}  // namespace stpatc
