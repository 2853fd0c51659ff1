#pragma once

// Hierarchical statechart (safe behavioural model): tree of state nodes,
// typed variables and the transition truth-table.

#include <string>
#include <string_view>
#include <vector>

#include "stpatc/expr.hpp"

namespace stpatc {

enum class Decomposition { Or, And };

struct StateNode {
  std::string id;  // ssid
  std::string name;
  std::string parent_id;
  Decomposition decomposition = Decomposition::Or;  // meaningful when children exist
  std::vector<Action> entry, during, exit;
  std::vector<StateNode> children;  // document order
  bool is_default = false;          // targeted by a default transition
  int order = 0;                    // execution order among AndState siblings

  bool leaf() const { return children.empty(); }
  /// Control action emitted by this node's actions in a given phase list,
  /// i.e. the last assignment to `controlAction`, if any.
  const Action* control_action_assignment() const;
};

struct ChartVariable {
  enum class Scope { Input, Local, Output };
  std::string name;
  Domain domain;
  std::string initial;  // value literal; empty means domain default
  Scope scope = Scope::Local;
};

struct Transition {
  std::string id;
  std::string src;  // empty for default transitions
  std::string dst;
  std::string event;  // optional; empty = evaluated on every step
  ExprPtr guard;      // optional
  std::vector<Action> actions;
  bool is_default = false;

  std::string guard_text() const;   // canonical rendering, empty when absent
  std::string action_text() const;  // canonical rendering, empty when absent
};

struct StatechartTree {
  std::string name;
  StateNode root;  // synthetic; id chosen to collide with no real ssid
  std::vector<Transition> transitions;  // truth-table, document order
  std::vector<ChartVariable> variables;

  const StateNode* find(const std::string& ssid) const;
  const ChartVariable* find_variable(const std::string& name) const;
  std::vector<const StateNode*> leaves() const;
  std::vector<const StateNode*> all_states() const;  // excluding the root
  /// Non-default rows of the truth-table.
  std::vector<const Transition*> truth_table() const;
  /// Guard/action typing context: declared variables only.
  VarTable var_table() const;
};

/// Parses the statechart XML dialect; guards and actions are parsed and
/// type-checked against the declared variables. Combined "entry, during:"
/// label blocks are normalized into the per-phase action lists.
StatechartTree parse_statechart(std::string_view file_bytes);

/// Canonical serialization; parse ∘ render round-trips.
std::string render_statechart(const StatechartTree& t);

}  // namespace stpatc
