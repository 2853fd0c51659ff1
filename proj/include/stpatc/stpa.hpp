#pragma once

// Domain model for STPA analysis artifacts and the project-file parser.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stpatc/expr.hpp"

namespace stpatc {

struct Accident {
  std::string id;
  std::string name;
  std::string description;
};

struct Hazard {
  std::string id;
  std::string name;
  std::string description;
  std::vector<std::string> accident_ids;
};

struct ControlAction {
  std::string id;
  std::string name;  // identifier token
  std::string description;
};

enum class VarKind { InternalState, Internal, Interaction, Environmental };

std::string to_string(VarKind k);
VarKind var_kind_from_string(const std::string& s, const std::string& path);

struct ProcessModelVariable {
  std::string name;
  VarKind kind = VarKind::Internal;
  Domain domain;
};

enum class HazardType { NotProvided, Provided, WrongTiming, StoppedTooSoonAppliedTooLong };

std::string to_string(HazardType t);
HazardType hazard_type_from_string(const std::string& s, const std::string& path);

struct Uca {
  std::string id;
  std::string action_id;
  HazardType hazard_type = HazardType::Provided;
  std::vector<std::string> hazard_ids;
  std::string text;
};

enum class CombinationContext { Providing, NotProviding };
enum class Timing { AnyTime, TooEarly, TooLate };

std::string to_string(CombinationContext c);
std::string to_string(Timing t);

/// One row of a context table: an assignment of values to process-model
/// variables plus the analyst's hazard judgment. A value literal starting
/// with a relational operator (e.g. ">=desiredSpeed") is carried verbatim.
struct ContextCombination {
  enum class Hazardous { Unset, Yes, No };

  std::vector<std::pair<std::string, std::string>> assignments;  // (variable, value)
  Hazardous hazardous = Hazardous::Unset;
  std::vector<std::string> hazard_ids;  // set when hazardous = Yes
  CombinationContext context = CombinationContext::Providing;
  std::optional<Timing> timing;  // Providing only
};

/// A judged combination row attached to a control action, as authored in
/// the project file. The optional id becomes the derived requirement id.
struct CombinationRow {
  std::string id;  // may be empty; then requirements are numbered in order
  std::string action_id;
  ContextCombination combination;
};

struct Ruca {
  std::string id;
  std::string action_id;
  std::string action_name;
  ContextCombination combination;
  std::string text;
};

struct Rssr {
  std::string id;
  Ruca source;
  std::string text;
  std::string ltl_id;  // filled by the LTL generator
};

struct Controller {
  std::string id;
  std::string name;
  std::vector<ControlAction> control_actions;
  std::vector<ProcessModelVariable> process_model;
  std::vector<Uca> ucas;
  std::vector<CombinationRow> combinations;

  const ControlAction* find_action(const std::string& id_or_name) const;
  const ProcessModelVariable* find_variable(const std::string& name) const;
};

struct StpaProject {
  std::vector<Accident> accidents;
  std::vector<Hazard> hazards;
  std::vector<Controller> controllers;

  const Hazard* find_hazard(const std::string& id) const;
};

// -- operations ------------------------------------------------------------

/// Parses the project XML dialect. Cross-references (hazard ids, control
/// action ids) are resolved eagerly; dangling ids raise ReferenceError and
/// duplicated ids DuplicateIdError.
StpaProject parse_stpa_project(std::string_view file_bytes);

/// Canonical serialization; parse_stpa_project(render_project(p)) == p.
std::string render_project(const StpaProject& p);

struct Issue {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string path;
  std::string message;
};

/// Structural checks beyond what parsing enforces: duplicate names, empty
/// enum domains, inverted ranges, mis-typed combination values. Empty
/// result iff all invariants hold; never mutates the project.
std::vector<Issue> validate_project(const StpaProject& p);

}  // namespace stpatc
