#pragma once

// SMV model generation, STPA/statechart consistency checking, the internal
// bounded verifier, and the external-checker bridge.

#include <string>
#include <vector>

#include "stpatc/efsm.hpp"
#include "stpatc/ltl.hpp"
#include "stpatc/statechart.hpp"
#include "stpatc/stpa.hpp"

namespace stpatc {

// -- consistency -----------------------------------------------------------

struct ConsistencyReport {
  enum class Match { Matched, DoesNotMatch, Unknown };
  struct Entry {
    std::string category;  // "variable" | "state" | "control-action"
    std::string name;
    Match verdict = Match::Matched;
    std::string detail;
  };
  std::vector<Entry> entries;

  bool consistent() const;  // no does-not-match entry
  std::string to_text() const;
};

/// Name-by-name comparison (case-sensitive after trimming): process-model
/// variables vs chart variables, state-variable values vs state names,
/// control actions vs the chart's controlAction enum. Chart-only variables
/// are reported as unknown.
ConsistencyReport check_consistency(const Controller& c, const StatechartTree& t);

// -- model -----------------------------------------------------------------

struct SmvArm {
  std::string condition;  // "TRUE" for the closing arm
  std::string result;
};

struct SmvCaseBlock {
  std::string target;  // "states" or a variable name
  std::vector<SmvArm> arms;
};

struct SmvVarDecl {
  std::string name;
  std::string type;  // rendered type: "boolean", "{A,B}", "0..200"
};

struct SmvInstance {
  std::string name;
  std::string module;
  std::vector<std::string> args;
};

struct SmvModule {
  std::string name;  // "main" or "Sub_<StateName>"
  std::vector<std::string> params;
  std::vector<SmvVarDecl> vars;
  std::vector<SmvInstance> instances;
  std::vector<std::pair<std::string, std::string>> inits;  // (target, value)
  std::vector<SmvCaseBlock> cases;
};

struct SmvModel {
  std::vector<SmvModule> modules;  // submodules first, main last
  std::vector<std::string> ltlspecs;
};

/// Recursive descent over superstates: the root becomes MODULE main, each
/// superstate a Sub_<Name> module instantiated by its parent. Requires a
/// consistent pair (throws ConsistencyError otherwise). Formulae are
/// rewritten onto the instance paths and appended as LTLSPEC lines.
SmvModel generate_smv(const StatechartTree& t, const Controller& c,
                      const std::vector<LtlFormula>& formulas);

/// Deterministic text per the shipped golden files.
std::string render_smv(const SmvModel& m);

// -- verification ----------------------------------------------------------

struct Configuration {
  std::string state;                                       // leaf state name
  std::vector<std::pair<std::string, std::string>> values;  // (name, literal)
};

struct Verdict {
  enum class Result { Satisfied, Violated, Inconclusive };
  std::string formula_id;
  Result result = Result::Inconclusive;
  std::vector<Configuration> trace;  // violations only; starts at the initial
  std::string detail;
};

/// Explicit-state exploration of the EFSM's configuration graph up to
/// `bound` steps, with input variables resampled over their full domains at
/// every step. The four rule templates are decided exactly when the graph
/// is exhausted within the bound; otherwise the verdict is inconclusive.
/// Throws InfiniteDomainError when a referenced variable is not finite.
Verdict bounded_check(const Efsm& e, const Controller& c, const LtlFormula& f,
                      int bound);

/// Runs an installed SMV model checker on the rendered text and parses one
/// verdict per LTLSPEC. Throws CheckerNotFoundError / CheckerOutputParseError.
std::vector<Verdict> run_external_checker(const std::string& smv_text,
                                          const std::string& checker_path,
                                          int timeout_seconds);

}  // namespace stpatc
