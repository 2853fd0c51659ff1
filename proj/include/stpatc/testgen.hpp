#pragma once

// Safety-based test-suite generation over the flattened model: seeded
// random walks, coverage tracking and CSV export.

#include <cstdint>
#include <string>
#include <vector>

#include "stpatc/efsm.hpp"
#include "stpatc/traceability.hpp"

namespace stpatc {

enum class Algorithm { Dfs, Bfs, Combined };
enum class Phase { Entry, During, Exit };
enum class StopCriterion { StateCoverage, TransitionCoverage, SsrCoverage };

struct GenConfig {
  Algorithm algorithm = Algorithm::Combined;
  int test_steps = 10;
  StopCriterion stop = StopCriterion::SsrCoverage;
  std::uint32_t seed = 0;
  /// Fixed input values (name, literal); inputs not listed are sampled from
  /// their declared domains each step.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::size_t max_paths = 1000;  // per (start,end) pair
  std::size_t max_depth = 0;     // 0 = 2 × |transitions|
};

struct TestCase {
  std::string id;
  std::string suite_id;
  std::vector<std::string> related_ssrs;
  std::vector<std::pair<std::string, std::string>> preconditions;  // at path start
  std::vector<std::string> actions;  // controlAction emissions, in order
  std::vector<std::pair<std::string, std::string>> postconditions;  // at path end
  std::string comment;  // "start=<state> path=<t1;t2>"

  // replay bookkeeping, not exported as CSV columns
  std::string start_state;  // leaf name
  std::vector<std::string> transition_ids;
};

struct TestSuite {
  std::string id;
  std::vector<TestCase> cases;
};

struct CoverageReport {
  std::size_t states_visited = 0, states_total = 0;
  std::size_t transitions_executed = 0, transitions_total = 0;
  std::size_t ssrs_covered = 0, ssrs_total = 0;

  double state_fraction() const;
  double transition_fraction() const;  // 1.0 on zero transitions
  double ssr_fraction() const;
};

struct GenResult {
  std::vector<TestSuite> suites;
  CoverageReport coverage;
  double elapsed_seconds = 0;
  std::size_t discarded_paths = 0;  // guard false under the sampled inputs
};

using Path = std::vector<const Transition*>;

/// Runs one phase's assignments left-to-right; controlAction emissions are
/// appended to `emitted` when given. EvalError carries the state and phase.
Env evaluate_state(const StateNode& s, Phase phase, const Env& env,
                   std::vector<std::string>* emitted = nullptr);

/// All simple paths start→end (each transition at most once per path),
/// depth-first with neighbors in truth-table order. start == end yields the
/// empty path first, then simple cycles.
std::vector<Path> dfs_paths(const Efsm& e, const std::string& start_ssid,
                            const std::string& end_ssid, std::size_t max_depth,
                            std::size_t max_paths);

/// Breadth-first tree from start: one shortest path per reached state
/// (including the empty path to start), tie-broken by truth-table order.
std::vector<Path> bfs_walk(const Efsm& e, const std::string& start_ssid);

/// The generation loop: per step, pick random start/end states, resample
/// inputs, enumerate paths per the configured algorithm, simulate each path
/// into a test case, deduplicate by path signature, and stop early when the
/// configured coverage criterion reaches 100%.
GenResult generate_test_cases(const Efsm& e, const TraceMatrix& tm,
                              const GenConfig& cfg);

/// Recount purely from suite contents; equals the generated report.
CoverageReport compute_coverage(const std::vector<TestSuite>& suites, const Efsm& e,
                                const TraceMatrix& tm);

/// Header `test_case_id,test_suite_id,related_ssrs,preconditions,actions,
/// postconditions,comment`, one row per case, then `#` comment lines with
/// the elapsed time and the three coverage percentages.
std::string export_csv(const std::vector<TestSuite>& suites,
                       const CoverageReport& report, double elapsed_seconds);

}  // namespace stpatc
