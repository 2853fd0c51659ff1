#include "stpatc/testgen.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

namespace stpatc {

double CoverageReport::state_fraction() const {
  return states_total == 0 ? 1.0
                           : static_cast<double>(states_visited) / states_total;
}

double CoverageReport::transition_fraction() const {
  return transitions_total == 0
             ? 1.0
             : static_cast<double>(transitions_executed) / transitions_total;
}

double CoverageReport::ssr_fraction() const {
  return ssrs_total == 0 ? 1.0 : static_cast<double>(ssrs_covered) / ssrs_total;
}

namespace {

Value eval_rhs(const Expr& e, const Env& env, const std::string& where) {
  // Bare enum literals on the right-hand side are symbols, not variables.
  if (e.kind == Expr::Kind::Ident && !env.count(e.text)) return Value::symbol(e.text);
  return eval_expr(e, env, where);
}

std::vector<const Transition*> outgoing(const Efsm& e, const std::string& ssid) {
  std::vector<const Transition*> out;
  for (const Transition& t : e.truth_table)
    if (t.src == ssid) out.push_back(&t);
  return out;
}

std::string default_literal(const ChartVariable& v) {
  if (!v.initial.empty()) return v.initial;
  switch (v.domain.kind) {
    case DomainKind::Bool: return "FALSE";
    case DomainKind::Enum: return v.domain.values.empty() ? "" : v.domain.values.front();
    case DomainKind::Int: return std::to_string(v.domain.imin);
    case DomainKind::Real: {
      if (!v.domain.values.empty()) return v.domain.values.front();
      std::ostringstream s;
      s << v.domain.rmin;
      return s.str();
    }
  }
  return "";
}

std::string rounded(const std::string& literal) {
  // numeric literals are normalized to 6 decimal places for signatures
  char* end = nullptr;
  double d = std::strtod(literal.c_str(), &end);
  if (end == literal.c_str() || *end != '\0') return literal;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", d);
  return buf;
}

}  // namespace

Env evaluate_state(const StateNode& s, Phase phase, const Env& env,
                   std::vector<std::string>* emitted) {
  const std::vector<Action>* actions = nullptr;
  const char* phase_name = "";
  switch (phase) {
    case Phase::Entry: actions = &s.entry; phase_name = "entry"; break;
    case Phase::During: actions = &s.during; phase_name = "during"; break;
    case Phase::Exit: actions = &s.exit; phase_name = "exit"; break;
  }
  Env out = env;
  for (const Action& a : *actions) {
    Value v = eval_rhs(*a.value, out, s.name + "/" + phase_name);
    out[a.target] = v;
    if (a.target == "controlAction" && emitted)
      emitted->push_back("controlAction=" + v.literal());
  }
  return out;
}

std::vector<Path> dfs_paths(const Efsm& e, const std::string& start_ssid,
                            const std::string& end_ssid, std::size_t max_depth,
                            std::size_t max_paths) {
  std::vector<Path> found;
  Path path;
  std::set<const Transition*> used;
  auto walk = [&](auto&& self, const std::string& cur) -> void {
    if (found.size() >= max_paths) return;
    if (cur == end_ssid) found.push_back(path);
    if (path.size() >= max_depth) return;
    for (const Transition* t : outgoing(e, cur)) {
      if (used.count(t)) continue;
      used.insert(t);
      path.push_back(t);
      self(self, t->dst);
      path.pop_back();
      used.erase(t);
      if (found.size() >= max_paths) return;
    }
  };
  walk(walk, start_ssid);
  return found;
}

std::vector<Path> bfs_walk(const Efsm& e, const std::string& start_ssid) {
  std::vector<Path> found;
  std::set<std::string> reached{start_ssid};
  std::vector<std::pair<std::string, Path>> frontier{{start_ssid, {}}};
  found.push_back({});
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    auto [state, path] = frontier[head];
    for (const Transition* t : outgoing(e, state)) {
      if (reached.count(t->dst)) continue;
      reached.insert(t->dst);
      Path next = path;
      next.push_back(t);
      found.push_back(next);
      frontier.emplace_back(t->dst, std::move(next));
    }
  }
  return found;
}

GenResult generate_test_cases(const Efsm& e, const TraceMatrix& tm,
                              const GenConfig& cfg) {
  if (e.states.empty()) throw EmptyModelError("cannot generate tests for an empty model");
  if (cfg.test_steps < 1) throw ConfigError("test_steps must be at least 1");
  auto t0 = std::chrono::steady_clock::now();

  std::mt19937 rng(cfg.seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  auto fixed_input = [&](const std::string& name) -> const std::string* {
    for (const auto& [n, v] : cfg.inputs)
      if (n == name) return &v;
    return nullptr;
  };
  auto sample = [&](const ChartVariable& v) -> std::string {
    if (const std::string* lit = fixed_input(v.name)) return *lit;
    if (v.domain.finite()) {
      std::vector<std::string> lits = v.domain.enumerate(v.name);
      return lits[pick(lits.size())];
    }
    // partitionless real range: sample on the scaled integer grid
    double lo = v.domain.rmin * std::pow(10.0, v.domain.scale);
    double hi = v.domain.rmax * std::pow(10.0, v.domain.scale);
    auto span = static_cast<unsigned long long>(hi - lo) + 1;
    double scaled = lo + static_cast<double>(rng() % span);
    std::ostringstream s;
    s << scaled / std::pow(10.0, v.domain.scale);
    return s.str();
  };

  std::size_t max_depth =
      cfg.max_depth ? cfg.max_depth : 2 * e.truth_table.size();
  if (max_depth == 0) max_depth = 1;

  GenResult result;
  std::set<std::string> signatures;
  std::set<std::string> visited_states;
  std::set<std::string> executed_transitions;
  std::set<std::string> covered_ssrs;
  std::size_t linked_ssrs = 0;
  for (const std::string& id : tm.ssr_ids)
    if (!tm.transitions_for(id).empty()) ++linked_ssrs;

  auto refresh_coverage = [&] {
    result.coverage.states_total = e.states.size();
    result.coverage.transitions_total = e.truth_table.size();
    result.coverage.ssrs_total = linked_ssrs;
    result.coverage.states_visited = visited_states.size();
    result.coverage.transitions_executed = executed_transitions.size();
    result.coverage.ssrs_covered = covered_ssrs.size();
  };
  auto stop_reached = [&] {
    refresh_coverage();
    switch (cfg.stop) {
      case StopCriterion::StateCoverage: return result.coverage.state_fraction() >= 1.0;
      case StopCriterion::TransitionCoverage:
        return result.coverage.transition_fraction() >= 1.0;
      case StopCriterion::SsrCoverage: return result.coverage.ssr_fraction() >= 1.0;
    }
    return false;
  };

  int case_counter = 0;
  for (int step = 1; step <= cfg.test_steps; ++step) {
    const StateNode& start = e.states[pick(e.states.size())];
    const StateNode& end = e.states[pick(e.states.size())];

    // line 7: regenerate random values for the input variables
    Env base;
    std::vector<std::pair<std::string, std::string>> preconditions;
    for (const ChartVariable& v : e.variables) {
      std::string lit = v.scope == ChartVariable::Scope::Input ? sample(v)
                                                               : default_literal(v);
      base[v.name] = value_from_literal(lit, v.domain, v.name);
      preconditions.emplace_back(v.name, base[v.name].literal());
    }

    std::vector<Path> paths;
    if (cfg.algorithm == Algorithm::Dfs || cfg.algorithm == Algorithm::Combined)
      for (Path& p : dfs_paths(e, start.id, end.id, max_depth, cfg.max_paths))
        paths.push_back(std::move(p));
    if (cfg.algorithm == Algorithm::Bfs || cfg.algorithm == Algorithm::Combined)
      for (Path& p : bfs_walk(e, start.id)) paths.push_back(std::move(p));

    TestSuite suite;
    suite.id = "TS" + std::to_string(step);
    for (const Path& path : paths) {
      std::string signature = start.id;
      for (const Transition* t : path) signature += ";" + t->id;
      signature += "|";
      for (const auto& [name, lit] : preconditions)
        signature += name + "=" + rounded(lit) + ";";
      if (signatures.count(signature)) continue;

      // simulate: Entry(start), then guard → Exit(src) → actions → Entry(dst)
      TestCase tc;
      tc.suite_id = suite.id;
      tc.start_state = start.name;
      tc.preconditions = preconditions;
      Env env = base;
      try {
        env = evaluate_state(start, Phase::Entry, env, &tc.actions);
        bool ok = true;
        const StateNode* cur = &start;
        for (const Transition* t : path) {
          if (t->guard && !eval_bool(*t->guard, env, "guard of " + t->id)) {
            ok = false;
            break;
          }
          env = evaluate_state(*cur, Phase::Exit, env, &tc.actions);
          for (const Action& a : t->actions) {
            Value v = eval_rhs(*a.value, env, "action of " + t->id);
            env[a.target] = v;
            if (a.target == "controlAction")
              tc.actions.push_back("controlAction=" + v.literal());
          }
          cur = e.find(t->dst);
          env = evaluate_state(*cur, Phase::Entry, env, &tc.actions);
          tc.transition_ids.push_back(t->id);
        }
        if (!ok) {
          ++result.discarded_paths;
          continue;
        }
        tc.postconditions.emplace_back("state", cur->name);
        for (const ChartVariable& v : e.variables)
          if (v.scope == ChartVariable::Scope::Output)
            tc.postconditions.emplace_back(v.name, env.at(v.name).literal());
      } catch (const EvalError& err) {
        throw EvalError(std::string(err.what()) + " [path from " + start.name + "]");
      }

      signatures.insert(signature);
      tc.id = "TC" + std::to_string(++case_counter);
      tc.comment = "start=" + tc.start_state + " path=";
      for (std::size_t i = 0; i < tc.transition_ids.size(); ++i)
        tc.comment += (i ? ";" : "") + tc.transition_ids[i];
      for (const std::string& ssr : tm.ssr_ids) {
        bool hit = false;
        for (const std::string& t_id : tm.transitions_for(ssr))
          for (const std::string& on_path : tc.transition_ids)
            hit = hit || t_id == on_path;
        if (hit) tc.related_ssrs.push_back(ssr);
      }

      visited_states.insert(tc.start_state);
      for (const std::string& t_id : tc.transition_ids) {
        executed_transitions.insert(t_id);
        for (const Transition& t : e.truth_table)
          if (t.id == t_id)
            if (const StateNode* dst = e.find(t.dst)) visited_states.insert(dst->name);
      }
      for (const std::string& ssr : tc.related_ssrs) covered_ssrs.insert(ssr);
      suite.cases.push_back(std::move(tc));
    }
    result.suites.push_back(std::move(suite));
    if (stop_reached()) break;  // lines 13–16: stop criterion at 100%
  }

  refresh_coverage();
  auto t1 = std::chrono::steady_clock::now();
  result.elapsed_seconds =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0;
  return result;
}

CoverageReport compute_coverage(const std::vector<TestSuite>& suites, const Efsm& e,
                                const TraceMatrix& tm) {
  CoverageReport report;
  report.states_total = e.states.size();
  report.transitions_total = e.truth_table.size();
  for (const std::string& id : tm.ssr_ids)
    if (!tm.transitions_for(id).empty()) ++report.ssrs_total;

  std::set<std::string> states, transitions, ssrs;
  for (const TestSuite& s : suites)
    for (const TestCase& tc : s.cases) {
      states.insert(tc.start_state);
      for (const std::string& t_id : tc.transition_ids) {
        transitions.insert(t_id);
        for (const Transition& t : e.truth_table)
          if (t.id == t_id)
            if (const StateNode* dst = e.find(t.dst)) states.insert(dst->name);
      }
      for (const std::string& ssr : tc.related_ssrs) ssrs.insert(ssr);
    }
  report.states_visited = states.size();
  report.transitions_executed = transitions.size();
  report.ssrs_covered = ssrs.size();
  return report;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string joined(const std::vector<std::string>& parts) {
  std::string out;
  for (const std::string& p : parts) {
    if (!out.empty()) out += ";";
    out += p;
  }
  return out;
}

std::string joined_pairs(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::string out;
  for (const auto& [name, value] : pairs) {
    if (!out.empty()) out += ";";
    out += name + "=" + value;
  }
  return out;
}

std::string percent_line(const char* label, std::size_t num, std::size_t den,
                         double fraction) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "# %s=%zu/%zu=%.1f%%\n", label, num, den,
                100.0 * fraction);
  return buf;
}

}  // namespace

std::string export_csv(const std::vector<TestSuite>& suites,
                       const CoverageReport& report, double elapsed_seconds) {
  std::ostringstream out;
  out << "test_case_id,test_suite_id,related_ssrs,preconditions,actions,"
         "postconditions,comment\n";
  for (const TestSuite& s : suites)
    for (const TestCase& tc : s.cases)
      out << csv_field(tc.id) << ',' << csv_field(tc.suite_id) << ','
          << csv_field(joined(tc.related_ssrs)) << ','
          << csv_field(joined_pairs(tc.preconditions)) << ','
          << csv_field(joined(tc.actions)) << ','
          << csv_field(joined_pairs(tc.postconditions)) << ','
          << csv_field(tc.comment) << '\n';
  char elapsed[64];
  std::snprintf(elapsed, sizeof elapsed, "# elapsed_seconds=%.3f\n", elapsed_seconds);
  out << elapsed;
  out << percent_line("state_coverage", report.states_visited, report.states_total,
                      report.state_fraction());
  out << percent_line("transition_coverage", report.transitions_executed,
                      report.transitions_total, report.transition_fraction());
  out << percent_line("ssr_coverage", report.ssrs_covered, report.ssrs_total,
                      report.ssr_fraction());
  return out.str();
}

}  // namespace stpatc
