#include "stpatc/traceability.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

namespace stpatc {

std::string full_transition_string(const Efsm& e, const Transition& t) {
  std::vector<std::string> clauses;
  if (const StateNode* src = e.find(t.src))
    clauses.push_back("states==" + src->name);

  // The control action in effect after the step: the transition's own
  // assignment wins over the destination state's entry actions.
  const Action* ca = nullptr;
  for (const Action& a : t.actions)
    if (a.target == "controlAction") ca = &a;
  if (!ca)
    if (const StateNode* dst = e.find(t.dst)) ca = dst->control_action_assignment();
  if (ca)
    clauses.push_back("controlAction==" + render_expr(*ca->value, RenderStyle::Compact));

  std::string guard = t.guard_text();
  if (!guard.empty()) clauses.push_back(guard);

  std::string out;
  for (const std::string& c : clauses) {
    if (!out.empty()) out += " and ";
    out += c;
  }
  return out;
}

namespace {

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

double similarity(const std::string& a, const std::string& b) {
  std::vector<std::string> ta = tokenize(a), tb = tokenize(b);
  if (ta.empty() && tb.empty()) return 0;
  std::map<std::string, int> counts;
  for (const std::string& t : tb) ++counts[t];
  int matched = 0;
  for (const std::string& t : ta) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      ++matched;
      --it->second;
    }
  }
  double denom = static_cast<double>(std::max(ta.size(), tb.size()));
  return denom == 0 ? 0 : 100.0 * matched / denom;
}

std::vector<std::string> TraceMatrix::transitions_for(const std::string& ssr_id) const {
  std::vector<std::string> out;
  for (const TraceLink& l : links)
    if (l.ssr_id == ssr_id) out.push_back(l.transition_id);
  return out;
}

std::vector<std::string> TraceMatrix::ssrs_for(const std::string& transition_id) const {
  std::vector<std::string> out;
  for (const TraceLink& l : links)
    if (l.transition_id == transition_id) out.push_back(l.ssr_id);
  return out;
}

std::vector<std::string> TraceMatrix::unlinked_ssrs() const {
  std::vector<std::string> out;
  for (const std::string& id : ssr_ids)
    if (transitions_for(id).empty()) out.push_back(id);
  return out;
}

TraceMatrix build_matrix(const std::vector<Rssr>& rssrs, const Efsm& e,
                         double threshold) {
  if (threshold < 5 || threshold > 100)
    throw ThresholdRangeError("similarity threshold must lie in [5,100], got " +
                              std::to_string(threshold));
  TraceMatrix m;
  m.threshold = threshold;
  for (const Transition& t : e.truth_table) m.transition_ids.push_back(t.id);
  for (const Rssr& r : rssrs) {
    m.ssr_ids.push_back(r.id);
    for (const Transition& t : e.truth_table) {
      double score = similarity(r.text, full_transition_string(e, t));
      if (score >= threshold) m.links.push_back({r.id, t.id, score});
    }
  }
  return m;
}

std::string matrix_to_csv(const TraceMatrix& m) {
  std::ostringstream out;
  out << "ssr_id,transition_id,similarity\n";
  for (const TraceLink& l : m.links) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", l.score);
    std::string num = buf;
    while (!num.empty() && num.back() == '0') num.pop_back();
    if (!num.empty() && num.back() == '.') num.pop_back();
    out << l.ssr_id << ',' << l.transition_id << ',' << num << '\n';
  }
  return out.str();
}

}  // namespace stpatc
