#include "stpatc/efsm.hpp"

#include <map>
#include <sstream>

namespace stpatc {

const StateNode* Efsm::find(const std::string& ssid) const {
  for (const StateNode& s : states)
    if (s.id == ssid) return &s;
  return nullptr;
}

const StateNode* Efsm::find_by_name(const std::string& name) const {
  for (const StateNode& s : states)
    if (s.name == name) return &s;
  return nullptr;
}

VarTable Efsm::var_table() const {
  VarTable vt;
  for (const ChartVariable& v : variables) vt.entries.push_back({v.name, v.domain});
  return vt;
}

void update_truth_table(const StateNode& src, const StateNode& dst,
                        const Transition& t, std::vector<Transition>& table) {
  Transition copy = t;
  copy.src = src.id;
  copy.dst = dst.id;
  table.push_back(std::move(copy));
}

namespace {

const StateNode& default_child(const StateNode& super) {
  if (super.decomposition == Decomposition::And) {
    // AND entry enters the lowest-ordered region.
    const StateNode* best = nullptr;
    for (const StateNode& c : super.children)
      if (!best || c.order < best->order) best = &c;
    return *best;
  }
  for (const StateNode& c : super.children)
    if (c.is_default) return c;
  throw NoDefaultChildError("superstate '" + super.name + "' has no default child");
}

const StateNode& initial_leaf(const StatechartTree& t) {
  const StateNode* cur = &t.root;
  while (!cur->children.empty()) {
    if (cur == &t.root) {
      // Level 0: follow the default transition among root's children.
      const StateNode* def = nullptr;
      for (const StateNode& c : cur->children)
        if (c.is_default) def = def ? def : &c;
      if (!def && cur->children.size() == 1) def = &cur->children.front();
      if (!def)
        throw NoDefaultChildError("no default transition selects a top-level state");
      cur = def;
    } else {
      cur = &default_child(*cur);
    }
  }
  return *cur;
}

StateNode leaf_copy(const StateNode& s) {
  StateNode copy = s;
  copy.children.clear();
  return copy;
}

}  // namespace

Efsm flatten(const StatechartTree& t) {
  Efsm e;
  for (const StateNode* leaf : t.leaves()) e.states.push_back(leaf_copy(*leaf));
  e.variables = t.variables;
  e.initial = initial_leaf(t).id;

  for (const Transition* row : t.truth_table()) e.truth_table.push_back(*row);

  auto node = [&](const std::string& ssid) -> const StateNode& {
    const StateNode* s = t.find(ssid);
    if (!s) throw UnknownStateRefError("transition references unknown state '" + ssid + "'");
    return *s;
  };

  std::vector<Transition>& table = e.truth_table;
  std::size_t limit =
      (t.all_states().size() + 1) * (table.size() + 1) * 4 + 16;
  std::size_t iterations = 0;
  for (;;) {
    std::size_t hit = table.size();
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!node(table[i].src).leaf() || !node(table[i].dst).leaf()) {
        hit = i;
        break;
      }
    }
    if (hit == table.size()) break;
    if (++iterations > limit)
      throw NonterminationError("truth-table rewriting did not terminate");

    Transition row = table[static_cast<std::size_t>(hit)];
    table.erase(table.begin() + static_cast<std::ptrdiff_t>(hit));
    const StateNode& src = node(row.src);
    const StateNode& dst = node(row.dst);

    std::vector<const StateNode*> sources, destinations;
    if (src.leaf()) sources.push_back(&src);
    else
      for (const StateNode& c : src.children) sources.push_back(&c);
    if (dst.leaf()) destinations.push_back(&dst);
    else if (dst.decomposition == Decomposition::Or)
      destinations.push_back(&default_child(dst));
    else
      for (const StateNode& c : dst.children) destinations.push_back(&c);

    for (const StateNode* s : sources)
      for (const StateNode* d : destinations) update_truth_table(*s, *d, row, table);
  }

  // A transition whose endpoint was a superstate is now several rows; keep the
  // original id on the first and number the rest so ids stay unique.
  std::map<std::string, int> seen;
  for (Transition& row : table) {
    int n = ++seen[row.id];
    if (n > 1) row.id += "#" + std::to_string(n);
  }
  return e;
}

std::string efsm_to_dot(const Efsm& e) {
  std::ostringstream out;
  out << "digraph efsm {\n";
  out << "  rankdir=LR;\n";
  for (const StateNode& s : e.states) {
    out << "  \"" << s.name << "\"";
    if (s.id == e.initial) out << " [shape=doublecircle]";
    out << ";\n";
  }
  for (const Transition& t : e.truth_table) {
    const StateNode* src = e.find(t.src);
    const StateNode* dst = e.find(t.dst);
    out << "  \"" << (src ? src->name : t.src) << "\" -> \""
        << (dst ? dst->name : t.dst) << "\"";
    std::string label = t.guard_text();
    if (!label.empty()) out << " [label=\"" << label << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace stpatc
