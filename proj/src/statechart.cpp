#include "stpatc/statechart.hpp"

#include <cctype>
#include <set>

#include "domain_xml.hpp"
#include "stpatc/xml.hpp"

namespace stpatc {

namespace {

std::string trimmed(std::string s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void append_actions(std::vector<Action>& dst, const std::vector<Action>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

/// Normalizes a combined label block: one "phase[, phase]: actions" clause
/// per line, e.g. "entry, during: controlAction = Opendoor".
void apply_label(StateNode& node, const std::string& text, const std::string& path) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = trimmed(text.substr(start, end - start));
    start = end + 1;
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw SchemaError(path, "label line has no phase prefix: '" + line + "'");
    std::vector<Action> actions = parse_actions(line.substr(colon + 1));
    std::size_t p = 0;
    std::string phases = line.substr(0, colon);
    while (p <= phases.size()) {
      std::size_t comma = phases.find(',', p);
      if (comma == std::string::npos) comma = phases.size();
      std::string phase = lower(trimmed(phases.substr(p, comma - p)));
      p = comma + 1;
      if (phase == "entry") append_actions(node.entry, actions);
      else if (phase == "during") append_actions(node.during, actions);
      else if (phase == "exit") append_actions(node.exit, actions);
      else throw SchemaError(path, "unknown label phase '" + phase + "'");
    }
  }
}

StateNode parse_state(const xml::Node& n, const std::string& parent_id) {
  std::string path = "state";
  StateNode node;
  node.id = n.need("ssid", path);
  node.name = n.need("name", path);
  node.parent_id = parent_id;
  path = "state '" + node.name + "'";
  if (const std::string* order = n.attr("order")) {
    try {
      node.order = std::stoi(*order);
    } catch (const std::exception&) {
      throw SchemaError(path, "order is not an integer");
    }
  }
  for (const xml::Node& c : n.children) {
    if (c.name == "entry") append_actions(node.entry, parse_actions(c.text));
    else if (c.name == "during") append_actions(node.during, parse_actions(c.text));
    else if (c.name == "exit") append_actions(node.exit, parse_actions(c.text));
    else if (c.name == "label") apply_label(node, c.text, path);
    else if (c.name == "state") node.children.push_back(parse_state(c, node.id));
    else throw SchemaError(path, "unexpected element <" + c.name + ">");
  }
  if (!node.children.empty()) {
    const std::string* d = n.attr("decomposition");
    if (!d)
      throw DecompositionError(path + ": superstate without a decomposition attribute");
    if (*d == "OR") node.decomposition = Decomposition::Or;
    else if (*d == "AND") node.decomposition = Decomposition::And;
    else throw DecompositionError(path + ": unknown decomposition '" + *d + "'");
    if (node.decomposition == Decomposition::And) {
      std::set<int> orders;
      for (const StateNode& c : node.children)
        if (!orders.insert(c.order).second)
          throw DecompositionError(path + ": AND children share execution order " +
                                   std::to_string(c.order));
    }
  } else if (n.attr("decomposition")) {
    throw DecompositionError(path + ": leaf state declares a decomposition");
  }
  return node;
}

void collect_ids(const StateNode& n, std::set<std::string>& ids, const char* what) {
  if (!ids.insert(n.id).second)
    throw DuplicateIdError(n.id, std::string("duplicate ") + what + " '" + n.id + "'");
  for (const StateNode& c : n.children) collect_ids(c, ids, what);
}

StateNode* find_mut(StateNode& n, const std::string& ssid) {
  if (n.id == ssid) return &n;
  for (StateNode& c : n.children)
    if (StateNode* hit = find_mut(c, ssid)) return hit;
  return nullptr;
}

const StateNode* find_in(const StateNode& n, const std::string& ssid) {
  if (n.id == ssid) return &n;
  for (const StateNode& c : n.children)
    if (const StateNode* hit = find_in(c, ssid)) return hit;
  return nullptr;
}

void typecheck_state(const StateNode& n, const VarTable& vt) {
  auto check = [&](const std::vector<Action>& actions, const char* phase) {
    for (const Action& a : actions) {
      std::string where = "state '" + n.name + "' " + phase + " action";
      const VarTable::Entry* target = vt.find(a.target);
      if (!target) throw ExprTypeError(where + ": unknown target '" + a.target + "'");
      typecheck_assignment(target->domain, *a.value, vt, where);
    }
  };
  check(n.entry, "entry");
  check(n.during, "during");
  check(n.exit, "exit");
  for (const StateNode& c : n.children) typecheck_state(c, vt);
}

void write_state(const StateNode& n, xml::Node& out) {
  xml::Node& sn = out.children.emplace_back();
  sn.name = "state";
  sn.attrs = {{"ssid", n.id}, {"name", n.name}};
  if (!n.children.empty())
    sn.attrs.emplace_back("decomposition",
                          n.decomposition == Decomposition::Or ? "OR" : "AND");
  if (n.order != 0) sn.attrs.emplace_back("order", std::to_string(n.order));
  auto phase = [&](const std::vector<Action>& actions, const char* name) {
    if (actions.empty()) return;
    xml::Node& pn = sn.children.emplace_back();
    pn.name = name;
    pn.text = render_actions(actions);
  };
  phase(n.entry, "entry");
  phase(n.during, "during");
  phase(n.exit, "exit");
  for (const StateNode& c : n.children) write_state(c, sn);
}

}  // namespace

const Action* StateNode::control_action_assignment() const {
  const Action* hit = nullptr;
  for (const std::vector<Action>* phase : {&entry, &during, &exit})
    for (const Action& a : *phase)
      if (a.target == "controlAction") hit = &a;
  return hit;
}

std::string Transition::guard_text() const {
  return guard ? render_expr(*guard) : "";
}

std::string Transition::action_text() const { return render_actions(actions); }

const StateNode* StatechartTree::find(const std::string& ssid) const {
  if (ssid == root.id) return &root;
  for (const StateNode& c : root.children)
    if (const StateNode* hit = find_in(c, ssid)) return hit;
  return nullptr;
}

const ChartVariable* StatechartTree::find_variable(const std::string& name) const {
  for (const ChartVariable& v : variables)
    if (v.name == name) return &v;
  return nullptr;
}

namespace {

void collect(const StateNode& n, bool leaves_only, std::vector<const StateNode*>& out) {
  if (!leaves_only || n.leaf()) out.push_back(&n);
  for (const StateNode& c : n.children) collect(c, leaves_only, out);
}

}  // namespace

std::vector<const StateNode*> StatechartTree::leaves() const {
  std::vector<const StateNode*> out;
  for (const StateNode& c : root.children) collect(c, true, out);
  return out;
}

std::vector<const StateNode*> StatechartTree::all_states() const {
  std::vector<const StateNode*> out;
  for (const StateNode& c : root.children) collect(c, false, out);
  return out;
}

std::vector<const Transition*> StatechartTree::truth_table() const {
  std::vector<const Transition*> out;
  for (const Transition& t : transitions)
    if (!t.is_default) out.push_back(&t);
  return out;
}

VarTable StatechartTree::var_table() const {
  VarTable vt;
  for (const ChartVariable& v : variables) vt.entries.push_back({v.name, v.domain});
  return vt;
}

StatechartTree parse_statechart(std::string_view file_bytes) {
  xml::Node doc = xml::parse(file_bytes);
  if (doc.name != "chart") throw SchemaError("/", "root element must be <chart>");

  StatechartTree tree;
  tree.name = doc.attr_or("name", "");
  tree.root.name = "root";

  std::set<std::string> var_names;
  for (const xml::Node* v : doc.all("variable")) {
    std::string vpath = "chart/variable";
    ChartVariable var;
    var.name = v->need("name", vpath);
    vpath += " '" + var.name + "'";
    var.domain = detail::parse_domain(*v, vpath);
    var.initial = v->attr_or("initial", "");
    const std::string& scope = v->need("scope", vpath);
    if (scope == "input") var.scope = ChartVariable::Scope::Input;
    else if (scope == "local") var.scope = ChartVariable::Scope::Local;
    else if (scope == "output") var.scope = ChartVariable::Scope::Output;
    else throw SchemaError(vpath, "unknown scope '" + scope + "'");
    if (!var.initial.empty())
      value_from_literal(var.initial, var.domain, vpath + " initial");
    if (!var_names.insert(var.name).second)
      throw DuplicateIdError(var.name, "duplicate variable '" + var.name + "'");
    tree.variables.push_back(std::move(var));
  }

  for (const xml::Node& c : doc.children)
    if (c.name == "state") tree.root.children.push_back(parse_state(c, tree.root.id));

  // Synthetic root id must collide with no real ssid (it anchors parent links).
  std::set<std::string> ssids;
  tree.root.id = "__root__";
  for (const StateNode& c : tree.root.children) collect_ids(c, ssids, "ssid");
  while (ssids.count(tree.root.id)) tree.root.id += "_";
  for (StateNode& c : tree.root.children) c.parent_id = tree.root.id;

  VarTable vt = tree.var_table();
  int auto_id = 0;
  for (const xml::Node* t : doc.all("transition")) {
    std::string tpath = "chart/transition";
    Transition tr;
    tr.is_default = t->attr_or("default", "") == "true";
    tr.id = t->attr_or("id", (tr.is_default ? "d" : "t") + std::to_string(++auto_id));
    tpath += " '" + tr.id + "'";
    tr.dst = t->need("dst", tpath);
    if (!tr.is_default) tr.src = t->need("src", tpath);
    tr.event = t->attr_or("event", "");
    if (const std::string* g = t->attr("guard")) {
      tr.guard = parse_expression(*g);
      typecheck_bool(*tr.guard, vt, tpath + " guard");
    }
    if (const std::string* a = t->attr("action")) {
      tr.actions = parse_actions(*a);
      for (const Action& act : tr.actions) {
        const VarTable::Entry* target = vt.find(act.target);
        if (!target)
          throw ExprTypeError(tpath + " action: unknown target '" + act.target + "'");
        typecheck_assignment(target->domain, *act.value, vt, tpath + " action");
      }
    }
    if (!tr.src.empty() && !ssids.count(tr.src))
      throw UnknownStateRefError(tpath + ": unknown source state '" + tr.src + "'");
    if (!ssids.count(tr.dst))
      throw UnknownStateRefError(tpath + ": unknown destination state '" + tr.dst + "'");
    if (tr.is_default)
      if (StateNode* target = find_mut(tree.root, tr.dst)) target->is_default = true;
    tree.transitions.push_back(std::move(tr));
  }

  typecheck_state(tree.root, vt);
  return tree;
}

std::string render_statechart(const StatechartTree& t) {
  xml::Node doc;
  doc.name = "chart";
  if (!t.name.empty()) doc.attrs.emplace_back("name", t.name);
  for (const ChartVariable& v : t.variables) {
    xml::Node& vn = doc.children.emplace_back();
    vn.name = "variable";
    vn.attrs = {{"name", v.name}};
    detail::write_domain(v.domain, vn);
    if (!v.initial.empty()) vn.attrs.emplace_back("initial", v.initial);
    switch (v.scope) {
      case ChartVariable::Scope::Input: vn.attrs.emplace_back("scope", "input"); break;
      case ChartVariable::Scope::Local: vn.attrs.emplace_back("scope", "local"); break;
      case ChartVariable::Scope::Output: vn.attrs.emplace_back("scope", "output"); break;
    }
  }
  for (const StateNode& s : t.root.children) write_state(s, doc);
  for (const Transition& tr : t.transitions) {
    xml::Node& tn = doc.children.emplace_back();
    tn.name = "transition";
    tn.attrs = {{"id", tr.id}};
    if (!tr.src.empty()) tn.attrs.emplace_back("src", tr.src);
    tn.attrs.emplace_back("dst", tr.dst);
    if (!tr.event.empty()) tn.attrs.emplace_back("event", tr.event);
    if (tr.guard) tn.attrs.emplace_back("guard", tr.guard_text());
    if (!tr.actions.empty()) tn.attrs.emplace_back("action", tr.action_text());
    if (tr.is_default) tn.attrs.emplace_back("default", "true");
  }
  return xml::write(doc);
}

}  // namespace stpatc
