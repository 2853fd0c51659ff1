#include "stpatc/smv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unistd.h>

namespace stpatc {

// -- consistency -----------------------------------------------------------

bool ConsistencyReport::consistent() const {
  for (const Entry& e : entries)
    if (e.verdict == Match::DoesNotMatch) return false;
  return true;
}

std::string ConsistencyReport::to_text() const {
  std::ostringstream out;
  for (const Entry& e : entries) {
    out << e.category << ' ' << e.name << ": ";
    switch (e.verdict) {
      case Match::Matched: out << "matched"; break;
      case Match::DoesNotMatch: out << "does not match"; break;
      case Match::Unknown: out << "unknown"; break;
    }
    if (!e.detail.empty()) out << " (" << e.detail << ")";
    out << '\n';
  }
  return out.str();
}

ConsistencyReport check_consistency(const Controller& c, const StatechartTree& t) {
  ConsistencyReport report;
  std::vector<const StateNode*> states = t.all_states();
  auto state_named = [&](const std::string& name) {
    for (const StateNode* s : states)
      if (s->name == name) return true;
    return false;
  };
  const ChartVariable* ca_var = t.find_variable("controlAction");

  for (const ProcessModelVariable& v : c.process_model) {
    if (v.kind == VarKind::InternalState) {
      // State variables are compared through their values: each one must
      // name a chart state.
      for (const std::string& value : v.domain.values) {
        ConsistencyReport::Entry e;
        e.category = "state";
        e.name = value;
        e.verdict = state_named(value) ? ConsistencyReport::Match::Matched
                                       : ConsistencyReport::Match::DoesNotMatch;
        if (e.verdict == ConsistencyReport::Match::DoesNotMatch)
          e.detail = "no chart state has this name";
        report.entries.push_back(std::move(e));
      }
      continue;
    }
    ConsistencyReport::Entry e;
    e.category = "variable";
    e.name = v.name;
    const ChartVariable* chart = t.find_variable(v.name);
    if (!chart) {
      e.verdict = ConsistencyReport::Match::DoesNotMatch;
      e.detail = "not declared in the chart";
    } else if (chart->domain.kind != v.domain.kind) {
      e.verdict = ConsistencyReport::Match::DoesNotMatch;
      e.detail = "declared with a different type";
    } else {
      e.verdict = ConsistencyReport::Match::Matched;
    }
    report.entries.push_back(std::move(e));
  }

  for (const ControlAction& a : c.control_actions) {
    ConsistencyReport::Entry e;
    e.category = "control-action";
    e.name = a.name;
    bool found = false;
    if (ca_var && ca_var->domain.kind == DomainKind::Enum)
      for (const std::string& v : ca_var->domain.values) found = found || v == a.name;
    e.verdict = found ? ConsistencyReport::Match::Matched
                      : ConsistencyReport::Match::DoesNotMatch;
    if (!found) e.detail = "not a value of the chart's controlAction variable";
    report.entries.push_back(std::move(e));
  }

  for (const ChartVariable& v : t.variables) {
    if (v.name == "controlAction") continue;
    if (c.find_variable(v.name)) continue;
    ConsistencyReport::Entry e;
    e.category = "variable";
    e.name = v.name;
    e.verdict = ConsistencyReport::Match::Unknown;
    e.detail = "chart-only variable, not in the STPA process model";
    report.entries.push_back(std::move(e));
  }
  return report;
}

// -- generation ------------------------------------------------------------

namespace {

struct ModuleCtx {
  const StateNode* state = nullptr;  // tree root for main
  std::string module_name;
  std::string instance_name;  // within the parent module
  ModuleCtx* parent = nullptr;
  std::vector<ModuleCtx*> children;
  std::vector<const Transition*> arms;  // src is a direct child of state
  bool has_states = false;
  std::vector<std::string> refs;         // first-reference order, this module only
  std::vector<std::string> subtree_refs; // including descendants
  std::vector<std::string> locals;       // variables declared here
  std::vector<std::string> params;
};

void collect_idents(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Ident:
      out.push_back(e.text);
      return;
    case Expr::Kind::Unary:
      collect_idents(*e.lhs, out);
      return;
    case Expr::Kind::Binary:
      collect_idents(*e.lhs, out);
      collect_idents(*e.rhs, out);
      return;
    default:
      return;
  }
}

void push_unique(std::vector<std::string>& list, const std::string& name) {
  for (const std::string& n : list)
    if (n == name) return;
  list.push_back(name);
}

/// Multiplies integer constants compared against scaled real variables so
/// the emitted guards match the scaled integer ranges.
ExprPtr rewrite_scaled(const ExprPtr& e, const std::map<std::string, int>& scales) {
  if (!e || e->kind != Expr::Kind::Binary)
    return e;
  ExprPtr l = rewrite_scaled(e->lhs, scales);
  ExprPtr r = rewrite_scaled(e->rhs, scales);
  bool relational = false;
  switch (e->bop) {
    case BinOp::Eq: case BinOp::Ne: case BinOp::Lt:
    case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
      relational = true;
      break;
    default:
      break;
  }
  if (relational) {
    auto scale_of = [&](const ExprPtr& side) {
      if (side->kind != Expr::Kind::Ident) return 0;
      auto it = scales.find(side->text);
      return it == scales.end() ? 0 : it->second;
    };
    int ls = scale_of(l), rs = scale_of(r);
    auto scaled_const = [&](const ExprPtr& side, int s) -> ExprPtr {
      if (s == 0 || side->kind != Expr::Kind::NumLit) return side;
      double v = side->num * std::pow(10.0, s);
      return Expr::number(v, std::to_string(static_cast<long long>(std::llround(v))));
    };
    r = scaled_const(r, ls);
    l = scaled_const(l, rs);
  }
  if (l == e->lhs && r == e->rhs) return e;
  return Expr::binary(e->bop, l, r);
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string enum_braces(const std::vector<std::string>& values) {
  std::string out = "{";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i];
  }
  return out + "}";
}

std::string smv_type(const Domain& d, const std::string& name) {
  switch (d.kind) {
    case DomainKind::Bool:
      return "boolean";
    case DomainKind::Enum:
      return enum_braces(d.values);
    case DomainKind::Int:
      return std::to_string(d.imin) + ".." + std::to_string(d.imax);
    case DomainKind::Real: {
      double lo = d.rmin * std::pow(10.0, d.scale);
      double hi = d.rmax * std::pow(10.0, d.scale);
      if (lo != std::floor(lo) || hi != std::floor(hi))
        throw UnsupportedTypeError("real variable '" + name +
                                   "' does not scale to an integer range");
      return std::to_string(static_cast<long long>(lo)) + ".." +
             std::to_string(static_cast<long long>(hi));
    }
  }
  return "";
}

std::string default_initial(const Domain& d) {
  switch (d.kind) {
    case DomainKind::Bool: return "FALSE";
    case DomainKind::Enum: return d.values.empty() ? "" : d.values.front();
    case DomainKind::Int: return std::to_string(d.imin);
    case DomainKind::Real:
      return std::to_string(static_cast<long long>(d.rmin * std::pow(10.0, d.scale)));
  }
  return "";
}

}  // namespace

SmvModel generate_smv(const StatechartTree& t, const Controller& c,
                      const std::vector<LtlFormula>& formulas) {
  ConsistencyReport consistency = check_consistency(c, t);
  if (!consistency.consistent())
    throw ConsistencyError("STPA variables do not match the chart:\n" +
                           consistency.to_text());

  // Scale factors for real variables, used to rewrite guard constants.
  std::map<std::string, int> scales;
  for (const ChartVariable& v : t.variables)
    if (v.domain.kind == DomainKind::Real && v.domain.scale != 0)
      scales[v.name] = v.domain.scale;

  // -- module tree ---------------------------------------------------------
  std::deque<ModuleCtx> storage;
  ModuleCtx* root_module = nullptr;
  {
    auto build = [&](auto&& self, const StateNode& state, ModuleCtx* parent) -> ModuleCtx* {
      ModuleCtx& m = storage.emplace_back();
      m.state = &state;
      m.parent = parent;
      if (!parent) {
        m.module_name = "main";
      } else {
        m.module_name = "Sub_" + state.name;
        m.instance_name = lowercase(state.name);
        // An internal-state process-model variable whose values are exactly
        // this superstate's children names the instance.
        for (const ProcessModelVariable& v : c.process_model) {
          if (v.kind != VarKind::InternalState) continue;
          std::vector<std::string> child_names;
          for (const StateNode& ch : state.children) child_names.push_back(ch.name);
          if (v.domain.values == child_names) m.instance_name = v.name;
        }
      }
      bool any_leaf_child = state.children.empty();
      std::vector<const StateNode*> super_children;
      for (const StateNode& ch : state.children) {
        if (ch.leaf()) any_leaf_child = true;
        else super_children.push_back(&ch);
      }
      m.has_states = any_leaf_child || state.children.size() > 1;
      for (const StateNode* ch : super_children) m.children.push_back(self(self, *ch, &m));
      return &m;
    };
    root_module = build(build, t.root, nullptr);
  }

  std::vector<ModuleCtx*> modules;  // post-order: submodules before main
  {
    auto walk = [&](auto&& self, ModuleCtx* m) -> void {
      for (ModuleCtx* ch : m->children) self(self, ch);
      modules.push_back(m);
    };
    walk(walk, root_module);
  }

  // -- arms: transitions whose source is a direct child of the module ------
  auto is_direct_child = [&](const ModuleCtx& m, const std::string& ssid) {
    for (const StateNode& ch : m.state->children)
      if (ch.id == ssid) return &ch;
    return static_cast<const StateNode*>(nullptr);
  };
  auto map_destination = [&](const ModuleCtx& m, const std::string& ssid) -> const StateNode* {
    const StateNode* s = t.find(ssid);
    while (s) {
      if (const StateNode* ch = is_direct_child(m, s->id)) return ch;
      if (s->parent_id.empty() || s->parent_id == t.root.id) break;
      s = t.find(s->parent_id);
    }
    return nullptr;
  };
  for (const Transition* row : t.truth_table()) {
    for (ModuleCtx* m : modules) {
      if (is_direct_child(*m, row->src)) {
        if (!map_destination(*m, row->dst))
          throw ConsistencyError("transition '" + row->id +
                                 "' crosses the state hierarchy");
        m->arms.push_back(row);
        break;
      }
    }
  }

  // -- variable references and placement -----------------------------------
  for (ModuleCtx* m : modules) {
    std::vector<std::string> idents;
    for (const Transition* arm : m->arms) {
      if (arm->guard) collect_idents(*arm->guard, idents);
      for (const Action& a : arm->actions) {
        idents.push_back(a.target);
        collect_idents(*a.value, idents);
      }
    }
    for (const StateNode& ch : m->state->children)
      for (const std::vector<Action>* phase : {&ch.entry, &ch.during, &ch.exit})
        for (const Action& a : *phase) {
          idents.push_back(a.target);
          collect_idents(*a.value, idents);
        }
    for (const std::string& name : idents)
      if (t.find_variable(name)) push_unique(m->refs, name);
  }
  for (ModuleCtx* m : modules) {  // post-order: children are ready first
    for (const std::string& n : m->refs) push_unique(m->subtree_refs, n);
    // keep child-subtree order after the module's own references
    std::vector<std::string> merged = m->refs;
    for (ModuleCtx* ch : m->children)
      for (const std::string& n : ch->subtree_refs) push_unique(merged, n);
    m->subtree_refs = merged;
  }

  std::map<std::string, ModuleCtx*> decl_module;
  for (const ChartVariable& v : t.variables) {
    if (v.scope == ChartVariable::Scope::Input) {
      decl_module[v.name] = root_module;
      continue;
    }
    // lowest common ancestor of all modules referencing the variable
    ModuleCtx* lca = nullptr;
    for (ModuleCtx* m : modules) {
      bool here = false;
      for (const std::string& n : m->refs) here = here || n == v.name;
      if (!here) continue;
      if (!lca) {
        lca = m;
        continue;
      }
      auto depth = [](ModuleCtx* x) {
        int d = 0;
        for (; x->parent; x = x->parent) ++d;
        return d;
      };
      ModuleCtx* a = lca;
      ModuleCtx* b = m;
      while (depth(a) > depth(b)) a = a->parent;
      while (depth(b) > depth(a)) b = b->parent;
      while (a != b) {
        a = a->parent;
        b = b->parent;
      }
      lca = a;
    }
    decl_module[v.name] = lca ? lca : root_module;
  }
  for (const ChartVariable& v : t.variables)
    decl_module[v.name]->locals.push_back(v.name);

  // Parameters: variables declared in a strict ancestor but used in the
  // module's subtree, in first-reference order.
  for (ModuleCtx* m : modules) {
    if (!m->parent) continue;
    for (const std::string& n : m->subtree_refs) {
      ModuleCtx* decl = decl_module.at(n);
      bool strict_ancestor = false;
      for (ModuleCtx* p = m->parent; p; p = p->parent)
        strict_ancestor = strict_ancestor || p == decl;
      if (strict_ancestor) m->params.push_back(n);
    }
  }

  // Instance path of each module as seen from main.
  std::map<const ModuleCtx*, std::string> path;
  for (ModuleCtx* m : modules) {
    if (!m->parent) {
      path[m] = "";
      continue;
    }
    std::string p;
    for (const ModuleCtx* x = m; x->parent; x = x->parent)
      p = x->instance_name + (p.empty() ? "" : "." + p);
    path[m] = p;
  }
  auto qualified = [&](const ModuleCtx* m, const std::string& name) {
    const std::string& p = path.at(m);
    return p.empty() ? name : p + "." + name;
  };

  // -- emit ----------------------------------------------------------------
  SmvModel model;
  for (ModuleCtx* m : modules) {
    SmvModule mod;
    mod.name = m->module_name;
    mod.params = m->params;

    std::vector<std::string> child_names;
    for (const StateNode& ch : m->state->children) child_names.push_back(ch.name);

    for (const std::string& name : m->locals) {
      const ChartVariable* v = t.find_variable(name);
      mod.vars.push_back({name, smv_type(v->domain, name)});
    }
    if (m->has_states && !child_names.empty())
      mod.vars.push_back({"states", enum_braces(child_names)});
    for (ModuleCtx* ch : m->children)
      mod.instances.push_back({ch->instance_name, ch->module_name, ch->params});

    // init: states first (the default child), then declared variables.
    if (m->has_states && !child_names.empty()) {
      const StateNode* def = nullptr;
      for (const StateNode& ch : m->state->children)
        if (ch.is_default) def = def ? def : &ch;
      if (!def && m->state->children.size() == 1) def = &m->state->children.front();
      if (!def)
        throw NoDefaultChildError("superstate '" + m->state->name +
                                  "' has no default child for init(states)");
      mod.inits.emplace_back("states", def->name);
    }
    for (const std::string& name : m->locals) {
      const ChartVariable* v = t.find_variable(name);
      std::string init = v->initial.empty() ? default_initial(v->domain) : v->initial;
      if (v->domain.kind == DomainKind::Real && !v->initial.empty()) {
        double scaled = std::stod(v->initial) * std::pow(10.0, v->domain.scale);
        init = std::to_string(static_cast<long long>(std::llround(scaled)));
      }
      mod.inits.emplace_back(name, init);
    }

    // next(states): one arm per truth-table transition in order.
    if (m->has_states && !child_names.empty()) {
      SmvCaseBlock block;
      block.target = "states";
      for (const Transition* arm : m->arms) {
        const StateNode* src = is_direct_child(*m, arm->src);
        const StateNode* dst = map_destination(*m, arm->dst);
        std::string cond = "states=" + src->name;
        if (arm->guard)
          cond += " & (" +
                  render_expr(*rewrite_scaled(arm->guard, scales), RenderStyle::Smv) +
                  ")";
        block.arms.push_back({cond, dst->name});
      }
      block.arms.push_back({"TRUE", enum_braces(child_names)});
      mod.cases.push_back(std::move(block));
    }

    // next(v) for every variable declared here, from the entry/during/exit
    // assignments of states in this module's subtree.
    for (const std::string& name : m->locals) {
      const ChartVariable* v = t.find_variable(name);
      if (v->scope == ChartVariable::Scope::Input) continue;  // free inputs
      SmvCaseBlock block;
      block.target = name;
      auto emit_state = [&](auto&& self, const ModuleCtx& owner, const StateNode& s,
                            const std::string& states_ref) -> void {
        auto arm_for = [&](const std::vector<Action>& actions, const std::string& cond) {
          for (const Action& a : actions) {
            if (a.target != name) continue;
            // a constant assigned to a scaled real must itself be scaled
            ExprPtr value = a.value;
            auto it = scales.find(name);
            if (it != scales.end() && value->kind == Expr::Kind::NumLit) {
              double scaled = value->num * std::pow(10.0, it->second);
              long long as_int = std::llround(scaled);
              value = Expr::number(static_cast<double>(as_int), std::to_string(as_int));
            }
            block.arms.push_back(
                {cond, render_expr(*rewrite_scaled(value, scales), RenderStyle::Smv)});
          }
        };
        arm_for(s.entry, "next (" + states_ref + ")=" + s.name);
        arm_for(s.during, states_ref + "=" + s.name);
        arm_for(s.exit, states_ref + "=" + s.name + " & next (" + states_ref +
                            ")!=" + s.name);
        (void)self;
        (void)owner;
      };
      auto walk_states = [&](auto&& self, const ModuleCtx& owner) -> void {
        // states reference relative to the declaring module
        std::string rel;
        {
          std::string abs_owner = path.at(&owner);
          std::string abs_decl = path.at(m);
          if (abs_owner == abs_decl)
            rel.clear();
          else
            rel = abs_owner.substr(abs_decl.empty() ? 0 : abs_decl.size() + 1);
        }
        std::string states_ref = rel.empty() ? "states" : rel + ".states";
        for (const StateNode& ch : owner.state->children)
          if (ch.leaf()) emit_state(emit_state, owner, ch, states_ref);
        for (ModuleCtx* sub : owner.children) self(self, *sub);
      };
      walk_states(walk_states, *m);
      block.arms.push_back({"TRUE", name});
      mod.cases.push_back(std::move(block));
    }

    model.modules.push_back(std::move(mod));
  }

  // -- LTLSPEC rewriting ----------------------------------------------------
  std::set<std::string> state_vars;
  for (const ProcessModelVariable& v : c.process_model)
    if (v.kind == VarKind::InternalState) state_vars.insert(v.name);
  auto state_module = [&](const std::string& state_name) -> const ModuleCtx* {
    for (ModuleCtx* m : modules)
      for (const StateNode& ch : m->state->children)
        if (ch.name == state_name) return m;
    return nullptr;
  };
  const ModuleCtx* ca_module = root_module;
  if (const ChartVariable* ca = t.find_variable("controlAction")) {
    auto it = decl_module.find(ca->name);
    if (it != decl_module.end()) ca_module = it->second;
  }

  auto rewrite_atom = [&](const ExprPtr& atom) -> ExprPtr {
    if (atom->kind == Expr::Kind::Binary &&
        (atom->bop == BinOp::Eq || atom->bop == BinOp::Ne) &&
        atom->lhs->kind == Expr::Kind::Ident) {
      const std::string& var = atom->lhs->text;
      if (state_vars.count(var) && atom->rhs->kind == Expr::Kind::Ident) {
        if (const ModuleCtx* owner = state_module(atom->rhs->text))
          return Expr::binary(atom->bop, Expr::ident(qualified(owner, "states")),
                              atom->rhs);
      }
      if (var == "controlAction")
        return Expr::binary(atom->bop, Expr::ident(qualified(ca_module, "controlAction")),
                            atom->rhs);
      if (const ChartVariable* cv = t.find_variable(var)) {
        const ModuleCtx* decl = decl_module.at(cv->name);
        ExprPtr lhs = Expr::ident(qualified(decl, var));
        return rewrite_scaled(Expr::binary(atom->bop, lhs, atom->rhs), scales);
      }
    }
    if (atom->kind == Expr::Kind::Ident) {
      if (const ChartVariable* cv = t.find_variable(atom->text))
        return Expr::ident(qualified(decl_module.at(cv->name), atom->text));
    }
    return rewrite_scaled(atom, scales);
  };
  auto render_smv_ltl = [&](auto&& self, const LtlNode& n) -> std::string {
    switch (n.op) {
      case LtlOp::Atom:
        return "(" + render_expr(*rewrite_atom(n.atom), RenderStyle::Smv) + ")";
      case LtlOp::Not: {
        std::string s = self(self, *n.lhs);
        return "!" + (s.empty() || s[0] != '(' ? "(" + s + ")" : s);
      }
      case LtlOp::And:
      case LtlOp::Or: {
        std::string l = self(self, *n.lhs), r = self(self, *n.rhs);
        return "(" + l + (n.op == LtlOp::And ? " & " : " | ") + r + ")";
      }
      case LtlOp::Implies:
        return "(" + self(self, *n.lhs) + " -> " + self(self, *n.rhs) + ")";
      case LtlOp::U:
        return "(" + self(self, *n.lhs) + " U " + self(self, *n.rhs) + ")";
      case LtlOp::G:
      case LtlOp::X: {
        std::string s = self(self, *n.lhs);
        if (s.empty() || s[0] != '(') s = "(" + s + ")";
        return (n.op == LtlOp::G ? "G " : "X ") + s;
      }
    }
    return "";
  };
  for (const LtlFormula& f : formulas)
    model.ltlspecs.push_back(render_smv_ltl(render_smv_ltl, *f.ast));

  return model;
}

std::string render_smv(const SmvModel& m) {
  std::ostringstream out;
  bool first = true;
  for (const SmvModule& mod : m.modules) {
    if (!first) out << '\n';
    first = false;
    out << "MODULE " << mod.name;
    if (!mod.params.empty()) {
      out << " (";
      for (std::size_t i = 0; i < mod.params.size(); ++i) {
        if (i) out << ',';
        out << mod.params[i];
      }
      out << ')';
    }
    out << '\n';
    if (!mod.vars.empty() || !mod.instances.empty()) {
      out << "VAR\n";
      for (const SmvVarDecl& v : mod.vars)
        out << "  " << v.name << ": " << v.type << ";\n";
      for (const SmvInstance& inst : mod.instances) {
        out << "  " << inst.name << ": " << inst.module << '(';
        for (std::size_t i = 0; i < inst.args.size(); ++i) {
          if (i) out << ',';
          out << inst.args[i];
        }
        out << ");\n";
      }
    }
    if (!mod.inits.empty() || !mod.cases.empty()) {
      out << "ASSIGN\n";
      for (const auto& [target, value] : mod.inits)
        out << "  init (" << target << "):=" << value << ";\n";
      for (const SmvCaseBlock& block : mod.cases) {
        out << "  next (" << block.target << "):= case\n";
        for (const SmvArm& arm : block.arms)
          out << "    " << arm.condition << ": " << arm.result << ";\n";
        out << "  esac;\n";
      }
    }
    if (mod.name == "main")
      for (const std::string& spec : m.ltlspecs) out << "LTLSPEC " << spec << '\n';
  }
  return out.str();
}

// -- internal bounded checker ----------------------------------------------

namespace {

/// Action values may be bare enum literals; resolve them to symbols.
Value eval_rhs(const Expr& e, const Env& env, const std::string& where) {
  if (e.kind == Expr::Kind::Ident && !env.count(e.text)) return Value::symbol(e.text);
  return eval_expr(e, env, where);
}

void run_actions(const std::vector<Action>& actions, Env& env, const std::string& where) {
  for (const Action& a : actions) env[a.target] = eval_rhs(*a.value, env, where);
}

bool eval_state_formula(const LtlNode& n, const Env& env) {
  switch (n.op) {
    case LtlOp::Atom:
      return eval_bool(*n.atom, env, "formula atom");
    case LtlOp::Not:
      return !eval_state_formula(*n.lhs, env);
    case LtlOp::And:
      return eval_state_formula(*n.lhs, env) && eval_state_formula(*n.rhs, env);
    case LtlOp::Or:
      return eval_state_formula(*n.lhs, env) || eval_state_formula(*n.rhs, env);
    case LtlOp::Implies:
      return !eval_state_formula(*n.lhs, env) || eval_state_formula(*n.rhs, env);
    default:
      throw Error("nested temporal operator in a state formula");
  }
}

struct Shape {
  enum class Kind { Invariant, NextStep, Until } kind = Kind::Invariant;
  const LtlNode* p = nullptr;  // antecedent / until lhs
  const LtlNode* q = nullptr;  // consequent / until rhs
};

/// Recognizes the three checkable template shapes:
///   G (P -> !Q)                 — invariant (rule 3.1)
///   G (P -> X Q)                — next-step obligation (rule 4.1)
///   G ((P -> Q) & !(P U Q))     — until prohibition (rules 3.2/3.3)
Shape recognize(const LtlFormula& f) {
  const LtlNode& root = *f.ast;
  if (root.op != LtlOp::G) throw Error("formula is not a G template");
  const LtlNode& body = *root.lhs;
  if (body.op == LtlOp::Implies) {
    if (body.rhs->op == LtlOp::Not) return {Shape::Kind::Invariant, body.lhs.get(),
                                            body.rhs->lhs.get()};
    if (body.rhs->op == LtlOp::X)
      return {Shape::Kind::NextStep, body.lhs.get(), body.rhs->lhs.get()};
  }
  if (body.op == LtlOp::And && body.lhs->op == LtlOp::Implies &&
      body.rhs->op == LtlOp::Not && body.rhs->lhs->op == LtlOp::U)
    return {Shape::Kind::Until, body.rhs->lhs->lhs.get(), body.rhs->lhs->rhs.get()};
  throw Error("formula does not match a checkable rule template");
}

}  // namespace

Verdict bounded_check(const Efsm& e, const Controller& c, const LtlFormula& f,
                      int bound) {
  if (e.states.empty()) throw EmptyModelError("the EFSM has no states");

  // Enumerate every variable's domain.
  std::vector<std::vector<Value>> options;
  std::vector<std::size_t> input_vars;
  for (std::size_t i = 0; i < e.variables.size(); ++i) {
    const ChartVariable& v = e.variables[i];
    if (!v.domain.finite())
      throw InfiniteDomainError("variable '" + v.name + "' has an infinite domain");
    std::vector<Value> vals;
    for (const std::string& lit : v.domain.enumerate(v.name))
      vals.push_back(value_from_literal(lit, v.domain, v.name));
    if (vals.empty())
      throw InfiniteDomainError("variable '" + v.name + "' has an empty domain");
    options.push_back(std::move(vals));
    if (v.scope == ChartVariable::Scope::Input) input_vars.push_back(i);
  }

  std::vector<std::string> state_var_names;
  for (const ProcessModelVariable& v : c.process_model)
    if (v.kind == VarKind::InternalState) state_var_names.push_back(v.name);

  struct Config {
    std::string state;  // ssid
    std::vector<Value> vals;
  };
  auto key_of = [&](const Config& cfg) {
    std::string k = cfg.state;
    for (const Value& v : cfg.vals) k += "|" + v.literal();
    return k;
  };
  auto env_of = [&](const Config& cfg, bool with_state_vars) {
    Env env;
    for (std::size_t i = 0; i < e.variables.size(); ++i)
      env[e.variables[i].name] = cfg.vals[i];
    if (with_state_vars) {
      const StateNode* s = e.find(cfg.state);
      for (const std::string& n : state_var_names)
        env[n] = Value::symbol(s ? s->name : cfg.state);
    }
    return env;
  };
  auto as_configuration = [&](const Config& cfg) {
    Configuration out;
    const StateNode* s = e.find(cfg.state);
    out.state = s ? s->name : cfg.state;
    for (std::size_t i = 0; i < e.variables.size(); ++i)
      out.values.emplace_back(e.variables[i].name, cfg.vals[i].literal());
    return out;
  };

  // Initial configuration: declared initials (or domain defaults), then the
  // initial state's entry actions.
  Config init;
  init.state = e.initial;
  for (std::size_t i = 0; i < e.variables.size(); ++i) {
    const ChartVariable& v = e.variables[i];
    std::string lit = v.initial;
    if (lit.empty()) lit = v.domain.enumerate(v.name).front();
    init.vals.push_back(value_from_literal(lit, v.domain, v.name));
  }
  {
    Env env = env_of(init, false);
    if (const StateNode* s = e.find(init.state))
      run_actions(s->entry, env, "initial entry");
    for (std::size_t i = 0; i < e.variables.size(); ++i)
      init.vals[i] = env.at(e.variables[i].name);
  }

  // One post-step successor per input valuation: resample inputs, fire the
  // first enabled transition in truth-table order (else run during), and
  // evaluate atoms on the resulting configuration.
  auto successors = [&](const Config& cfg) {
    std::vector<Config> out;
    std::vector<std::size_t> idx(input_vars.size(), 0);
    for (;;) {
      Config next = cfg;
      for (std::size_t i = 0; i < input_vars.size(); ++i)
        next.vals[input_vars[i]] = options[input_vars[i]][idx[i]];
      Env env = env_of(next, false);
      const Transition* fired = nullptr;
      for (const Transition& tr : e.truth_table) {
        if (tr.src != next.state) continue;
        if (!tr.guard || eval_bool(*tr.guard, env, "guard of " + tr.id)) {
          fired = &tr;
          break;
        }
      }
      if (fired) {
        if (const StateNode* src = e.find(next.state))
          run_actions(src->exit, env, "exit");
        run_actions(fired->actions, env, "transition action");
        next.state = fired->dst;
        if (const StateNode* dst = e.find(next.state))
          run_actions(dst->entry, env, "entry");
      } else if (const StateNode* here = e.find(next.state)) {
        run_actions(here->during, env, "during");
      }
      for (std::size_t i = 0; i < e.variables.size(); ++i)
        next.vals[i] = env.at(e.variables[i].name);
      out.push_back(std::move(next));

      // advance the input counter
      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < options[input_vars[i]].size()) break;
        idx[i] = 0;
      }
      if (idx.empty() || i == idx.size()) break;
    }
    return out;
  };

  // Breadth-first exploration up to `bound` steps.
  std::vector<Config> configs{init};
  std::vector<int> depth{0};
  std::vector<int> parent{-1};
  std::vector<std::vector<int>> edges;  // successor ids per config
  std::map<std::string, int> index{{key_of(init), 0}};
  bool complete = true;
  constexpr std::size_t kNodeCap = 200000;
  for (std::size_t head = 0; head < configs.size(); ++head) {
    edges.emplace_back();
    if (depth[head] >= bound) {
      complete = false;  // frontier not expanded
      continue;
    }
    for (Config& next : successors(configs[head])) {
      std::string key = key_of(next);
      auto [it, inserted] = index.emplace(key, static_cast<int>(configs.size()));
      if (inserted) {
        if (configs.size() >= kNodeCap) {
          complete = false;
          index.erase(it);
          continue;
        }
        configs.push_back(std::move(next));
        depth.push_back(depth[head] + 1);
        parent.push_back(static_cast<int>(head));
      }
      edges[head].push_back(it->second);
    }
  }

  Shape shape = recognize(f);
  auto holds = [&](const LtlNode& n, int id) {
    return eval_state_formula(n, env_of(configs[static_cast<std::size_t>(id)], true));
  };
  auto trace_to = [&](int id) {
    std::vector<Configuration> tr;
    for (int cur = id; cur >= 0; cur = parent[static_cast<std::size_t>(cur)])
      tr.push_back(as_configuration(configs[static_cast<std::size_t>(cur)]));
    std::reverse(tr.begin(), tr.end());
    return tr;
  };

  Verdict v;
  v.formula_id = f.id;
  int n = static_cast<int>(configs.size());

  switch (shape.kind) {
    case Shape::Kind::Invariant: {
      for (int i = 0; i < n; ++i) {
        if (holds(*shape.p, i) && holds(*shape.q, i)) {
          v.result = Verdict::Result::Violated;
          v.trace = trace_to(i);
          v.detail = "context and control action hold together";
          return v;
        }
      }
      break;
    }
    case Shape::Kind::NextStep: {
      for (int i = 0; i < n; ++i) {
        if (!holds(*shape.p, i)) continue;
        if (depth[static_cast<std::size_t>(i)] >= bound) continue;  // unexpanded
        for (int succ : edges[static_cast<std::size_t>(i)]) {
          if (!holds(*shape.q, succ)) {
            v.result = Verdict::Result::Violated;
            v.trace = trace_to(i);
            v.trace.push_back(as_configuration(configs[static_cast<std::size_t>(succ)]));
            v.detail = "a successor misses the required control action";
            return v;
          }
        }
      }
      break;
    }
    case Shape::Kind::Until: {
      if (!complete) {
        v.result = Verdict::Result::Inconclusive;
        v.detail = "bound reached before the configuration graph was exhausted";
        return v;
      }
      // E[P U Q] by fixpoint; a reachable member (or P & !Q holding, which
      // is subsumed when Q eventually occurs) violates !(P U Q).
      std::vector<char> pset(static_cast<std::size_t>(n)), qset(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        pset[static_cast<std::size_t>(i)] = holds(*shape.p, i);
        qset[static_cast<std::size_t>(i)] = holds(*shape.q, i);
      }
      std::vector<char> eu = qset;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
          if (eu[static_cast<std::size_t>(i)] || !pset[static_cast<std::size_t>(i)]) continue;
          for (int succ : edges[static_cast<std::size_t>(i)])
            if (eu[static_cast<std::size_t>(succ)]) {
              eu[static_cast<std::size_t>(i)] = 1;
              changed = true;
              break;
            }
        }
      }
      for (int i = 0; i < n; ++i) {
        bool bad = eu[static_cast<std::size_t>(i)] ||
                   (pset[static_cast<std::size_t>(i)] && !qset[static_cast<std::size_t>(i)]);
        if (!bad) continue;
        v.result = Verdict::Result::Violated;
        v.trace = trace_to(i);
        // extend with an until-witness when one exists
        int cur = i;
        std::set<int> seen;
        while (eu[static_cast<std::size_t>(cur)] && !qset[static_cast<std::size_t>(cur)] &&
               seen.insert(cur).second) {
          for (int succ : edges[static_cast<std::size_t>(cur)])
            if (eu[static_cast<std::size_t>(succ)]) {
              cur = succ;
              v.trace.push_back(as_configuration(configs[static_cast<std::size_t>(cur)]));
              break;
            }
        }
        v.detail = "an until-prohibited path exists";
        return v;
      }
      break;
    }
  }

  if (!complete && shape.kind != Shape::Kind::Until) {
    v.result = Verdict::Result::Inconclusive;
    v.detail = "bound reached before the configuration graph was exhausted";
    return v;
  }
  v.result = Verdict::Result::Satisfied;
  return v;
}

// -- external checker ------------------------------------------------------

std::vector<Verdict> run_external_checker(const std::string& smv_text,
                                          const std::string& checker_path,
                                          int timeout_seconds) {
  if (checker_path.empty() || access(checker_path.c_str(), X_OK) != 0)
    throw CheckerNotFoundError("no executable model checker at '" + checker_path + "'");

  std::string dir = std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp";
  std::string path = dir + "/stpatc_model_XXXXXX";
  std::vector<char> tmpl(path.begin(), path.end());
  tmpl.push_back('\0');
  int fd = mkstemp(tmpl.data());
  if (fd < 0) throw Error("could not create a temporary .smv file");
  std::string file(tmpl.data());
  {
    FILE* out = fdopen(fd, "w");
    fwrite(smv_text.data(), 1, smv_text.size(), out);
    fclose(out);
  }

  std::string cmd = "timeout " + std::to_string(timeout_seconds) + " '" + checker_path +
                    "' '" + file + "' 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(file.c_str());
    throw CheckerNotFoundError("failed to launch '" + checker_path + "'");
  }
  std::string output;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
  int status = pclose(pipe);
  std::remove(file.c_str());

  bool timed_out = status == 124 * 256;
  std::vector<Verdict> verdicts;
  Verdict* current = nullptr;
  Configuration* state = nullptr;
  std::istringstream lines(output);
  std::string line;
  int spec_no = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("-- specification ", 0) == 0) {
      Verdict v;
      v.formula_id = "LTLSPEC-" + std::to_string(++spec_no);
      v.detail = line;
      if (line.size() >= 8 && line.substr(line.size() - 8) == " is true")
        v.result = Verdict::Result::Satisfied;
      else if (line.size() >= 9 && line.substr(line.size() - 9) == " is false")
        v.result = Verdict::Result::Violated;
      else
        v.result = Verdict::Result::Inconclusive;
      verdicts.push_back(std::move(v));
      current = &verdicts.back();
      state = nullptr;
      continue;
    }
    std::string t = line;
    std::size_t a = t.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    t = t.substr(a);
    if (t.rfind("-> State:", 0) == 0 && current) {
      current->trace.emplace_back();
      state = &current->trace.back();
      continue;
    }
    if (state) {
      std::size_t eq = t.find(" = ");
      if (eq != std::string::npos) {
        std::string name = t.substr(0, eq);
        std::string value = t.substr(eq + 3);
        state->values.emplace_back(name, value);
        if (name == "states" || name.find(".states") != std::string::npos)
          state->state = value;
      }
    }
  }

  if (timed_out)
    for (Verdict& v : verdicts) v.result = Verdict::Result::Inconclusive;
  if (verdicts.empty()) {
    if (timed_out) {
      Verdict v;
      v.result = Verdict::Result::Inconclusive;
      v.detail = "checker timed out";
      return {v};
    }
    throw CheckerOutputParseError("no specification verdicts in checker output", output);
  }
  return verdicts;
}

}  // namespace stpatc
