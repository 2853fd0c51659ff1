#include "stpatc/stpa.hpp"

#include <cctype>
#include <set>

#include "domain_xml.hpp"
#include "stpatc/xml.hpp"

namespace stpatc {

namespace {

std::vector<std::string> split_ids(const std::string& joined) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= joined.size()) {
    std::size_t end = joined.find(';', start);
    if (end == std::string::npos) end = joined.size();
    std::string part = joined.substr(start, end - start);
    std::size_t a = part.find_first_not_of(" \t");
    if (a != std::string::npos) {
      std::size_t b = part.find_last_not_of(" \t");
      out.push_back(part.substr(a, b - a + 1));
    }
    start = end + 1;
  }
  return out;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const std::string& id : ids) {
    if (!out.empty()) out += ';';
    out += id;
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

/// Combination values may be relational expressions carried verbatim
/// (e.g. "<safetyTimeGap"); those are not checked against the domain.
bool is_relational_value(const std::string& v) {
  return !v.empty() && (v[0] == '<' || v[0] == '>' || v[0] == '=' || v[0] == '!');
}

Timing timing_from_string(const std::string& s, const std::string& path) {
  if (s == "AnyTime") return Timing::AnyTime;
  if (s == "TooEarly") return Timing::TooEarly;
  if (s == "TooLate") return Timing::TooLate;
  throw SchemaError(path, "unknown timing '" + s + "'");
}

void check_unique(std::set<std::string>& seen, const std::string& id,
                  const std::string& what) {
  if (!seen.insert(id).second)
    throw DuplicateIdError(id, "duplicate " + what + " id '" + id + "'");
}

Controller parse_controller(const xml::Node& c, const StpaProject& project,
                            const std::string& path) {
  Controller out;
  out.id = c.need("id", path);
  out.name = c.need("name", path);

  std::set<std::string> ca_ids;
  for (const xml::Node* ca : c.all("controlAction")) {
    ControlAction a;
    a.id = ca->need("id", path + "/controlAction");
    a.name = ca->need("name", path + "/controlAction");
    a.description = ca->attr_or("text", "");
    check_unique(ca_ids, a.id, "control action");
    out.control_actions.push_back(std::move(a));
  }

  if (const xml::Node* pm = c.child("processModel")) {
    std::set<std::string> var_names;
    for (const xml::Node* v : pm->all("variable")) {
      std::string vpath = path + "/processModel/variable";
      ProcessModelVariable var;
      var.name = v->need("name", vpath);
      var.kind = var_kind_from_string(v->need("kind", vpath), vpath);
      var.domain = detail::parse_domain(*v, vpath + " '" + var.name + "'");
      check_unique(var_names, var.name, "process-model variable");
      out.process_model.push_back(std::move(var));
    }
  }

  std::set<std::string> uca_ids;
  if (const xml::Node* ucas = c.child("ucas")) {
    for (const xml::Node* u : ucas->all("uca")) {
      std::string upath = path + "/ucas/uca";
      Uca uca;
      uca.id = u->need("id", upath);
      uca.action_id = u->need("action", upath);
      uca.hazard_type = hazard_type_from_string(u->need("hazardType", upath), upath);
      uca.hazard_ids = split_ids(u->attr_or("hazards", ""));
      uca.text = u->attr_or("text", "");
      check_unique(uca_ids, uca.id, "UCA");
      if (!out.find_action(uca.action_id))
        throw ReferenceError(uca.action_id, "UCA '" + uca.id +
                                                "' references unknown control action '" +
                                                uca.action_id + "'");
      for (const std::string& h : uca.hazard_ids)
        if (!project.find_hazard(h))
          throw ReferenceError(h, "UCA '" + uca.id + "' references unknown hazard '" + h + "'");
      out.ucas.push_back(std::move(uca));
    }
  }

  std::set<std::string> row_ids;
  if (const xml::Node* combos = c.child("combinations")) {
    for (const xml::Node* combo : combos->all("combination")) {
      std::string cpath = path + "/combinations/combination";
      CombinationRow row;
      row.id = combo->attr_or("id", "");
      if (!row.id.empty()) check_unique(row_ids, row.id, "combination");
      row.action_id = combo->need("action", cpath);
      if (!out.find_action(row.action_id))
        throw ReferenceError(row.action_id,
                             "combination references unknown control action '" +
                                 row.action_id + "'");
      const std::string& context = combo->need("context", cpath);
      if (context == "Providing")
        row.combination.context = CombinationContext::Providing;
      else if (context == "NotProviding")
        row.combination.context = CombinationContext::NotProviding;
      else
        throw SchemaError(cpath, "unknown context '" + context + "'");
      if (const std::string* t = combo->attr("timing"))
        row.combination.timing = timing_from_string(*t, cpath);
      std::string hazardous = combo->attr_or("hazardous", "");
      if (hazardous == "yes")
        row.combination.hazardous = ContextCombination::Hazardous::Yes;
      else if (hazardous == "no")
        row.combination.hazardous = ContextCombination::Hazardous::No;
      else if (!hazardous.empty())
        throw SchemaError(cpath, "hazardous must be 'yes' or 'no'");
      row.combination.hazard_ids = split_ids(combo->attr_or("hazards", ""));
      for (const std::string& h : row.combination.hazard_ids)
        if (!project.find_hazard(h))
          throw ReferenceError(h, "combination references unknown hazard '" + h + "'");
      for (const xml::Node* a : combo->all("assign")) {
        std::string var = a->need("var", cpath + "/assign");
        if (!out.find_variable(var))
          throw ReferenceError(var, "combination assigns unknown variable '" + var + "'");
        row.combination.assignments.emplace_back(std::move(var),
                                                 a->need("value", cpath + "/assign"));
      }
      out.combinations.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace

std::string to_string(VarKind k) {
  switch (k) {
    case VarKind::InternalState: return "internal-state";
    case VarKind::Internal: return "internal";
    case VarKind::Interaction: return "interaction";
    case VarKind::Environmental: return "environmental";
  }
  return "";
}

VarKind var_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "internal-state") return VarKind::InternalState;
  if (s == "internal") return VarKind::Internal;
  if (s == "interaction") return VarKind::Interaction;
  if (s == "environmental") return VarKind::Environmental;
  throw SchemaError(path, "unknown variable kind '" + s + "'");
}

std::string to_string(HazardType t) {
  switch (t) {
    case HazardType::NotProvided: return "NotProvided";
    case HazardType::Provided: return "Provided";
    case HazardType::WrongTiming: return "WrongTiming";
    case HazardType::StoppedTooSoonAppliedTooLong: return "StoppedTooSoonAppliedTooLong";
  }
  return "";
}

HazardType hazard_type_from_string(const std::string& s, const std::string& path) {
  if (s == "NotProvided") return HazardType::NotProvided;
  if (s == "Provided") return HazardType::Provided;
  if (s == "WrongTiming") return HazardType::WrongTiming;
  if (s == "StoppedTooSoonAppliedTooLong") return HazardType::StoppedTooSoonAppliedTooLong;
  throw SchemaError(path, "unknown hazard type '" + s + "'");
}

std::string to_string(CombinationContext c) {
  return c == CombinationContext::Providing ? "Providing" : "NotProviding";
}

std::string to_string(Timing t) {
  switch (t) {
    case Timing::AnyTime: return "AnyTime";
    case Timing::TooEarly: return "TooEarly";
    case Timing::TooLate: return "TooLate";
  }
  return "";
}

const ControlAction* Controller::find_action(const std::string& id_or_name) const {
  for (const ControlAction& a : control_actions)
    if (a.id == id_or_name || a.name == id_or_name) return &a;
  return nullptr;
}

const ProcessModelVariable* Controller::find_variable(const std::string& name) const {
  for (const ProcessModelVariable& v : process_model)
    if (v.name == name) return &v;
  return nullptr;
}

const Hazard* StpaProject::find_hazard(const std::string& id) const {
  for (const Hazard& h : hazards)
    if (h.id == id) return &h;
  return nullptr;
}

StpaProject parse_stpa_project(std::string_view file_bytes) {
  xml::Node root = xml::parse(file_bytes);
  if (root.name != "stpa") throw SchemaError("/", "root element must be <stpa>");

  StpaProject p;
  std::set<std::string> accident_ids, hazard_ids, controller_ids;

  if (const xml::Node* accidents = root.child("accidents")) {
    for (const xml::Node* a : accidents->all("accident")) {
      Accident acc;
      acc.id = a->need("id", "stpa/accidents/accident");
      acc.name = a->need("name", "stpa/accidents/accident");
      acc.description = a->text;
      check_unique(accident_ids, acc.id, "accident");
      p.accidents.push_back(std::move(acc));
    }
  }
  if (const xml::Node* hazards = root.child("hazards")) {
    for (const xml::Node* h : hazards->all("hazard")) {
      Hazard haz;
      haz.id = h->need("id", "stpa/hazards/hazard");
      haz.name = h->need("name", "stpa/hazards/hazard");
      haz.description = h->text;
      haz.accident_ids = split_ids(h->attr_or("accidents", ""));
      check_unique(hazard_ids, haz.id, "hazard");
      for (const std::string& a : haz.accident_ids)
        if (!accident_ids.count(a))
          throw ReferenceError(a, "hazard '" + haz.id + "' references unknown accident '" +
                                      a + "'");
      p.hazards.push_back(std::move(haz));
    }
  }
  if (const xml::Node* controllers = root.child("controllers")) {
    for (const xml::Node* c : controllers->all("controller")) {
      Controller ctrl = parse_controller(*c, p, "stpa/controllers/controller");
      check_unique(controller_ids, ctrl.id, "controller");
      p.controllers.push_back(std::move(ctrl));
    }
  }
  return p;
}

std::string render_project(const StpaProject& p) {
  xml::Node root;
  root.name = "stpa";

  xml::Node& accidents = root.children.emplace_back();
  accidents.name = "accidents";
  for (const Accident& a : p.accidents) {
    xml::Node& n = accidents.children.emplace_back();
    n.name = "accident";
    n.attrs = {{"id", a.id}, {"name", a.name}};
    n.text = a.description;
  }

  xml::Node& hazards = root.children.emplace_back();
  hazards.name = "hazards";
  for (const Hazard& h : p.hazards) {
    xml::Node& n = hazards.children.emplace_back();
    n.name = "hazard";
    n.attrs = {{"id", h.id}, {"name", h.name}};
    if (!h.accident_ids.empty()) n.attrs.emplace_back("accidents", join_ids(h.accident_ids));
    n.text = h.description;
  }

  xml::Node& controllers = root.children.emplace_back();
  controllers.name = "controllers";
  for (const Controller& c : p.controllers) {
    xml::Node& cn = controllers.children.emplace_back();
    cn.name = "controller";
    cn.attrs = {{"id", c.id}, {"name", c.name}};
    for (const ControlAction& a : c.control_actions) {
      xml::Node& an = cn.children.emplace_back();
      an.name = "controlAction";
      an.attrs = {{"id", a.id}, {"name", a.name}};
      if (!a.description.empty()) an.attrs.emplace_back("text", a.description);
    }
    xml::Node& pm = cn.children.emplace_back();
    pm.name = "processModel";
    for (const ProcessModelVariable& v : c.process_model) {
      xml::Node& vn = pm.children.emplace_back();
      vn.name = "variable";
      vn.attrs = {{"name", v.name}, {"kind", to_string(v.kind)}};
      detail::write_domain(v.domain, vn);
    }
    if (!c.ucas.empty()) {
      xml::Node& ucas = cn.children.emplace_back();
      ucas.name = "ucas";
      for (const Uca& u : c.ucas) {
        xml::Node& un = ucas.children.emplace_back();
        un.name = "uca";
        un.attrs = {{"id", u.id},
                    {"action", u.action_id},
                    {"hazardType", to_string(u.hazard_type)}};
        if (!u.hazard_ids.empty()) un.attrs.emplace_back("hazards", join_ids(u.hazard_ids));
        if (!u.text.empty()) un.attrs.emplace_back("text", u.text);
      }
    }
    if (!c.combinations.empty()) {
      xml::Node& combos = cn.children.emplace_back();
      combos.name = "combinations";
      for (const CombinationRow& row : c.combinations) {
        xml::Node& rn = combos.children.emplace_back();
        rn.name = "combination";
        if (!row.id.empty()) rn.attrs.emplace_back("id", row.id);
        rn.attrs.emplace_back("action", row.action_id);
        rn.attrs.emplace_back("context", to_string(row.combination.context));
        if (row.combination.timing)
          rn.attrs.emplace_back("timing", to_string(*row.combination.timing));
        if (row.combination.hazardous != ContextCombination::Hazardous::Unset)
          rn.attrs.emplace_back(
              "hazardous",
              row.combination.hazardous == ContextCombination::Hazardous::Yes ? "yes" : "no");
        if (!row.combination.hazard_ids.empty())
          rn.attrs.emplace_back("hazards", join_ids(row.combination.hazard_ids));
        for (const auto& [var, value] : row.combination.assignments) {
          xml::Node& an = rn.children.emplace_back();
          an.name = "assign";
          an.attrs = {{"var", var}, {"value", value}};
        }
      }
    }
  }
  return xml::write(root);
}

std::vector<Issue> validate_project(const StpaProject& p) {
  std::vector<Issue> issues;
  auto error = [&](std::string path, std::string msg) {
    issues.push_back({Issue::Severity::Error, std::move(path), std::move(msg)});
  };
  auto warning = [&](std::string path, std::string msg) {
    issues.push_back({Issue::Severity::Warning, std::move(path), std::move(msg)});
  };

  for (const Controller& c : p.controllers) {
    std::string base = "controller '" + c.id + "'";
    if (c.control_actions.empty()) error(base, "controller has no control actions");
    std::set<std::string> names;
    for (const ControlAction& a : c.control_actions) {
      if (!is_identifier(a.name))
        error(base + "/controlAction '" + a.id + "'",
              "name '" + a.name + "' is not a valid identifier");
      if (!names.insert(a.name).second)
        error(base, "duplicate control action name '" + a.name + "'");
    }
    std::set<std::string> var_names;
    for (const ProcessModelVariable& v : c.process_model) {
      std::string vpath = base + "/variable '" + v.name + "'";
      if (!var_names.insert(v.name).second)
        error(base, "duplicate process-model variable '" + v.name + "'");
      switch (v.domain.kind) {
        case DomainKind::Enum: {
          if (v.domain.values.empty()) error(vpath, "enum domain has no values");
          std::set<std::string> seen;
          for (const std::string& val : v.domain.values)
            if (!seen.insert(val).second)
              error(vpath, "duplicate enum value '" + val + "'");
          break;
        }
        case DomainKind::Int:
          if (v.domain.imin > v.domain.imax) error(vpath, "min exceeds max");
          break;
        case DomainKind::Real:
          if (v.domain.rmin > v.domain.rmax) error(vpath, "min exceeds max");
          break;
        case DomainKind::Bool:
          break;
      }
    }
    for (std::size_t i = 0; i < c.combinations.size(); ++i) {
      const CombinationRow& row = c.combinations[i];
      std::string cpath = base + "/combination[" +
                          (row.id.empty() ? std::to_string(i) : row.id) + "]";
      const ContextCombination& combo = row.combination;
      if (combo.context == CombinationContext::NotProviding && combo.timing)
        error(cpath, "timing is only meaningful for Providing combinations");
      if (combo.context == CombinationContext::Providing &&
          combo.hazardous == ContextCombination::Hazardous::Yes && !combo.timing)
        error(cpath, "hazardous Providing combination needs a timing");
      if (combo.hazardous == ContextCombination::Hazardous::Yes && combo.hazard_ids.empty())
        warning(cpath, "hazardous combination links no hazards");
      std::set<std::string> vars;
      for (const auto& [var, value] : combo.assignments) {
        if (!vars.insert(var).second) {
          error(cpath, "variable '" + var + "' assigned twice");
          continue;
        }
        const ProcessModelVariable* decl = c.find_variable(var);
        if (!decl) {
          error(cpath, "unknown variable '" + var + "'");
          continue;
        }
        if (is_relational_value(value)) continue;
        try {
          value_from_literal(value, decl->domain, cpath);
        } catch (const SchemaError& e) {
          error(cpath, e.what());
        }
      }
    }
  }
  return issues;
}

}  // namespace stpatc
