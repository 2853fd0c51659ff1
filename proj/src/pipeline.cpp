#include "stpatc/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "stpatc/context_tables.hpp"
#include "stpatc/ltl.hpp"
#include "stpatc/smv.hpp"
#include "stpatc/xml.hpp"

namespace stpatc {

const std::vector<std::string>& pipeline_stages() {
  static const std::vector<std::string> stages{"requirements", "smv",   "verify",
                                               "flatten",      "trace", "testgen"};
  return stages;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << content;
}

std::string requirements_xml(const std::vector<Ruca>& rucas,
                             const std::vector<Rssr>& rssrs,
                             const std::vector<LtlFormula>& formulas) {
  xml::Node root;
  root.name = "requirements";
  xml::Node& ru = root.children.emplace_back();
  ru.name = "rucas";
  for (const Ruca& r : rucas) {
    xml::Node& n = ru.children.emplace_back();
    n.name = "ruca";
    n.attrs = {{"id", r.id}, {"action", r.action_name}};
    n.text = r.text;
  }
  xml::Node& rs = root.children.emplace_back();
  rs.name = "rssrs";
  for (const Rssr& r : rssrs) {
    xml::Node& n = rs.children.emplace_back();
    n.name = "rssr";
    n.attrs = {{"id", r.id}, {"ruca", r.source.id}, {"ltl", r.ltl_id}};
    n.text = r.text;
  }
  xml::Node& fo = root.children.emplace_back();
  fo.name = "formulas";
  for (const LtlFormula& f : formulas) {
    xml::Node& n = fo.children.emplace_back();
    n.name = "formula";
    n.attrs = {{"id", f.id}, {"rssr", f.source_rssr}};
    n.text = f.rendered;
  }
  return xml::write(root);
}

std::string verdicts_text(const std::vector<Verdict>& verdicts) {
  std::ostringstream out;
  for (const Verdict& v : verdicts) {
    out << v.formula_id << ": ";
    switch (v.result) {
      case Verdict::Result::Satisfied: out << "satisfied"; break;
      case Verdict::Result::Violated: out << "violated"; break;
      case Verdict::Result::Inconclusive: out << "inconclusive"; break;
    }
    if (!v.detail.empty()) out << " — " << v.detail;
    out << '\n';
    for (const Configuration& c : v.trace) {
      out << "  " << c.state << ":";
      for (const auto& [name, value] : c.values) out << ' ' << name << '=' << value;
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  PipelineResult result;
  std::ostringstream log;
  bool inconsistent = false;
  bool violated = false;
  try {
    std::set<std::string> selected(cfg.stages.begin(), cfg.stages.end());
    for (const std::string& s : cfg.stages) {
      bool known = false;
      for (const std::string& k : pipeline_stages()) known = known || k == s;
      if (!known) throw ConfigError("unknown stage '" + s + "'");
    }
    auto wants = [&](const std::string& stage) {
      return selected.empty() || selected.count(stage) > 0;
    };

    StpaProject project = parse_stpa_project(read_file(cfg.project_path));
    StatechartTree chart = parse_statechart(read_file(cfg.chart_path));

    std::vector<Issue> issues = validate_project(project);
    bool fatal = false;
    for (const Issue& i : issues) {
      log << (i.severity == Issue::Severity::Error ? "error: " : "warning: ")
          << i.path << ": " << i.message << '\n';
      fatal = fatal || i.severity == Issue::Severity::Error;
    }
    if (fatal) {
      result.exit_code = 2;
      result.log = log.str();
      return result;
    }

    const Controller* controller = nullptr;
    for (const Controller& c : project.controllers)
      if (cfg.controller_id.empty() || c.id == cfg.controller_id) {
        controller = &c;
        break;
      }
    if (!controller)
      throw ConfigError("controller '" + cfg.controller_id + "' not found");

    // requirements: hazardous combination rows → RUCA → RSSR → LTL
    std::vector<Ruca> rucas;
    std::vector<Rssr> rssrs;
    std::vector<LtlFormula> formulas;
    int counter = 0;
    for (const CombinationRow& row : controller->combinations) {
      if (row.combination.hazardous != ContextCombination::Hazardous::Yes) continue;
      ++counter;
      std::string suffix = row.id.empty() ? std::to_string(counter) : row.id;
      const ControlAction* action = controller->find_action(row.action_id);
      Ruca ruca = refine_uca(*action, row.combination, "RUCA" + suffix);
      Rssr rssr = refine_ssr(ruca, "RSSR" + suffix);
      LtlFormula formula = generate_ltl(rssr, "LTL" + suffix);
      rssr.ltl_id = formula.id;
      rucas.push_back(std::move(ruca));
      rssrs.push_back(std::move(rssr));
      formulas.push_back(std::move(formula));
    }
    log << "requirements: " << rssrs.size() << " safety requirements\n";
    if (wants("requirements"))
      write_file(cfg.out_dir, "requirements.xml",
                 requirements_xml(rucas, rssrs, formulas));

    // smv: consistency report + model text
    ConsistencyReport consistency = check_consistency(*controller, chart);
    if (wants("smv"))
      write_file(cfg.out_dir, "consistency.txt", consistency.to_text());
    if (!consistency.consistent()) {
      log << "consistency: does-not-match entries present\n";
      inconsistent = true;
    } else {
      log << "consistency: ok\n";
      if (wants("smv"))
        write_file(cfg.out_dir, "model.smv",
                   render_smv(generate_smv(chart, *controller, formulas)));
    }

    // flatten
    Efsm efsm = flatten(chart);
    log << "flatten: " << efsm.states.size() << " states, "
        << efsm.truth_table.size() << " transitions\n";
    if (wants("flatten")) write_file(cfg.out_dir, "efsm.dot", efsm_to_dot(efsm));

    // verify
    if (wants("verify") && !inconsistent) {
      std::vector<Verdict> verdicts;
      std::string checker = cfg.checker_path;
      if (const char* env = std::getenv("STPATC_CHECKER"); env && *env && checker.empty())
        checker = env;
      if (!checker.empty()) {
        std::string smv = render_smv(generate_smv(chart, *controller, formulas));
        verdicts = run_external_checker(smv, checker, 60);
      } else {
        for (const LtlFormula& f : formulas)
          verdicts.push_back(bounded_check(efsm, *controller, f, cfg.bound));
      }
      for (const Verdict& v : verdicts)
        violated = violated || v.result == Verdict::Result::Violated;
      log << "verify: " << verdicts.size() << " verdicts"
          << (violated ? ", violations found" : "") << '\n';
      write_file(cfg.out_dir, "verdicts.txt", verdicts_text(verdicts));
    }

    // trace
    TraceMatrix matrix = build_matrix(rssrs, efsm, cfg.threshold);
    log << "trace: " << matrix.links.size() << " links, "
        << matrix.unlinked_ssrs().size() << " unlinked requirements\n";
    if (wants("trace"))
      write_file(cfg.out_dir, "traceability.csv", matrix_to_csv(matrix));

    // testgen
    if (wants("testgen")) {
      GenResult gen = generate_test_cases(efsm, matrix, cfg.gen);
      log << "testgen: " << gen.suites.size() << " suites, ssr coverage "
          << gen.coverage.ssrs_covered << "/" << gen.coverage.ssrs_total << '\n';
      write_file(cfg.out_dir, "testcases.csv",
                 export_csv(gen.suites, gen.coverage, gen.elapsed_seconds));
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    result.exit_code = 1;
    result.log = log.str();
    return result;
  } catch (const SchemaError& e) {
    log << "schema error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const ReferenceError& e) {
    log << "reference error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const DuplicateIdError& e) {
    log << "duplicate id: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const ConsistencyError& e) {
    log << "consistency error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const ExprSyntaxError& e) {
    log << "expression error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const ExprTypeError& e) {
    log << "type error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const UnknownStateRefError& e) {
    log << "state reference error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const DecompositionError& e) {
    log << "decomposition error: " << e.what() << '\n';
    result.exit_code = 2;
    result.log = log.str();
    return result;
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    result.exit_code = 4;
    result.log = log.str();
    return result;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << '\n';
    result.exit_code = 4;
    result.log = log.str();
    return result;
  }

  result.exit_code = inconsistent ? 2 : violated ? 3 : 0;
  result.log = log.str();
  return result;
}

}  // namespace stpatc
