#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stpatc/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"STPA-driven safety requirement and test-case generator"};

  stpatc::PipelineConfig cfg;
  std::string algorithm = "combined";
  std::string stop = "ssr";
  std::vector<std::string> inputs;

  app.add_option("--project", cfg.project_path, "STPA project XML file")->required();
  app.add_option("--chart", cfg.chart_path, "Statechart XML file")->required();
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--controller", cfg.controller_id,
                 "Controller id (default: first in the project)");
  app.add_option("--stages", cfg.stages,
                 "Stages to emit artifacts for: requirements smv verify flatten "
                 "trace testgen (default: all)");
  app.add_option("--seed", cfg.gen.seed, "RNG seed for test generation");
  app.add_option("--algorithm", algorithm, "Path search: dfs | bfs | combined");
  app.add_option("--steps", cfg.gen.test_steps, "Number of generation steps")
      ->check(CLI::PositiveNumber);
  app.add_option("--stop", stop, "Stop criterion: state | transition | ssr");
  app.add_option("--input", inputs,
                 "Fixed input value as name=literal (repeatable); unset inputs "
                 "are sampled from their domains");
  app.add_option("--threshold", cfg.threshold, "Similarity threshold in [5,100]");
  app.add_option("--strength", cfg.strength, "Covering-array strength");
  app.add_option("--checker", cfg.checker_path,
                 "External SMV model checker binary (default: the internal "
                 "bounded checker; env STPATC_CHECKER also honoured)");
  app.add_option("--bound", cfg.bound, "Step bound for the internal checker");

  CLI11_PARSE(app, argc, argv);

  if (algorithm == "dfs") cfg.gen.algorithm = stpatc::Algorithm::Dfs;
  else if (algorithm == "bfs") cfg.gen.algorithm = stpatc::Algorithm::Bfs;
  else if (algorithm == "combined") cfg.gen.algorithm = stpatc::Algorithm::Combined;
  else {
    std::fprintf(stderr, "unknown algorithm '%s'\n", algorithm.c_str());
    return 1;
  }
  if (stop == "state") cfg.gen.stop = stpatc::StopCriterion::StateCoverage;
  else if (stop == "transition") cfg.gen.stop = stpatc::StopCriterion::TransitionCoverage;
  else if (stop == "ssr") cfg.gen.stop = stpatc::StopCriterion::SsrCoverage;
  else {
    std::fprintf(stderr, "unknown stop criterion '%s'\n", stop.c_str());
    return 1;
  }
  for (const std::string& spec : inputs) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "--input expects name=literal, got '%s'\n", spec.c_str());
      return 1;
    }
    cfg.gen.inputs.emplace_back(spec.substr(0, eq), spec.substr(eq + 1));
  }

  stpatc::PipelineResult result = stpatc::run_pipeline(cfg);
  std::fputs(result.log.c_str(), result.exit_code == 0 ? stdout : stderr);
  return result.exit_code;
}
