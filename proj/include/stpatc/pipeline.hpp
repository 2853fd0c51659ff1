#pragma once

// Batch orchestration of the whole toolchain with stage selection.

#include <string>
#include <vector>

#include "stpatc/testgen.hpp"

namespace stpatc {

struct PipelineConfig {
  std::string project_path;
  std::string chart_path;
  std::string out_dir = ".";
  std::string controller_id;        // empty = first controller
  std::vector<std::string> stages;  // empty = all stages
  GenConfig gen;
  int strength = 2;
  double threshold = 35;
  std::string checker_path;  // empty = internal bounded checker
  int bound = 12;
};

struct PipelineResult {
  int exit_code = 0;  // 0 ok, 1 usage/config, 2 validation/consistency,
                      // 3 verification violation, 4 internal error
  std::string log;
};

/// Known stage names in pipeline order:
/// requirements, smv, verify, flatten, trace, testgen.
const std::vector<std::string>& pipeline_stages();

/// Runs the pipeline and writes one artifact file per selected stage into
/// the output directory: requirements.xml, consistency.txt + model.smv,
/// verdicts.txt, efsm.dot, traceability.csv, testcases.csv. Stages that are
/// inputs of a selected stage still run in memory; only selected stages
/// write files.
PipelineResult run_pipeline(const PipelineConfig& cfg);

}  // namespace stpatc
