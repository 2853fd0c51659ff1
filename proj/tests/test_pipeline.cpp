#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "stpatc/pipeline.hpp"

using namespace stpatc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_temp(const fs::path& dir, const std::string& name,
                       const std::string& content) {
  fs::path p = dir / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

PipelineConfig train_door_config(const fs::path& out) {
  PipelineConfig cfg;
  cfg.project_path = std::string(FIXTURES_DIR) + "/train_door/project.xml";
  cfg.chart_path = std::string(FIXTURES_DIR) + "/train_door/chart.xml";
  cfg.out_dir = out.string();
  return cfg;
}

PipelineConfig acc_config(const fs::path& out) {
  PipelineConfig cfg;
  cfg.project_path = std::string(FIXTURES_DIR) + "/acc/project.xml";
  cfg.chart_path = std::string(FIXTURES_DIR) + "/acc/chart.xml";
  cfg.out_dir = out.string();
  // the ACC reals have no finite domains, so skip the bounded checker
  cfg.stages = {"requirements", "smv", "flatten", "trace", "testgen"};
  cfg.gen.seed = 1;
  cfg.gen.inputs = {{"power", "TRUE"}, {"desiredSpeed", "45"},
                    {"initialSpeed", "10"}, {"frontDistance", "150"}};
  return cfg;
}

}  // namespace

TEST_CASE("pipeline: full train-door run writes every artifact") {
  fs::path out = fresh_dir("stpatc_pipe_td");
  PipelineResult r = run_pipeline(train_door_config(out));
  CHECK(r.exit_code == 0);

  for (const char* name : {"requirements.xml", "consistency.txt", "model.smv",
                           "verdicts.txt", "efsm.dot", "traceability.csv",
                           "testcases.csv"})
    CHECK(fs::exists(out / name));

  std::string reqs = slurp((out / "requirements.xml").string());
  CHECK(reqs.find("<ruca id=\"RUCA1.1\"") != std::string::npos);
  CHECK(reqs.find("<rssr id=\"RSSR1.1\"") != std::string::npos);
  CHECK(reqs.find("<formula id=\"LTL1.1\"") != std::string::npos);

  CHECK(slurp((out / "model.smv").string()) ==
        slurp(std::string(FIXTURES_DIR) + "/golden/train_door.smv"));

  std::string verdicts = slurp((out / "verdicts.txt").string());
  CHECK(verdicts.find("LTL1.1: satisfied") != std::string::npos);
  CHECK(verdicts.find("LTL1.2: satisfied") != std::string::npos);
  CHECK(verdicts.find("LTL1.3: satisfied") != std::string::npos);

  CHECK(r.log.find("3 safety requirements") != std::string::npos);
}

TEST_CASE("pipeline: stage selection writes only the selected artifacts") {
  fs::path out = fresh_dir("stpatc_pipe_stages");
  PipelineConfig cfg = train_door_config(out);
  cfg.stages = {"requirements", "flatten"};
  PipelineResult r = run_pipeline(cfg);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "requirements.xml"));
  CHECK(fs::exists(out / "efsm.dot"));
  CHECK_FALSE(fs::exists(out / "model.smv"));
  CHECK_FALSE(fs::exists(out / "verdicts.txt"));
  CHECK_FALSE(fs::exists(out / "testcases.csv"));
}

TEST_CASE("pipeline: ACC run reaches full coverage") {
  fs::path out = fresh_dir("stpatc_pipe_acc");
  PipelineResult r = run_pipeline(acc_config(out));
  CHECK(r.exit_code == 0);

  std::string csv = slurp((out / "testcases.csv").string());
  CHECK(csv.find("# ssr_coverage=32/32=100.0%") != std::string::npos);
  CHECK(csv.find("# state_coverage=7/7=100.0%") != std::string::npos);

  std::string matrix = slurp((out / "traceability.csv").string());
  // every one of the 32 requirements appears in the matrix
  for (int i = 1; i <= 10; ++i)
    CHECK(matrix.find("RSSR1." + std::to_string(i) + ",") != std::string::npos);
  for (int i = 1; i <= 6; ++i)
    CHECK(matrix.find("RSSR2." + std::to_string(i) + ",") != std::string::npos);
  for (int i = 1; i <= 16; ++i)
    CHECK(matrix.find("RSSR3." + std::to_string(i) + ",") != std::string::npos);
}

TEST_CASE("pipeline: reruns are byte-identical apart from the elapsed line") {
  fs::path out1 = fresh_dir("stpatc_pipe_rerun1");
  fs::path out2 = fresh_dir("stpatc_pipe_rerun2");
  REQUIRE(run_pipeline(acc_config(out1)).exit_code == 0);
  REQUIRE(run_pipeline(acc_config(out2)).exit_code == 0);

  auto strip_elapsed = [](std::string text) {
    std::size_t at = text.find("# elapsed_seconds=");
    if (at != std::string::npos)
      text.erase(at, text.find('\n', at) + 1 - at);
    return text;
  };
  CHECK(strip_elapsed(slurp((out1 / "testcases.csv").string())) ==
        strip_elapsed(slurp((out2 / "testcases.csv").string())));
  CHECK(slurp((out1 / "traceability.csv").string()) ==
        slurp((out2 / "traceability.csv").string()));
  CHECK(slurp((out1 / "model.smv").string()) ==
        slurp((out2 / "model.smv").string()));
}

TEST_CASE("pipeline: unknown stage or missing file is a config error") {
  fs::path out = fresh_dir("stpatc_pipe_cfg");
  PipelineConfig cfg = train_door_config(out);
  cfg.stages = {"requirements", "fuzzing"};
  CHECK(run_pipeline(cfg).exit_code == 1);

  cfg = train_door_config(out);
  cfg.project_path = "/no/such/project.xml";
  CHECK(run_pipeline(cfg).exit_code == 1);
}

TEST_CASE("pipeline: validation failures exit with 2") {
  fs::path tmp = fresh_dir("stpatc_pipe_bad");
  std::string project = slurp(std::string(FIXTURES_DIR) + "/train_door/project.xml");
  // a combination value outside the declared domain
  std::size_t at = project.find("value=\"Close\"");
  REQUIRE(at != std::string::npos);
  project.replace(at, std::string("value=\"Close\"").size(), "value=\"Ajar\"");

  PipelineConfig cfg = train_door_config(tmp);
  cfg.project_path = write_temp(tmp, "project.xml", project);
  PipelineResult r = run_pipeline(cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.log.find("Ajar") != std::string::npos);
}

TEST_CASE("pipeline: inconsistent model/analysis pair exits with 2") {
  fs::path tmp = fresh_dir("stpatc_pipe_inc");
  std::string project = slurp(std::string(FIXTURES_DIR) + "/train_door/project.xml");
  // rename a control action so it no longer matches the chart enum
  std::size_t at = project.find("name=\"Stop\" text=\"Command an emergency");
  REQUIRE(at != std::string::npos);
  project.replace(at, std::string("name=\"Stop\"").size(), "name=\"Halt\"");

  PipelineConfig cfg = train_door_config(tmp);
  cfg.project_path = write_temp(tmp, "project.xml", project);
  PipelineResult r = run_pipeline(cfg);
  CHECK(r.exit_code == 2);
  CHECK(fs::exists(tmp / "consistency.txt"));
  CHECK_FALSE(fs::exists(tmp / "model.smv"));
}

TEST_CASE("pipeline: a violated requirement exits with 3 and logs a trace") {
  fs::path tmp = fresh_dir("stpatc_pipe_violation");
  std::string chart = slurp(std::string(FIXTURES_DIR) + "/train_door/chart.xml");
  std::size_t t2 = chart.find("<transition id=\"T2\"");
  REQUIRE(t2 != std::string::npos);
  chart.erase(t2, chart.find('\n', t2) + 1 - t2);

  PipelineConfig cfg = train_door_config(tmp);
  cfg.chart_path = write_temp(tmp, "chart.xml", chart);
  PipelineResult r = run_pipeline(cfg);
  CHECK(r.exit_code == 3);

  std::string verdicts = slurp((tmp / "verdicts.txt").string());
  CHECK(verdicts.find("LTL1.1: violated") != std::string::npos);
  CHECK(verdicts.find("Close") != std::string::npos);
  CHECK(verdicts.find("PersonIndoorway=TRUE") != std::string::npos);
}

TEST_CASE("pipeline: malformed chart input exits with 2") {
  fs::path tmp = fresh_dir("stpatc_pipe_malformed");
  PipelineConfig cfg = train_door_config(tmp);
  cfg.chart_path = write_temp(tmp, "chart.xml", "<chart name=\"X\"><state/></chart>");
  CHECK(run_pipeline(cfg).exit_code == 2);
}

TEST_CASE("pipeline: stage list and order") {
  CHECK(pipeline_stages() ==
        std::vector<std::string>{"requirements", "smv", "verify", "flatten", "trace",
                                 "testgen"});
}

TEST_CASE("pipeline: external checker path falls back to CheckerNotFound") {
  fs::path out = fresh_dir("stpatc_pipe_checker");
  PipelineConfig cfg = train_door_config(out);
  cfg.checker_path = "/no/such/nusmv";
  PipelineResult r = run_pipeline(cfg);
  // a missing checker is an internal error, reported as such
  CHECK(r.exit_code == 4);
}
