#include "doctest.h"

#include <fstream>
#include <sstream>

#include "stpatc/context_tables.hpp"
#include "stpatc/traceability.hpp"

using namespace stpatc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture(const std::string& rel) {
  return slurp(std::string(FIXTURES_DIR) + "/" + rel);
}

std::vector<Rssr> rssrs_of(const Controller& c) {
  std::vector<Rssr> out;
  for (const CombinationRow& row : c.combinations) {
    if (row.combination.hazardous != ContextCombination::Hazardous::Yes) continue;
    out.push_back(refine_ssr(
        refine_uca(*c.find_action(row.action_id), row.combination, "RUCA" + row.id),
        "RSSR" + row.id));
  }
  return out;
}

}  // namespace

TEST_CASE("traceability: similarity follows the token-matching equation") {
  // 3 matched tokens out of max(4, 8) = 37.5%
  CHECK(similarity("open the door now",
                   "the door controller must remain open whenever aligned") ==
        doctest::Approx(37.5));

  // tokenization lowercases and splits on non-alphanumeric runs, so
  // "timeGap<safetyTimeGap" and "timeGap > safetyTimeGap" yield equal tokens
  CHECK(similarity("timeGap<safetyTimeGap", "timeGap > safetyTimeGap") ==
        doctest::Approx(100.0));

  // multiset one-to-one matching: the second "a" in the shorter sentence can
  // only match once
  CHECK(similarity("a a b", "a c d") == doctest::Approx(100.0 / 3));

  CHECK(similarity("alpha beta", "gamma delta") == doctest::Approx(0.0));
  CHECK(similarity("", "anything") == doctest::Approx(0.0));
}

TEST_CASE("traceability: similarity is symmetric, bounded and reflexive") {
  const char* sentences[] = {
      "Closedoor must Not be Provided any time when doorstate=Close occurred.",
      "states==Close and controlAction==Closedoor and PersonIndoorway",
      "x", ""};
  for (const char* a : sentences) {
    for (const char* b : sentences) {
      double s = similarity(a, b);
      CHECK(s >= 0.0);
      CHECK(s <= 100.0);
      CHECK(s == doctest::Approx(similarity(b, a)));
    }
    if (*a) CHECK(similarity(a, a) == doctest::Approx(100.0));
  }
}

TEST_CASE("traceability: full transition string of a train-door row") {
  Efsm e = flatten(parse_statechart(fixture("train_door/chart.xml")));
  // T2: Close -> Open [PersonIndoorway]; Open's entry emits Opendoor
  const Transition* t2 = nullptr;
  for (const Transition& t : e.truth_table)
    if (t.id == "T2") t2 = &t;
  REQUIRE(t2 != nullptr);
  CHECK(full_transition_string(e, *t2) ==
        "states==Close and controlAction==Opendoor and PersonIndoorway");

  const Transition* t4 = nullptr;
  for (const Transition& t : e.truth_table)
    if (t.id == "T4") t4 = &t;
  REQUIRE(t4 != nullptr);
  CHECK(full_transition_string(e, *t4) ==
        "states==Close and controlAction==Closedoor and "
        "Trainposition == Aligned && Trainstatus == Stop");
}

TEST_CASE("traceability: train-door RSSR1.1 scores 35.29 against T4") {
  StpaProject p = parse_stpa_project(fixture("train_door/project.xml"));
  Efsm e = flatten(parse_statechart(fixture("train_door/chart.xml")));
  std::vector<Rssr> rssrs = rssrs_of(p.controllers[0]);
  REQUIRE(rssrs.size() == 3);

  const Transition* t4 = nullptr;
  for (const Transition& t : e.truth_table)
    if (t.id == "T4") t4 = &t;
  // 6 shared tokens (close, closedoor, trainposition, aligned, trainstatus,
  // stop) over max(17, 10) sentence tokens
  CHECK(similarity(rssrs[0].text, full_transition_string(e, *t4)) ==
        doctest::Approx(600.0 / 17));
}

TEST_CASE("traceability: matrix keeps links at or above the threshold") {
  StpaProject p = parse_stpa_project(fixture("train_door/project.xml"));
  Efsm e = flatten(parse_statechart(fixture("train_door/chart.xml")));
  std::vector<Rssr> rssrs = rssrs_of(p.controllers[0]);

  TraceMatrix m = build_matrix(rssrs, e, 35);
  CHECK(m.threshold == 35);
  CHECK(m.ssr_ids == std::vector<std::string>{"RSSR1.1", "RSSR1.2", "RSSR1.3"});
  CHECK(m.transition_ids == std::vector<std::string>{"T1", "T2", "T3", "T4"});
  CHECK(m.transitions_for("RSSR1.1") == std::vector<std::string>{"T4"});
  CHECK(m.ssrs_for("T4") == std::vector<std::string>{"RSSR1.1"});
  CHECK(m.unlinked_ssrs() == std::vector<std::string>{"RSSR1.2", "RSSR1.3"});

  // a link sits exactly at its score: 6/17 = 35.29%
  REQUIRE(m.links.size() == 1);
  CHECK(m.links[0].ssr_id == "RSSR1.1");
  CHECK(m.links[0].transition_id == "T4");
  CHECK(m.links[0].score == doctest::Approx(600.0 / 17));
}

TEST_CASE("traceability: raising the threshold only removes links") {
  StpaProject p = parse_stpa_project(fixture("acc/project.xml"));
  Efsm e = flatten(parse_statechart(fixture("acc/chart.xml")));
  std::vector<Rssr> rssrs = rssrs_of(p.controllers[0]);

  std::size_t previous = build_matrix(rssrs, e, 5).links.size();
  for (double th : {10.0, 20.0, 35.0, 50.0, 80.0, 100.0}) {
    std::size_t now = build_matrix(rssrs, e, th).links.size();
    CHECK(now <= previous);
    previous = now;
  }

  // lower-threshold matrices contain the higher-threshold ones
  TraceMatrix coarse = build_matrix(rssrs, e, 40);
  TraceMatrix fine = build_matrix(rssrs, e, 35);
  for (const TraceLink& l : coarse.links) {
    bool present = false;
    for (const TraceLink& f : fine.links)
      present = present || (f.ssr_id == l.ssr_id &&
                            f.transition_id == l.transition_id);
    CHECK(present);
  }
}

TEST_CASE("traceability: every ACC requirement links at the default threshold") {
  StpaProject p = parse_stpa_project(fixture("acc/project.xml"));
  Efsm e = flatten(parse_statechart(fixture("acc/chart.xml")));
  std::vector<Rssr> rssrs = rssrs_of(p.controllers[0]);
  REQUIRE(rssrs.size() == 32);

  TraceMatrix m = build_matrix(rssrs, e, 35);
  CHECK(m.unlinked_ssrs().empty());
  for (const TraceLink& l : m.links) CHECK(l.score >= 35.0);
}

TEST_CASE("traceability: threshold range is validated") {
  std::vector<Rssr> none;
  Efsm e = flatten(parse_statechart(fixture("train_door/chart.xml")));
  CHECK_THROWS_AS(build_matrix(none, e, 4.9), ThresholdRangeError);
  CHECK_THROWS_AS(build_matrix(none, e, 101), ThresholdRangeError);
  CHECK_THROWS_AS(build_matrix(none, e, -1), ThresholdRangeError);
  CHECK_NOTHROW(build_matrix(none, e, 5));
  CHECK_NOTHROW(build_matrix(none, e, 100));
}

TEST_CASE("traceability: csv rendering") {
  TraceMatrix m;
  m.threshold = 35;
  m.ssr_ids = {"RSSR1.1"};
  m.transition_ids = {"T4"};
  m.links = {{"RSSR1.1", "T4", 600.0 / 17}};
  CHECK(matrix_to_csv(m) ==
        "ssr_id,transition_id,similarity\n"
        "RSSR1.1,T4,35.29\n");

  m.links[0].score = 40.0;
  CHECK(matrix_to_csv(m) ==
        "ssr_id,transition_id,similarity\n"
        "RSSR1.1,T4,40\n");
}
