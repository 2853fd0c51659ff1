#include "doctest.h"

#include <fstream>
#include <sstream>

#include "stpatc/stpa.hpp"

using namespace stpatc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

StpaProject train_door() {
  return parse_stpa_project(slurp(std::string(FIXTURES_DIR) + "/train_door/project.xml"));
}

}  // namespace

TEST_CASE("stpa: train-door project parses completely") {
  StpaProject p = train_door();
  CHECK(p.accidents.size() == 1);
  CHECK(p.hazards.size() == 2);
  REQUIRE(p.controllers.size() == 1);

  const Controller& c = p.controllers[0];
  CHECK(c.id == "C1");
  CHECK(c.name == "DoorController");
  REQUIRE(c.control_actions.size() == 3);
  CHECK(c.control_actions[1].name == "Closedoor");
  REQUIRE(c.process_model.size() == 4);
  CHECK(c.process_model[0].name == "doorstate");
  CHECK(c.process_model[0].kind == VarKind::InternalState);
  CHECK(c.process_model[0].domain.values == std::vector<std::string>{"Open", "Close"});
  CHECK(c.process_model[1].kind == VarKind::Environmental);
  CHECK(c.ucas.size() == 3);
  CHECK(c.combinations.size() == 5);

  const CombinationRow& row = c.combinations[0];
  CHECK(row.id == "1.1");
  CHECK(row.action_id == "CA2");
  CHECK(row.combination.hazardous == ContextCombination::Hazardous::Yes);
  CHECK(row.combination.timing == Timing::AnyTime);
  REQUIRE(row.combination.assignments.size() == 4);
  // assignment order is the authored order, not declaration order
  CHECK(row.combination.assignments[0] ==
        std::pair<std::string, std::string>{"Trainstatus", "Stop"});
  CHECK(row.combination.assignments[3] ==
        std::pair<std::string, std::string>{"PersonIndoorway", "TRUE"});

  CHECK(c.combinations[3].combination.hazardous == ContextCombination::Hazardous::No);
  CHECK(c.find_action("CA2")->name == "Closedoor");
  CHECK(c.find_action("Closedoor")->id == "CA2");
  CHECK(c.find_variable("Trainstatus") != nullptr);
  CHECK(p.find_hazard("H-2")->accident_ids == std::vector<std::string>{"A-1"});
}

TEST_CASE("stpa: relational combination values are carried verbatim") {
  StpaProject p =
      parse_stpa_project(slurp(std::string(FIXTURES_DIR) + "/acc/project.xml"));
  const Controller& c = p.controllers[0];
  CHECK(c.id == "ACC");
  CHECK(c.combinations.size() == 32);
  const CombinationRow& row = c.combinations[0];
  CHECK(row.combination.assignments[1] ==
        std::pair<std::string, std::string>{"currentSpeed", "<initialSpeed"});
  CHECK(row.combination.assignments[2] ==
        std::pair<std::string, std::string>{"timeGap", "<safetyTimeGap"});
  // NotProviding rows have no timing
  const CombinationRow* np = nullptr;
  for (const CombinationRow& r : c.combinations)
    if (r.id == "3.5") np = &r;
  REQUIRE(np != nullptr);
  CHECK(np->combination.context == CombinationContext::NotProviding);
  CHECK_FALSE(np->combination.timing.has_value());
}

TEST_CASE("stpa: render/parse round-trip") {
  StpaProject p = train_door();
  StpaProject again = parse_stpa_project(render_project(p));
  CHECK(render_project(again) == render_project(p));
  CHECK(again.controllers[0].combinations.size() == 5);
  CHECK(again.controllers[0].combinations[0].combination.assignments ==
        p.controllers[0].combinations[0].combination.assignments);
}

TEST_CASE("stpa: dangling references are rejected") {
  std::string base = slurp(std::string(FIXTURES_DIR) + "/train_door/project.xml");

  SUBCASE("unknown hazard in a UCA") {
    std::string bad = base;
    bad.replace(bad.find("hazards=\"H-2\" text=\"The controller closes"),
                std::string("hazards=\"H-2\"").size(), "hazards=\"H-9\"");
    CHECK_THROWS_AS(parse_stpa_project(bad), ReferenceError);
  }
  SUBCASE("unknown control action in a combination") {
    std::string bad = base;
    bad.replace(bad.find("combination id=\"1.3\" action=\"CA3\""),
                std::string("combination id=\"1.3\" action=\"CA3\"").size(),
                "combination id=\"1.3\" action=\"CA9\"");
    CHECK_THROWS_AS(parse_stpa_project(bad), ReferenceError);
  }
  SUBCASE("unknown process-model variable in an assignment") {
    std::string bad = base;
    bad.replace(bad.find("<assign var=\"doorstate\""),
                std::string("<assign var=\"doorstate\"").size(),
                "<assign var=\"windowstate\"");
    CHECK_THROWS_AS(parse_stpa_project(bad), ReferenceError);
  }
}

TEST_CASE("stpa: duplicate ids are rejected") {
  std::string base = slurp(std::string(FIXTURES_DIR) + "/train_door/project.xml");
  std::string bad = base;
  bad.replace(bad.find("id=\"UCA1.2\""), std::string("id=\"UCA1.2\"").size(),
              "id=\"UCA1.1\"");
  CHECK_THROWS_AS(parse_stpa_project(bad), DuplicateIdError);
}

TEST_CASE("stpa: schema violations name the location") {
  CHECK_THROWS_AS(parse_stpa_project("<nope/>"), SchemaError);
  CHECK_THROWS_AS(
      parse_stpa_project("<stpa><controllers><controller id=\"C\" name=\"N\">"
                         "<combinations><combination action=\"CA1\" context=\"Bogus\"/>"
                         "</combinations></controller></controllers></stpa>"),
      Error);
}

TEST_CASE("stpa: validate_project accepts the shipped fixtures") {
  CHECK(validate_project(train_door()).empty());
  StpaProject acc =
      parse_stpa_project(slurp(std::string(FIXTURES_DIR) + "/acc/project.xml"));
  CHECK(validate_project(acc).empty());
}

TEST_CASE("stpa: validate_project flags broken invariants") {
  StpaProject p = train_door();

  SUBCASE("combination value outside the variable's domain") {
    p.controllers[0].combinations[0].combination.assignments[0].second = "Sideways";
    CHECK_FALSE(validate_project(p).empty());
  }
  SUBCASE("empty enum domain") {
    p.controllers[0].process_model[0].domain.values.clear();
    CHECK_FALSE(validate_project(p).empty());
  }
  SUBCASE("duplicate variable names") {
    p.controllers[0].process_model.push_back(p.controllers[0].process_model[0]);
    CHECK_FALSE(validate_project(p).empty());
  }
}

TEST_CASE("stpa: enum helpers") {
  CHECK(to_string(VarKind::InternalState) == "internal-state");
  CHECK(var_kind_from_string("environmental", "/x") == VarKind::Environmental);
  CHECK_THROWS_AS(var_kind_from_string("imaginary", "/x"), SchemaError);
  CHECK(to_string(HazardType::NotProvided) == "NotProvided");
  CHECK_THROWS_AS(hazard_type_from_string("Sometimes", "/x"), SchemaError);
}
