#include <gtest/gtest.h>

#include <json.hpp>

#include "formsim/scenario.hpp"

using namespace formsim;
using nlohmann::json;

namespace {

json minimal_scenario() {
  return json::parse(R"({
    "name": "two_agents",
    "dt": 0.01,
    "duration": 1.0,
    "limits": {"v_max": 1.0, "u_max": 0.5, "omega_max": 2.0},
    "gains": {"g_d": -15.0},
    "agents": [
      {"id": "A1", "start": {"x": 0.0, "y": 0.0, "phi": 0.0, "v": 0.0},
       "profile": {"kind": "constant_velocity"}},
      {"id": "A2", "start": {"x": 1.5, "y": 0.0, "phi": 0.0, "v": 0.0},
       "profile": {"kind": "constant_velocity"}}
    ],
    "observer_edges": [{"observer": "A1", "target": "A2"}]
  })");
}

}  // namespace

TEST(ParseScenario, MinimalConfigRoundTrips) {
  const ScenarioConfig cfg = parse_scenario(minimal_scenario());
  EXPECT_EQ(cfg.name, "two_agents");
  EXPECT_DOUBLE_EQ(cfg.dt, 0.01);
  EXPECT_DOUBLE_EQ(cfg.duration, 1.0);
  EXPECT_DOUBLE_EQ(cfg.transient_time(), 0.2);  // default 20% of duration
  EXPECT_DOUBLE_EQ(cfg.a_eff_value(), 0.5);     // default u_max
  EXPECT_EQ(cfg.graph.agents.size(), 2u);
  EXPECT_TRUE(validate_scenario(cfg).ok());
}

TEST(ParseScenario, MissingKeyNamesPath) {
  json j = minimal_scenario();
  j["agents"][1]["start"].erase("x");
  try {
    parse_scenario(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("agents[1].start.x"), std::string::npos);
  }
  j = minimal_scenario();
  j.erase("limits");
  EXPECT_THROW(parse_scenario(j), ConfigError);
  j = minimal_scenario();
  j["gains"].erase("g_d");
  EXPECT_THROW(parse_scenario(j), ConfigError);
}

TEST(ParseScenario, TypeErrorsNameKey) {
  json j = minimal_scenario();
  j["dt"] = "fast";
  try {
    parse_scenario(j);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dt"), std::string::npos);
  }
}

TEST(ParseScenario, UnknownProfileKindRejected) {
  json j = minimal_scenario();
  j["agents"][0]["profile"]["kind"] = "warp";
  EXPECT_THROW(parse_scenario(j), ConfigError);
}

TEST(ParseScenario, PiecewisePointsMustAscend) {
  json j = minimal_scenario();
  j["agents"][0]["profile"] = {{"kind", "piecewise"},
                               {"points", json::array({{{"t", 1.0}, {"u", 0.1}},
                                                       {{"t", 0.5}, {"u", 0.0}}})}};
  EXPECT_THROW(parse_scenario(j), ConfigError);
}

TEST(ValidateScenario, PositiveGainRejectedWithMessage) {
  json j = minimal_scenario();
  j["gains"]["g_d"] = 5.0;
  const ScenarioConfig cfg = parse_scenario(j);
  const auto rep = validate_scenario(cfg);
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.join().find("g_d must be negative"), std::string::npos);
}

TEST(ValidateScenario, ZeroDurationRejected) {
  json j = minimal_scenario();
  j["duration"] = 0.0;
  EXPECT_FALSE(validate_scenario(parse_scenario(j)).ok());
}

TEST(ValidateScenario, NonIntegralStepCountRejected) {
  json j = minimal_scenario();
  j["duration"] = 1.005;
  const auto rep = validate_scenario(parse_scenario(j));
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.join().find("integral"), std::string::npos);
}

TEST(ValidateScenario, BadLimitsAndStartsRejected) {
  json j = minimal_scenario();
  j["limits"]["v_max"] = -1.0;
  EXPECT_FALSE(validate_scenario(parse_scenario(j)).ok());
  j = minimal_scenario();
  j["agents"][0]["start"]["v"] = 3.0;  // above v_max
  EXPECT_FALSE(validate_scenario(parse_scenario(j)).ok());
}

TEST(ValidateScenario, InfeasibleSetpointReportsMinimum) {
  json j = minimal_scenario();
  j["x_edges"] = json::array({{{"follower", "A2"},
                               {"predecessor", "A1"},
                               {"d_s", 0.3},
                               {"T", 0.2},
                               {"d_star_x", 0.35},
                               {"E_u", 1.4}}});
  j["y_edges"] = json::array({{{"follower", "A2"},
                               {"predecessor", "A1"},
                               {"d_s", 0.3},
                               {"d_star_y", 0.45},
                               {"E_omega", 1.4}}});
  j["agents"][1].erase("profile");
  const auto rep = validate_scenario(parse_scenario(j));
  ASSERT_FALSE(rep.ok());
  EXPECT_NE(rep.join().find("0.393333"), std::string::npos);
}

TEST(LoadScenarioFile, MissingFileAndBadJson) {
  EXPECT_THROW(load_scenario_file("/nonexistent/path.json"), ConfigError);
}
