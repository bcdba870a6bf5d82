#include <doctest.h>

#include <string>

#include "config.hpp"

using namespace wavemle;

namespace {
const char* kMinimal =
    R"({"theta1":1.0,"theta2":0.0,"T":2.0,"M":4000,"N_list":[50],"R":10,"seed":42})";

std::vector<std::string> violations_of(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const config_error& e) {
    return e.violations();
  }
  return {};
}

bool any_mentions(const std::vector<std::string>& violations, const std::string& needle) {
  for (const std::string& v : violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}
}  // namespace

TEST_CASE("minimal document is accepted with sane defaults") {
  const RunConfig cfg = parse_run_config(kMinimal);
  CHECK(cfg.params.theta1 == 1.0);
  CHECK(cfg.params.theta2 == 0.0);
  CHECK(cfg.horizon == 2.0);
  CHECK(cfg.num_steps == 4000);
  CHECK(cfg.n_list == std::vector<int>{50});
  CHECK(cfg.replications == 10);
  CHECK(cfg.seed == 42);
  CHECK(cfg.n_modes == 50);  // max(N_list)
  CHECK(cfg.scheme == Scheme::kExactTransition);
  CHECK(cfg.route_j12 == J12Route::kIdentity);
  CHECK(cfg.route_b2 == B2Route::kItoIdentity);
  CHECK(cfg.normalization == Normalization::kTrueParams);
  CHECK_FALSE(cfg.zero_noise);
  CHECK(cfg.threads == 0);
  CHECK(cfg.t_grid == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(cfg.k_list.size() == 20);
}

TEST_CASE("negative theta1 is rejected with a key-specific message") {
  const auto violations = violations_of(
      R"({"theta1":-1.0,"theta2":0.0,"T":2.0,"M":100,"N_list":[5],"R":2,"seed":1})");
  REQUIRE(!violations.empty());
  CHECK(any_mentions(violations, "theta1"));
  CHECK(any_mentions(violations, "> 0"));
}

TEST_CASE("oscillation condition is checked at parse time") {
  const auto violations = violations_of(
      R"({"theta1":0.01,"theta2":4.0,"T":1.0,"M":100,"N_list":[10],"R":2,"seed":1})");
  REQUIRE(!violations.empty());
  CHECK(any_mentions(violations, "oscillation"));
  CHECK(any_mentions(violations, "k = 1"));
}

TEST_CASE("unknown keys are rejected") {
  const auto violations = violations_of(
      R"({"theta1":1.0,"theta2":0.0,"T":2.0,"M":100,"N_list":[5],"R":2,"seed":1,"bogus":3})");
  REQUIRE(!violations.empty());
  CHECK(any_mentions(violations, "bogus"));
  CHECK(any_mentions(violations, "unknown"));
}

TEST_CASE("all violations are reported, not just the first") {
  const auto violations = violations_of(
      R"({"theta1":-2.0,"theta2":0.0,"T":-1.0,"M":0,"N_list":[],"R":0,"seed":1,"junk":true})");
  CHECK(violations.size() >= 5);
  CHECK(any_mentions(violations, "theta1"));
  CHECK(any_mentions(violations, "T"));
  CHECK(any_mentions(violations, "M"));
  CHECK(any_mentions(violations, "N_list"));
  CHECK(any_mentions(violations, "R"));
  CHECK(any_mentions(violations, "junk"));
}

TEST_CASE("missing required keys are each named") {
  const auto violations = violations_of(R"({"theta1":1.0})");
  CHECK(any_mentions(violations, "theta2"));
  CHECK(any_mentions(violations, "T"));
  CHECK(any_mentions(violations, "M"));
  CHECK(any_mentions(violations, "N_list"));
  CHECK(any_mentions(violations, "R"));
  CHECK(any_mentions(violations, "seed"));
}

TEST_CASE("syntax errors carry line and column") {
  const auto violations = violations_of("{\n  \"theta1\": 1.0,\n  oops\n}");
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("line 3") != std::string::npos);
}

TEST_CASE("N_list must ascend without duplicates") {
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[8,4],"R":2,"seed":1})"),
      "ascending"));
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4,4],"R":2,"seed":1})"),
      "duplicates"));
}

TEST_CASE("x_grid entries must live in [0, pi]") {
  const auto violations = violations_of(
      R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1,"x_grid":[0.5,4.0]})");
  CHECK(any_mentions(violations, "x_grid"));
}

TEST_CASE("enum-valued keys validate their values") {
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1,"scheme":"magic"})"),
      "scheme"));
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1,"route_j12":"x"})"),
      "route_j12"));
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1,"route_b2":"x"})"),
      "route_b2"));
  CHECK(any_mentions(
      violations_of(
          R"({"theta1":1.0,"theta2":0.0,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1,"normalization":"x"})"),
      "normalization"));
}

TEST_CASE("options parse into the config") {
  const RunConfig cfg = parse_run_config(
      R"({"theta1":2.0,"theta2":-0.5,"T":1.0,"M":100,"N_list":[4,8],"R":3,"seed":11,
          "N":6,"scheme":"euler","threads":2,"route_j12":"riemann","route_b2":"riemann",
          "normalization":"plugin","debug_zero_noise":true,"rep":9,
          "x_grid":[0.1,3.0],"t_grid":[0.25,1.0],"gamma_list":[0.25,0.75],
          "k_list":[1,2,7],"out":"results"})");
  CHECK(cfg.n_modes == 6);
  CHECK(cfg.scheme == Scheme::kEulerMaruyama);
  CHECK(cfg.threads == 2);
  CHECK(cfg.route_j12 == J12Route::kRiemann);
  CHECK(cfg.route_b2 == B2Route::kRiemann);
  CHECK(cfg.normalization == Normalization::kPlugIn);
  CHECK(cfg.zero_noise);
  CHECK(cfg.replication == 9);
  CHECK(cfg.x_grid == std::vector<double>{0.1, 3.0});
  CHECK(cfg.t_grid == std::vector<double>{0.25, 1.0});
  CHECK(cfg.k_list == std::vector<int>{1, 2, 7});
  CHECK(cfg.out_dir == "results");

  const StudyConfig study = cfg.study();
  CHECK(study.params.theta1 == 2.0);
  CHECK(study.n_list == std::vector<int>{4, 8});
  CHECK(study.zero_noise);
}

TEST_CASE("k_list participates in the oscillation gate") {
  // theta1 = 1, theta2 = 2.2: k = 1 violates 1 > 1.21
  const auto violations = violations_of(
      R"({"theta1":1.0,"theta2":2.2,"T":1.0,"M":10,"N_list":[4],"R":2,"seed":1})");
  CHECK(any_mentions(violations, "oscillation"));
}
