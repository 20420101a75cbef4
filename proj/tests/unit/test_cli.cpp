#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <regflux/error.hpp>

#include "regflux/scenario.hpp"

using namespace regflux;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal_solve() {
  return json::parse(R"({
    "kind": "solve",
    "flux": {"name": "burgers"},
    "data": {"type": "riemann", "left": 1.0, "right": 0.0},
    "grid": {"x_min": -1.0, "x_max": 1.0, "cells": 100},
    "epsilon": 0.1,
    "T": 0.5,
    "time_samples": 4
  })");
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("regflux_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(cli::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cli::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("minimal solve writes its artifacts deterministically") {
  cli::RunOptions o;
  o.out = scratch("solve_a");
  const auto a = cli::run_command(cli::Command::Solve, minimal_solve(), o);
  CHECK(a.exit_code == 0);
  for (const char* f : {"u.csv", "diagnostics.csv", "report.json", "manifest.json"}) CHECK(fs::exists(o.out / f));
  const auto first = slurp(o.out / "manifest.json");
  o.out = scratch("solve_b");
  cli::run_command(cli::Command::Solve, minimal_solve(), o);
  CHECK(slurp(o.out / "manifest.json") == first);
  CHECK(slurp(o.out / "u.csv").rfind("t,x,u\n", 0) == 0);
}

TEST_CASE("unknown keys are named") {
  auto cfg = minimal_solve();
  cfg["epsilonn"] = 0.1;
  cli::RunOptions o;
  o.out = scratch("bad");
  try {
    cli::run_command(cli::Command::Solve, cfg, o);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("epsilonn") != std::string::npos);
  }
  auto nested = minimal_solve();
  nested["grid"]["cels"] = 3;
  CHECK_THROWS_AS(cli::run_command(cli::Command::Solve, nested, o), ParseError);

  // typo in place of a required key
  auto renamed = minimal_solve();
  renamed.erase("epsilon");
  renamed["epsilonn"] = 0.1;
  try {
    cli::run_command(cli::Command::Solve, renamed, o);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("unknown config key 'epsilonn'") != std::string::npos);
  }
}

TEST_CASE("invalid values and mismatched kinds") {
  cli::RunOptions o;
  o.out = scratch("invalid");
  auto cfg = minimal_solve();
  cfg["T"] = -1.0;
  CHECK_THROWS_AS(cli::run_command(cli::Command::Solve, cfg, o), ConfigError);
  CHECK_THROWS_AS(cli::run_command(cli::Command::Sweep, minimal_solve(), o), ConfigError);
  cfg = minimal_solve();
  cfg["checks"] = {{"mass_drift", 0.0}};
  CHECK_THROWS_AS(cli::run_command(cli::Command::Solve, cfg, o), ConfigError);
  cfg = minimal_solve();
  cfg["data"]["type"] = "triangle";
  CHECK_THROWS_AS(cli::run_command(cli::Command::Solve, cfg, o), ParseError);
  cfg = minimal_solve();
  cfg["flux"]["name"] = "burger";
  CHECK_THROWS_AS(cli::run_command(cli::Command::Solve, cfg, o), InputError);
}

TEST_CASE("extract rejects non-convex classes") {
  auto cfg = cli::demo_config("burgers_extract");
  cfg["g"] = {{"name", "cubic"}, {"class", "C2"}, {"state_min", -1.0}, {"inflection", 0.0}};
  cli::RunOptions o;
  o.out = scratch("extract");
  CHECK_THROWS_AS(cli::run_command(cli::Command::Extract, cfg, o), UnsupportedClass);
}

TEST_CASE("failed checks give exit code 2") {
  auto cfg = minimal_solve();
  cfg["checks"] = {{"mass_drift", 1e-300}};
  cfg["data"] = {{"type", "bump"}, {"center", 0.0}, {"radius", 0.5}, {"amplitude", 0.9}};
  cli::RunOptions o;
  o.out = scratch("fail");
  const auto res = cli::run_command(cli::Command::Solve, cfg, o);
  CHECK(res.exit_code == 2);
  CHECK(res.failures == std::vector<std::string>{"mass_balance"});
  const auto report = json::parse(slurp(o.out / "report.json"));
  CHECK(report["checks"]["mass_balance"]["pass"] == false);
}

TEST_CASE("config file loading") {
  const auto dir = scratch("load");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{\"kind\": ";
  CHECK_THROWS_AS(cli::load_config(dir / "bad.json"), ParseError);
  CHECK_THROWS_AS(cli::load_config(dir / "missing.json"), InputError);
  CHECK(cli::demo_names().size() == 5);
  CHECK_THROWS_AS(cli::demo_config("nope"), InputError);
}
