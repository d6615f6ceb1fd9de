// Config loading and validation: JSON round trips, the "auto" radius, unknown
// keys, range errors, and deterministic echoes.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "warpedlab/config.hpp"
#include "warpedlab/report.hpp"

using namespace warpedlab;

namespace {

std::string write_temp_config(const std::string& body, const std::string& name) {
  const std::string path = std::string("/tmp/warpedlab_test_") + name + ".json";
  std::ofstream out(path, std::ios::trunc);
  out << body;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("defaults validate") {
  RunConfig config;
  CHECK_NOTHROW(validate_config(config));
  CHECK(config.action == "circle-rotation");
  CHECK(config.r_auto);
  CHECK(config.seed == 20240915);
}

TEST_CASE("config file overrides defaults and round trips") {
  const std::string path = write_temp_config(
      R"({"action": "odometer", "depth": 6, "levels": [8, 16, 32],
          "epsilon": 0.25, "r": 1.5, "seed": 7, "out": "/tmp/wl_out",
          "operator": "local"})",
      "roundtrip");
  RunConfig config = load_config_file(path, RunConfig{});
  CHECK(config.action == "odometer");
  CHECK(config.depth == 6);
  CHECK(config.levels == std::vector<double>{8.0, 16.0, 32.0});
  CHECK(config.epsilon == 0.25);
  CHECK_FALSE(config.r_auto);
  CHECK(config.r == 1.5);
  CHECK(config.seed == 7);
  CHECK(config.operator_id == "local");
  CHECK_NOTHROW(validate_config(config));

  // The echo parses back to the same values.
  auto echo = nlohmann::json::parse(config_echo(config));
  CHECK(echo["action"] == "odometer");
  CHECK(echo["r"] == 1.5);
  CHECK(echo["levels"][2] == 32.0);
}

TEST_CASE("radius accepts the string auto") {
  const std::string path = write_temp_config(R"({"r": "auto"})", "rauto");
  RunConfig config = load_config_file(path, RunConfig{});
  CHECK(config.r_auto);
  auto echo = nlohmann::json::parse(config_echo(config));
  CHECK(echo["r"] == "auto");
}

TEST_CASE("unknown keys are rejected") {
  const std::string path = write_temp_config(R"({"acton": "odometer"})", "unknown");
  CHECK_THROWS_AS(load_config_file(path, RunConfig{}), std::invalid_argument);
}

TEST_CASE("type errors are rejected") {
  const std::string path = write_temp_config(R"({"depth": "six"})", "badtype");
  CHECK_THROWS_AS(load_config_file(path, RunConfig{}), std::invalid_argument);
  const std::string list = write_temp_config(R"({"levels": 7})", "badlist");
  CHECK_THROWS_AS(load_config_file(list, RunConfig{}), std::invalid_argument);
}

TEST_CASE("missing or malformed files are rejected") {
  CHECK_THROWS_AS(load_config_file("/tmp/warpedlab_does_not_exist.json", RunConfig{}),
                  std::invalid_argument);
  const std::string path = write_temp_config("{not json", "malformed");
  CHECK_THROWS_AS(load_config_file(path, RunConfig{}), std::invalid_argument);
}

TEST_CASE("validation catches out-of-range values") {
  RunConfig config;
  config.action = "warp-drive";
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.levels = {10.0, 5.0};
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.epsilon = 0.0;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.r_auto = false;
  config.r = -1.0;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.net_kind = "random";
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.torus_dim = 9;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = RunConfig{};
  config.depth_min = 6;
  config.depth_max = 3;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
}

TEST_CASE("echo is deterministic") {
  RunConfig config;
  config.levels = {5.0, 10.0};
  CHECK(config_echo(config) == config_echo(config));
}

TEST_CASE("number formatting preserves doubles") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  const double v = 0.12345678901234567;
  CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("csv reports carry version, config, and fixed-width rows") {
  CsvReport csv("{\"a\":1}", "9.9.9");
  csv.comment("hello");
  csv.header({"x", "y"});
  csv.row({1.0, 2.0});
  csv.labeled_row("metric", {3.0});
  const std::string text = csv.text();
  CHECK(text.find("# version 9.9.9") != std::string::npos);
  CHECK(text.find("# config {\"a\":1}") != std::string::npos);
  CHECK(text.find("x,y") != std::string::npos);
  CHECK(text.find("metric,3") != std::string::npos);
  CHECK_THROWS_AS(csv.row({1.0}), std::invalid_argument);
}

TEST_CASE("atomic writes create parents and land complete") {
  const std::string dir = "/tmp/warpedlab_report_dir/nested";
  const std::string path = dir + "/file.txt";
  std::remove(path.c_str());
  write_text_atomic(path, "payload\n");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == "payload\n");
}
