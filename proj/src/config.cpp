#include "warpedlab/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace warpedlab {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<std::string> kKnownKeys = {
    "action",     "space",      "torus_dim", "depth",      "levels",
    "epsilon",    "r",          "seed",      "out",        "net_kind",
    "snap_mode",  "operator",   "modes",     "cutoff",     "rmax",
    "grid",       "window_eps", "window_top", "eps_target", "mode_cap",
    "sections",   "columns",    "depth_min", "depth_max"};

[[noreturn]] void bad(const std::string& message) {
  throw std::invalid_argument("config: " + message);
}

}  // namespace

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    bad("invalid JSON in '" + path + "': " + e.what());
  }
  if (!j.is_object()) bad("config file must hold a JSON object");

  RunConfig config = base;
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.count(key)) bad("unknown key '" + key + "'");
    try {
      if (key == "action") config.action = value.get<std::string>();
      else if (key == "space") config.space = value.get<std::string>();
      else if (key == "torus_dim") config.torus_dim = value.get<int>();
      else if (key == "depth") config.depth = value.get<int>();
      else if (key == "levels") config.levels = value.get<std::vector<double>>();
      else if (key == "epsilon") config.epsilon = value.get<double>();
      else if (key == "r") {
        if (value.is_string()) {
          if (value.get<std::string>() != "auto") bad("r must be a number or \"auto\"");
          config.r_auto = true;
          config.r = 0.0;
        } else {
          config.r_auto = false;
          config.r = value.get<double>();
        }
      } else if (key == "seed") config.seed = value.get<std::uint64_t>();
      else if (key == "out") config.out = value.get<std::string>();
      else if (key == "net_kind") config.net_kind = value.get<std::string>();
      else if (key == "snap_mode") config.snap_mode = value.get<std::string>();
      else if (key == "operator") config.operator_id = value.get<std::string>();
      else if (key == "modes") config.modes = value.get<int>();
      else if (key == "cutoff") config.cutoff = value.get<double>();
      else if (key == "rmax") config.rmax = value.get<double>();
      else if (key == "grid") config.grid = value.get<int>();
      else if (key == "window_eps") config.window_eps = value.get<double>();
      else if (key == "window_top") config.window_top = value.get<double>();
      else if (key == "eps_target") config.eps_target = value.get<double>();
      else if (key == "mode_cap") config.mode_cap = value.get<int>();
      else if (key == "sections") config.sections = value.get<int>();
      else if (key == "columns") config.columns = value.get<int>();
      else if (key == "depth_min") config.depth_min = value.get<int>();
      else if (key == "depth_max") config.depth_max = value.get<int>();
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      bad("key '" + key + "' has the wrong type");
    }
  }
  return config;
}

void validate_config(const RunConfig& config) {
  static const std::set<std::string> actions = {
      "circle-rotation", "torus-translation", "so3-rational-rotations", "odometer",
      "trivial"};
  static const std::set<std::string> spaces = {"", "circle", "torus", "so3", "cantor"};
  if (!actions.count(config.action)) bad("unknown action '" + config.action + "'");
  if (!spaces.count(config.space)) bad("unknown space '" + config.space + "'");
  if (config.torus_dim < 1 || config.torus_dim > 4) bad("torus_dim must be in [1,4]");
  if (config.depth < 1 || config.depth > 30) bad("depth must be in [1,30]");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (!(config.levels[i] > 0.0)) bad("levels must be positive");
    if (i > 0 && !(config.levels[i] > config.levels[i - 1])) {
      bad("levels must be strictly increasing");
    }
  }
  if (!(config.epsilon > 0.0)) bad("epsilon must be positive");
  if (!config.r_auto && !(config.r > 0.0)) bad("r must be positive or \"auto\"");
  if (config.net_kind != "greedy" && config.net_kind != "arithmetic") {
    bad("net_kind must be greedy | arithmetic");
  }
  if (config.snap_mode != "snap" && config.snap_mode != "exact-offnet") {
    bad("snap_mode must be snap | exact-offnet");
  }
  if (config.operator_id != "coupling" && config.operator_id != "local" &&
      config.operator_id != "group") {
    bad("operator must be coupling | local | group");
  }
  if (config.modes < 1) bad("modes must be >= 1");
  if (config.cutoff < 0.0) bad("cutoff must be >= 0 (0 selects 3 * epsilon)");
  if (config.rmax < 0.0) bad("rmax must be >= 0 (0 selects the command default)");
  if (config.grid < 2) bad("grid must be >= 2");
  if (!(config.window_eps > 0.0)) bad("window_eps must be positive");
  if (!(config.window_top > 1.0)) bad("window_top must exceed 1");
  if (!(config.eps_target > 0.0)) bad("eps_target must be positive");
  if (config.mode_cap < 1) bad("mode_cap must be >= 1");
  if (config.sections < 1) bad("sections must be >= 1");
  if (config.columns < 0) bad("columns must be >= 0 (0 = every column)");
  if (config.depth_min < 1 || config.depth_max > 30 || config.depth_min > config.depth_max) {
    bad("depth_min..depth_max must be a subrange of [1,30]");
  }
}

std::string config_echo(const RunConfig& config) {
  ordered_json j;
  j["action"] = config.action;
  j["space"] = config.space;
  j["torus_dim"] = config.torus_dim;
  j["depth"] = config.depth;
  j["levels"] = config.levels;
  j["epsilon"] = config.epsilon;
  if (config.r_auto) {
    j["r"] = "auto";
  } else {
    j["r"] = config.r;
  }
  j["seed"] = config.seed;
  j["out"] = config.out;
  j["net_kind"] = config.net_kind;
  j["snap_mode"] = config.snap_mode;
  j["operator"] = config.operator_id;
  j["modes"] = config.modes;
  j["cutoff"] = config.cutoff;
  j["rmax"] = config.rmax;
  j["grid"] = config.grid;
  j["window_eps"] = config.window_eps;
  j["window_top"] = config.window_top;
  j["eps_target"] = config.eps_target;
  j["mode_cap"] = config.mode_cap;
  j["sections"] = config.sections;
  j["columns"] = config.columns;
  j["depth_min"] = config.depth_min;
  j["depth_max"] = config.depth_max;
  return j.dump();
}

}  // namespace warpedlab
