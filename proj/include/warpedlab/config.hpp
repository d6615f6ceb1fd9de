#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace warpedlab {

// Everything a command run needs, resolved from built-in defaults, then an
// optional JSON config file, then command-line flag overrides (last wins).
// Every field mirrors a flag and a JSON key of the same name; `r` accepts
// the string "auto" (the admissible radius t_min * free_radius) or a number.
struct RunConfig {
  std::string action = "circle-rotation";
  std::string space;             // "" -> the action's home space
  int torus_dim = 2;             // flat torus dimension when space = "torus"
  int depth = 4;                 // digit-space depth for fixed-depth commands
  std::vector<double> levels;    // scale list; commands fill their defaults
  double epsilon = 0.5;          // net resolution in the scaled metric
  bool r_auto = true;
  double r = 0.0;                // used when r_auto is false
  std::uint64_t seed = 20240915;
  std::string out = "reports";
  std::string net_kind = "greedy";      // "greedy" | "arithmetic"
  std::string snap_mode = "snap";       // "snap" | "exact-offnet"
  std::string operator_id = "coupling"; // "coupling" | "local" | "group"
  int modes = 50;        // eigenvalues per spectrum / comparison modes
  double cutoff = 0.0;   // warped-graph metric cutoff; 0 -> 3 * epsilon
  double rmax = 0.0;     // counting-fit window top; 0 -> command default
  int grid = 32;         // counting-fit grid points
  double window_eps = 0.5;   // accumulation window base
  double window_top = 2.0;   // accumulation window multiplier
  double eps_target = 0.01;  // sandwich lower-inequality slack
  int mode_cap = 500;        // sandwich mode range
  int sections = 20;         // invariant: random sections tested
  int columns = 0;           // invariant: kernel column budget (0 = all)
  int depth_min = 3;         // boxcompare depth range
  int depth_max = 8;
};

// Parse a JSON object file as overrides on top of `base`. Unknown keys are
// a config error (exit code 1 at the CLI).
RunConfig load_config_file(const std::string& path, const RunConfig& base);

// Shared schema validation: positive resolutions, strictly increasing
// levels, enum fields, depth ranges. Throws std::invalid_argument with the
// offending key named.
void validate_config(const RunConfig& config);

// The resolved configuration as a single-line JSON object (the echo every
// report carries).
std::string config_echo(const RunConfig& config);

}  // namespace warpedlab
