// Command-line driver: deterministic experiment runs with CSV + JSON reports.
//
// Exit codes: 0 = all checks passed, 1 = configuration error, 2 = a numerical
// invariant failed (the report and stdout name the invariant and the worst
// offending datum).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warpedlab/actions.hpp"
#include "warpedlab/config.hpp"
#include "warpedlab/heat.hpp"
#include "warpedlab/invariant.hpp"
#include "warpedlab/net.hpp"
#include "warpedlab/operators.hpp"
#include "warpedlab/report.hpp"
#include "warpedlab/rng.hpp"
#include "warpedlab/spaces.hpp"
#include "warpedlab/spectra.hpp"
#include "warpedlab/version.hpp"
#include "warpedlab/warped.hpp"

namespace {

using warpedlab::RunConfig;
using ordered_json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Gate bookkeeping: every numerical check funnels through here so failures
// always name the invariant and the worst datum, on stdout and in the JSON.
// ---------------------------------------------------------------------------
struct Gates {
  std::vector<std::string> failures;

  void check(bool ok, const std::string& invariant, const std::string& worst_datum) {
    if (ok) {
      std::printf("PASS %s\n", invariant.c_str());
    } else {
      const std::string line = invariant + " (worst datum: " + worst_datum + ")";
      std::printf("FAIL %s\n", line.c_str());
      failures.push_back(line);
    }
  }
  bool pass() const { return failures.empty(); }
};

std::string num(double v) { return warpedlab::format_number(v); }

// ---------------------------------------------------------------------------
// Config resolution
// ---------------------------------------------------------------------------
warpedlab::ModelSpace resolve_space(const RunConfig& config) {
  std::string name = config.space;
  if (name.empty()) {
    if (config.action == "torus-translation") name = "torus";
    else if (config.action == "so3-rational-rotations") name = "so3";
    else if (config.action == "odometer") name = "cantor";
    else name = "circle";
  }
  if (name == "circle") return warpedlab::ModelSpace::circle();
  if (name == "torus") return warpedlab::ModelSpace::flat_torus(config.torus_dim);
  if (name == "so3") return warpedlab::ModelSpace::so3();
  return warpedlab::ModelSpace::cantor_level(config.depth);
}

std::vector<double> resolve_levels(const RunConfig& config,
                                   std::vector<double> fallback) {
  return config.levels.empty() ? fallback : config.levels;
}

double resolve_r(const RunConfig& config, const warpedlab::IsometricAction& action,
                 double t_min) {
  if (!config.r_auto) return config.r;
  const double free_radius = warpedlab::max_free_radius(action);
  double r = t_min * free_radius;
  if (!std::isfinite(r)) r = 0.25 * t_min;  // identity-only action
  return r;
}

warpedlab::EpsNet build_level_net(const RunConfig& config,
                                  const warpedlab::ModelSpace& space, double t,
                                  std::size_t level_index) {
  if (config.net_kind == "arithmetic") {
    if (space.kind() != warpedlab::SpaceKind::Circle) {
      throw std::invalid_argument("config: arithmetic nets exist only on the circle");
    }
    const int n = std::max(2, static_cast<int>(std::lround(t / config.epsilon)));
    return warpedlab::arithmetic_circle_net(t, n);
  }
  return warpedlab::build_eps_net(space, t, config.epsilon,
                                  config.seed + 1000 * level_index);
}

ordered_json json_base(const std::string& command, const RunConfig& config) {
  ordered_json j;
  j["version"] = warpedlab::kVersion;
  j["command"] = command;
  j["config"] = ordered_json::parse(warpedlab::config_echo(config));
  return j;
}

int finish(const std::string& command, const RunConfig& config, ordered_json& j,
           const Gates& gates) {
  j["pass"] = gates.pass();
  j["failures"] = gates.failures;
  warpedlab::ensure_directory(config.out);
  warpedlab::write_text_atomic(config.out + "/" + command + ".json", j.dump(2) + "\n");
  return gates.pass() ? 0 : 2;
}

// ---------------------------------------------------------------------------
// net
// ---------------------------------------------------------------------------
int run_net(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const std::vector<double> levels = resolve_levels(config, {10.0});

  Gates gates;
  ordered_json j = json_base("net", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  std::vector<std::string> head = {"t", "index", "weight"};
  for (const auto& c : space.coord_names()) head.push_back(c);
  csv.header(head);

  ordered_json levels_json = ordered_json::array();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double t = levels[li];
    warpedlab::EpsNet net = build_level_net(config, space, t, li);
    warpedlab::NetDiagnostics diag = warpedlab::net_diagnostics(net);
    for (int i = 0; i < net.size(); ++i) {
      std::vector<double> row = {t, static_cast<double>(i), net.weights[i]};
      for (double c : space.coords(net.points[i])) row.push_back(c);
      csv.row(row);
    }
    ordered_json lj;
    lj["t"] = t;
    lj["size"] = net.size();
    lj["kind"] = net.kind;
    lj["weight_sum"] = net.weight_sum();
    lj["weight_min"] = diag.weight_min;
    lj["weight_max"] = diag.weight_max;
    lj["min_separation_scaled"] = diag.min_separation_scaled;
    lj["max_covering_scaled"] = diag.max_covering_scaled;
    lj["separation_exhaustive"] = diag.separation_exhaustive;
    levels_json.push_back(lj);

    const double eps_eff = net.kind == "arithmetic" ? net.epsilon : config.epsilon;
    gates.check(net.size() < 2 ||
                    diag.min_separation_scaled >= eps_eff * (1.0 - 1e-12),
                "net separation stays at or above the resolution (t=" + num(t) + ")",
                "min separation " + num(diag.min_separation_scaled) + " vs resolution " +
                    num(eps_eff));
  }
  j["levels"] = levels_json;
  csv.write(config.out + "/net.csv");
  return finish("net", config, j, gates);
}

// ---------------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------------
int run_graph(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const warpedlab::IsometricAction action =
      warpedlab::make_named_action(config.action, space);
  const std::vector<double> levels = resolve_levels(config, {10.0});
  const warpedlab::SnapMode mode = warpedlab::parse_snap_mode(config.snap_mode);

  Gates gates;
  ordered_json j = json_base("graph", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"kind", "t", "i", "j", "value"});

  ordered_json levels_json = ordered_json::array();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double t = levels[li];
    warpedlab::EpsNet net = build_level_net(config, space, t, li);
    warpedlab::WarpedGraph graph =
        warpedlab::build_warped_graph(net, action, config.cutoff, mode);
    for (const auto& e : graph.metric_edges) {
      csv.labeled_row("metric", {t, static_cast<double>(e.i), static_cast<double>(e.j),
                                 e.weight});
    }
    for (const auto& e : graph.generator_edges) {
      csv.labeled_row("generator_" + graph.generator_labels[e.s],
                      {t, static_cast<double>(e.i), static_cast<double>(e.j), 1.0});
    }
    ordered_json lj;
    lj["t"] = t;
    lj["size"] = graph.size();
    lj["cutoff"] = graph.cutoff;
    lj["snap_mode"] = warpedlab::snap_mode_name(graph.snap_mode);
    lj["metric_edges"] = graph.metric_edges.size();
    lj["generator_edges"] = graph.generator_edges.size();
    lj["connected"] = graph.connected;
    lj["max_snap_defect"] = graph.max_snap_defect;
    lj["snap_collisions"] = graph.snap_collision_count;
    lj["free_radius"] = graph.free_radius;
    lj["admissible_r"] = graph.admissible_r;
    if (!graph.connected) {
      lj["warning"] = "graph is disconnected at this cutoff";
    }
    levels_json.push_back(lj);

    if (graph.snap_mode == warpedlab::SnapMode::Snap) {
      gates.check(graph.max_snap_defect < config.epsilon,
                  "generator snapping stays below the net resolution (t=" + num(t) + ")",
                  "max snap defect " + num(graph.max_snap_defect) + " vs resolution " +
                      num(config.epsilon));
    }
  }
  j["levels"] = levels_json;
  csv.write(config.out + "/graph.csv");
  return finish("graph", config, j, gates);
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------
int run_spectrum(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const warpedlab::IsometricAction action =
      warpedlab::make_named_action(config.action, space);
  const std::vector<double> levels = resolve_levels(config, {10.0});
  const double r = resolve_r(config, action, levels.front());

  Gates gates;
  ordered_json j = json_base("spectrum", config);
  j["r"] = r;
  j["operator"] = config.operator_id;
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"t", "index", "eigenvalue", "residual"});

  ordered_json levels_json = ordered_json::array();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double t = levels[li];
    warpedlab::EpsNet net = build_level_net(config, space, t, li);
    warpedlab::WarpedGraph graph = warpedlab::build_warped_graph(
        net, action, config.cutoff, warpedlab::parse_snap_mode(config.snap_mode));
    warpedlab::OperatorBundle bundle = warpedlab::make_operator_bundle(graph, r);
    const warpedlab::SparseSymmetricOperator& op =
        config.operator_id == "local"
            ? bundle.local
            : (config.operator_id == "group" ? bundle.group : bundle.coarse);
    const int k = std::min(config.modes, net.size());
    warpedlab::SpectrumReport spec = warpedlab::bottom_spectrum(op, bundle.weights, k);
    for (int i = 0; i < static_cast<int>(spec.eigenvalues.size()); ++i) {
      csv.row({t, static_cast<double>(i), spec.eigenvalues[i], spec.residuals[i]});
    }

    double max_residual = 0.0;
    for (double v : spec.residuals) max_residual = std::max(max_residual, v);
    const double tol = 1e-8 * std::max(op.inf_norm(), 1e-300);
    ordered_json lj;
    lj["t"] = t;
    lj["size"] = net.size();
    lj["method"] = spec.method;
    lj["lambda_min"] = spec.eigenvalues.front();
    if (spec.eigenvalues.size() > 1) lj["gap"] = spec.eigenvalues[1];
    lj["max_residual"] = max_residual;
    lj["residual_tolerance"] = tol;
    levels_json.push_back(lj);

    gates.check(max_residual <= tol,
                "eigenpair residuals stay within solver tolerance (t=" + num(t) + ")",
                "max residual " + num(max_residual) + " vs tolerance " + num(tol));
    gates.check(std::fabs(spec.eigenvalues.front()) <= 1e-9,
                "constant vector sits in the kernel (t=" + num(t) + ")",
                "bottom eigenvalue " + num(spec.eigenvalues.front()));
    gates.check(spec.eigenvalues.front() >= -1e-9,
                "operator is positive semidefinite (t=" + num(t) + ")",
                "bottom eigenvalue " + num(spec.eigenvalues.front()));
  }
  j["levels"] = levels_json;
  csv.write(config.out + "/spectrum.csv");
  return finish("spectrum", config, j, gates);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------
int run_sweep(const RunConfig& config) {
  Gates gates;
  ordered_json j = json_base("sweep", config);
  warpedlab::GapSweep sweep;
  if (config.action == "odometer") {
    const std::vector<double> levels =
        resolve_levels(config, {8.0, 16.0, 32.0, 64.0, 128.0});
    sweep = warpedlab::gap_across_levels_odometer(
        levels, config.r_auto ? 0.0 : config.r, config.seed);
  } else {
    const warpedlab::ModelSpace space = resolve_space(config);
    const warpedlab::IsometricAction action =
        warpedlab::make_named_action(config.action, space);
    const std::vector<double> levels =
        resolve_levels(config, {5.0, 10.0, 20.0, 40.0});
    sweep = warpedlab::gap_across_levels(action, levels, config.epsilon,
                                         config.r_auto ? 0.0 : config.r,
                                         config.net_kind, config.seed);
  }

  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"t", "net_size", "lambda2", "phi_mean", "normalized_gap"});
  for (const auto& p : sweep.points) {
    csv.row({p.t, static_cast<double>(p.net_size), p.lambda2, p.phi_mean,
             p.normalized_gap});
  }
  csv.write(config.out + "/sweep.csv");

  j["action"] = sweep.action_name;
  j["net_kind"] = sweep.net_kind;
  j["r"] = sweep.r;
  j["min_normalized_gap"] = sweep.min_normalized_gap;
  j["ratio_last_to_first"] = sweep.ratio_last_to_first;
  ordered_json points = ordered_json::array();
  for (const auto& p : sweep.points) {
    ordered_json pj;
    pj["t"] = p.t;
    pj["net_size"] = p.net_size;
    pj["lambda2"] = p.lambda2;
    pj["phi_mean"] = p.phi_mean;
    pj["normalized_gap"] = p.normalized_gap;
    points.push_back(pj);
  }
  j["points"] = points;

  double worst = 0.0;
  for (const auto& p : sweep.points) worst = std::min(worst, p.lambda2);
  gates.check(worst >= -1e-9, "first excited eigenvalue is nonnegative at every level",
              "min lambda2 " + num(worst));
  return finish("sweep", config, j, gates);
}

// ---------------------------------------------------------------------------
// sandwich
// ---------------------------------------------------------------------------
int run_sandwich(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const std::vector<double> levels = resolve_levels(config, {10.0, 20.0, 40.0});
  const double r = config.r_auto ? 1.0 : config.r;

  warpedlab::SandwichReport rep = warpedlab::sandwich_check(
      space, levels, r, config.eps_target, config.mode_cap);

  Gates gates;
  ordered_json j = json_base("sandwich", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"t", "kappa", "lhs", "rhs", "margin"});
  for (const auto& row : rep.rows) csv.row({row.t, row.kappa, row.lhs, row.rhs, row.margin});
  csv.write(config.out + "/sandwich.csv");

  j["space"] = rep.space_name;
  j["m"] = rep.m;
  j["r"] = rep.r;
  j["C"] = rep.C;
  j["pass_upper"] = rep.pass_upper;
  j["t0"] = rep.t0;
  j["max_violation_upper"] = rep.max_violation_upper;
  j["pass_lower"] = rep.pass_lower;
  j["R"] = rep.R;
  j["D"] = rep.D;
  j["max_violation_lower"] = rep.max_violation_lower;
  j["worst_kappa_lower"] = rep.worst_kappa_lower;

  gates.check(rep.pass_upper,
              "symbol is dominated by C * heat multiplier from some listed level on",
              "violation " + num(rep.max_violation_upper) + " with C " + num(rep.C));
  gates.check(rep.pass_lower,
              "heat multiplier is dominated by D * enlarged symbol + eps_target for "
              "some integer radius <= 50",
              "violation " + num(rep.max_violation_lower) + " at mode " +
                  num(rep.worst_kappa_lower));
  return finish("sandwich", config, j, gates);
}

// ---------------------------------------------------------------------------
// weyl
// ---------------------------------------------------------------------------
int run_weyl(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const int m = space.kind() == warpedlab::SpaceKind::Circle ? 1 : space.dim();
  double rmax = config.rmax;
  if (rmax <= 0.0) {
    const double base[5] = {0.0, 1000.0, 600.0, 150.0, 100.0};
    if (m < 1 || m > 4) throw std::invalid_argument("config: counting needs m in [1,4]");
    rmax = (base[m] * kPi) * (base[m] * kPi);
  }
  warpedlab::WeylReport rep = warpedlab::weyl_counting(space, rmax, config.grid);

  Gates gates;
  ordered_json j = json_base("weyl", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"R", "count", "fit_count"});
  for (std::size_t i = 0; i < rep.R_grid.size(); ++i) {
    csv.row({rep.R_grid[i], static_cast<double>(rep.counts[i]),
             rep.fit_constant * std::pow(rep.R_grid[i], 0.5 * rep.m)});
  }
  csv.write(config.out + "/weyl.csv");

  j["space"] = rep.space_name;
  j["m"] = rep.m;
  j["rmax"] = rmax;
  j["fit_constant"] = rep.fit_constant;
  j["oracle_constant"] = rep.oracle_constant;
  j["relative_error"] = rep.relative_error;

  const double gate = rep.m == 1 ? 0.02 : 0.05;
  gates.check(rep.relative_error <= gate,
              "counting fit matches the closed-form constant",
              "fit " + num(rep.fit_constant) + " vs oracle " + num(rep.oracle_constant) +
                  " (relative error " + num(rep.relative_error) + ", gate " + num(gate) +
                  ")");
  return finish("weyl", config, j, gates);
}

// ---------------------------------------------------------------------------
// accumulate
// ---------------------------------------------------------------------------
int run_accumulate(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  std::vector<double> levels = config.levels;
  if (levels.empty()) {
    for (int t = 2; t <= 200; ++t) levels.push_back(t);
  }
  warpedlab::AccumulationReport rep =
      warpedlab::accumulation_scan(space, levels, config.window_eps, config.window_top);

  Gates gates;
  ordered_json j = json_base("accumulate", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"t", "count"});
  for (std::size_t i = 0; i < rep.t_list.size(); ++i) {
    csv.row({rep.t_list[i], static_cast<double>(rep.counts[i])});
  }
  csv.write(config.out + "/accumulate.csv");

  j["space"] = rep.space_name;
  j["window_eps"] = rep.eps;
  j["window_top"] = rep.window_top;
  j["has_threshold"] = rep.has_threshold;
  if (rep.has_threshold) j["threshold_t0"] = rep.threshold_t0;

  // Reporting command: the threshold is the result, not a gate.
  std::printf("threshold t0 %s\n",
              rep.has_threshold ? num(rep.threshold_t0).c_str() : "not reached");
  return finish("accumulate", config, j, gates);
}

// ---------------------------------------------------------------------------
// invariant
// ---------------------------------------------------------------------------
int run_invariant(const RunConfig& config) {
  const warpedlab::ModelSpace space = resolve_space(config);
  const warpedlab::IsometricAction action =
      warpedlab::make_named_action(config.action, space);
  const std::vector<double> levels = resolve_levels(config, {10.0});
  const double t = levels.front();
  const double r = resolve_r(config, action, t);
  warpedlab::EpsNet net = build_level_net(config, space, t, 0);
  const bool lattice = net.kind == "arithmetic" || net.kind == "full";

  Gates gates;
  ordered_json j = json_base("invariant", config);
  j["t"] = t;
  j["r"] = r;
  j["net_size"] = net.size();
  j["net_kind"] = net.kind;

  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"section", "intertwining_residual", "section_residual", "isometry_defect",
              "max_snap_defect"});

  double worst_intertwine = 0.0;
  double worst_section = 0.0;
  double worst_isometry = 0.0;
  double worst_snap = 0.0;
  if (lattice) {
    warpedlab::Rng rng(config.seed);
    for (int s = 0; s < config.sections; ++s) {
      std::vector<double> f(net.size());
      for (auto& v : f) v = rng.gaussian();
      warpedlab::WResidualReport rep =
          warpedlab::w_unitary_residual(net, r, f, config.columns);
      csv.row({static_cast<double>(s), rep.intertwining_residual, rep.section_residual,
               rep.isometry_defect, rep.max_snap_defect});
      worst_intertwine = std::max(worst_intertwine, rep.intertwining_residual);
      worst_section = std::max(worst_section, rep.section_residual);
      worst_isometry = std::max(worst_isometry, rep.isometry_defect);
      worst_snap = std::max(worst_snap, rep.max_snap_defect);
    }
  } else {
    // Sampled nets have no machine-exact sections; use the smooth catalog
    // section (mean term plus the first-coordinate square).
    std::vector<double> f(net.size());
    for (int i = 0; i < net.size(); ++i) {
      const double c = net.points[i].c[0];
      f[i] = 1.0 + 0.5 * c * c;
    }
    const int budget = config.columns > 0 ? config.columns : 64;
    warpedlab::WResidualReport rep = warpedlab::w_unitary_residual(net, r, f, budget);
    csv.row({0.0, rep.intertwining_residual, rep.section_residual, rep.isometry_defect,
             rep.max_snap_defect});
    worst_intertwine = rep.intertwining_residual;
    worst_section = rep.section_residual;
    worst_isometry = rep.isometry_defect;
    worst_snap = rep.max_snap_defect;
  }
  csv.write(config.out + "/invariant.csv");

  j["worst_intertwining_residual"] = worst_intertwine;
  j["worst_section_residual"] = worst_section;
  j["worst_isometry_defect"] = worst_isometry;
  j["max_snap_defect"] = worst_snap;

  if (lattice) {
    gates.check(worst_section <= 1e-10,
                "section of the ball operator applied to the lifted kernel equals the "
                "ball operator applied to the section",
                "worst residual " + num(worst_section));
    gates.check(worst_intertwine <= 1e-10,
                "ball operator commutes with kernel lifting on the lattice",
                "worst residual " + num(worst_intertwine));
    gates.check(worst_isometry <= 1e-10, "kernel lifting is a weighted isometry",
                "worst defect " + num(worst_isometry));
  } else {
    gates.check(worst_section <= 1e-2,
                "section residual of the smooth section stays below 1e-2",
                "residual " + num(worst_section));
  }

  // Joint closed form on the commuting lattice configuration.
  if (config.action == "circle-rotation" && net.kind == "arithmetic") {
    warpedlab::JointSpectrumReport joint =
        warpedlab::joint_spectrum(action, net, r, config.modes);
    warpedlab::CsvReport jcsv(warpedlab::config_echo(config), warpedlab::kVersion);
    jcsv.header({"lambda1", "lambda2", "f_value"});
    for (const auto& s : joint.samples) jcsv.row({s.lambda1, s.lambda2, s.f_value});
    jcsv.write(config.out + "/joint_spectrum.csv");

    j["joint_phi"] = joint.phi;
    j["joint_rotation_steps"] = joint.rotation_steps;
    j["joint_compared"] = joint.compared;
    j["joint_multiset_error"] = joint.multiset_error;
    gates.check(joint.multiset_error <= 2e-3,
                "closed-form eigenvalue multiset matches the assembled operator",
                "max gap " + num(joint.multiset_error));
  } else {
    j["joint_multiset_error"] = nullptr;
  }
  return finish("invariant", config, j, gates);
}

// ---------------------------------------------------------------------------
// boxcompare
// ---------------------------------------------------------------------------
int run_boxcompare(const RunConfig& config) {
  Gates gates;
  ordered_json j = json_base("boxcompare", config);
  warpedlab::CsvReport csv(warpedlab::config_echo(config), warpedlab::kVersion);
  csv.header({"depth", "size", "L", "C"});

  double worst_L = 1.0;
  double worst_C = 0.0;
  ordered_json rows = ordered_json::array();
  for (int depth = config.depth_min; depth <= config.depth_max; ++depth) {
    const warpedlab::ModelSpace space = warpedlab::ModelSpace::cantor_level(depth);
    const warpedlab::IsometricAction action = warpedlab::make_odometer(depth);
    const double t = std::ldexp(1.0, depth);
    warpedlab::EpsNet net =
        warpedlab::build_eps_net(space, t, config.epsilon, config.seed);
    warpedlab::WarpedGraph graph = warpedlab::build_warped_graph(
        net, action, config.cutoff, warpedlab::parse_snap_mode(config.snap_mode));
    warpedlab::SimpleGraph box = warpedlab::box_space_graph(depth);

    const std::vector<std::vector<double>> dw = warpedlab::warped_all_pairs(graph);
    const std::vector<std::vector<double>> db = warpedlab::graph_all_pairs(box);
    warpedlab::DistortionResult dist = warpedlab::distortion(dw, db);
    csv.row({static_cast<double>(depth), static_cast<double>(net.size()), dist.L,
             dist.C});
    ordered_json row;
    row["depth"] = depth;
    row["size"] = net.size();
    row["L"] = dist.L;
    row["C"] = dist.C;
    rows.push_back(row);
    worst_L = std::max(worst_L, dist.L);
    worst_C = std::max(worst_C, dist.C);
  }
  csv.write(config.out + "/boxcompare.csv");
  j["rows"] = rows;
  j["worst_L"] = worst_L;
  j["worst_C"] = worst_C;

  gates.check(worst_L <= 2.0 && worst_C <= 2.0,
              "warped metric and the cycle family stay uniformly bi-Lipschitz "
              "equivalent (L <= 2, C <= 2)",
              "L " + num(worst_L) + ", C " + num(worst_C));
  return finish("boxcompare", config, j, gates);
}

}  // namespace

// ---------------------------------------------------------------------------
int main(int argc, char** argv) {
  CLI::App app{"warpedlab: deterministic spectral experiments on warped level sets"};
  app.require_subcommand(1);

  const std::vector<std::string> commands = {
      "net",       "graph", "spectrum",   "sweep",     "sandwich",
      "weyl",      "accumulate", "invariant", "boxcompare"};

  struct FlagSet {
    std::string config_path;
    std::string action, space, r_text, out, net_kind, snap_mode, operator_id;
    std::vector<double> levels;
    double epsilon = 0, cutoff = 0, rmax = 0, window_eps = 0, window_top = 0,
           eps_target = 0;
    std::uint64_t seed = 0;
    int torus_dim = 0, depth = 0, modes = 0, grid = 0, mode_cap = 0, sections = 0,
        columns = 0, depth_min = 0, depth_max = 0;
  };

  std::map<std::string, CLI::App*> subs;
  FlagSet flags;
  for (const auto& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", flags.config_path, "JSON config file (flags override)");
    sub->add_option("--action", flags.action,
                    "circle-rotation | torus-translation | so3-rational-rotations | "
                    "odometer | trivial");
    sub->add_option("--space", flags.space, "circle | torus | so3 | cantor");
    sub->add_option("--torus-dim", flags.torus_dim, "flat torus dimension (1-4)");
    sub->add_option("--depth", flags.depth, "digit-space depth");
    sub->add_option("--levels", flags.levels, "scale list, strictly increasing")
        ->delimiter(',');
    sub->add_option("--epsilon", flags.epsilon, "net resolution (scaled metric)");
    sub->add_option("--r", flags.r_text, "coupling radius, a number or 'auto'");
    sub->add_option("--seed", flags.seed, "deterministic seed (default 20240915)");
    sub->add_option("--out", flags.out, "report directory (default 'reports')");
    sub->add_option("--net-kind", flags.net_kind, "greedy | arithmetic");
    sub->add_option("--snap-mode", flags.snap_mode, "snap | exact-offnet");
    sub->add_option("--operator", flags.operator_id, "coupling | local | group");
    sub->add_option("--modes", flags.modes, "eigenvalue / comparison mode count");
    sub->add_option("--cutoff", flags.cutoff, "graph metric cutoff (0 = 3*epsilon)");
    sub->add_option("--rmax", flags.rmax, "counting window top (0 = default)");
    sub->add_option("--grid", flags.grid, "counting grid points");
    sub->add_option("--window-eps", flags.window_eps, "accumulation window base");
    sub->add_option("--window-top", flags.window_top, "accumulation window multiplier");
    sub->add_option("--eps-target", flags.eps_target, "sandwich lower-bound slack");
    sub->add_option("--mode-cap", flags.mode_cap, "sandwich mode range");
    sub->add_option("--sections", flags.sections, "random sections tested");
    sub->add_option("--columns", flags.columns, "kernel column budget (0 = all)");
    sub->add_option("--depth-min", flags.depth_min, "first compared depth");
    sub->add_option("--depth-max", flags.depth_max, "last compared depth");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    CLI::App* active = nullptr;
    std::string command;
    for (const auto& name : commands) {
      if (subs[name]->parsed()) {
        active = subs[name];
        command = name;
        break;
      }
    }

    RunConfig config;
    if (active->count("--config")) {
      config = warpedlab::load_config_file(flags.config_path, config);
    }
    auto passed = [&](const std::string& flag) { return active->count(flag) > 0; };
    if (passed("--action")) config.action = flags.action;
    if (passed("--space")) config.space = flags.space;
    if (passed("--torus-dim")) config.torus_dim = flags.torus_dim;
    if (passed("--depth")) config.depth = flags.depth;
    if (passed("--levels")) config.levels = flags.levels;
    if (passed("--epsilon")) config.epsilon = flags.epsilon;
    if (passed("--r")) {
      if (flags.r_text == "auto") {
        config.r_auto = true;
        config.r = 0.0;
      } else {
        try {
          std::size_t used = 0;
          config.r = std::stod(flags.r_text, &used);
          if (used != flags.r_text.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
          throw std::invalid_argument("config: r must be a number or 'auto'");
        }
        config.r_auto = false;
      }
    }
    if (passed("--seed")) config.seed = flags.seed;
    if (passed("--out")) config.out = flags.out;
    if (passed("--net-kind")) config.net_kind = flags.net_kind;
    if (passed("--snap-mode")) config.snap_mode = flags.snap_mode;
    if (passed("--operator")) config.operator_id = flags.operator_id;
    if (passed("--modes")) config.modes = flags.modes;
    if (passed("--cutoff")) config.cutoff = flags.cutoff;
    if (passed("--rmax")) config.rmax = flags.rmax;
    if (passed("--grid")) config.grid = flags.grid;
    if (passed("--window-eps")) config.window_eps = flags.window_eps;
    if (passed("--window-top")) config.window_top = flags.window_top;
    if (passed("--eps-target")) config.eps_target = flags.eps_target;
    if (passed("--sections")) config.sections = flags.sections;
    if (passed("--columns")) config.columns = flags.columns;
    if (passed("--mode-cap")) config.mode_cap = flags.mode_cap;
    if (passed("--depth-min")) config.depth_min = flags.depth_min;
    if (passed("--depth-max")) config.depth_max = flags.depth_max;

    warpedlab::validate_config(config);

    if (command == "net") return run_net(config);
    if (command == "graph") return run_graph(config);
    if (command == "spectrum") return run_spectrum(config);
    if (command == "sweep") return run_sweep(config);
    if (command == "sandwich") return run_sandwich(config);
    if (command == "weyl") return run_weyl(config);
    if (command == "accumulate") return run_accumulate(config);
    if (command == "invariant") return run_invariant(config);
    if (command == "boxcompare") return run_boxcompare(config);
    std::fprintf(stderr, "error: unknown command\n");
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 2;
  }
}
