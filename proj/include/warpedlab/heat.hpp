#pragma once

#include <array>
#include <string>
#include <vector>

#include "warpedlab/spaces.hpp"

namespace warpedlab {

// Fourier-side heat machinery on the flat model spaces (circle, flat torus),
// where the Laplace spectrum is the exact lattice {4 pi^2 |k|^2} and both the
// ball-averaging operator and the heat multiplier are diagonal in the same
// basis. Curved spaces are deliberately excluded: the flat models already
// exercise every inequality these experiments test.

// sigma = 1 - exp(-lambda / t^2), the heat multiplier at level t.
double heat_sigma(double t, double lambda);

struct HeatMode {
  std::array<int, 4> freq{0, 0, 0, 0};  // representative frequency vector
  double lambda = 0.0;                  // 4 pi^2 |k|^2
  int multiplicity = 1;                 // signed permutations of the representative
  double sigma = 0.0;
};

struct HeatOperator {
  ModelSpace space = ModelSpace::circle();
  double t = 1.0;
  std::vector<HeatMode> modes;  // ascending |k|^2, starting at k = 0
};

// Modes with |k|_inf <= mode_cap as sorted representatives with
// multiplicities. Circle or flat torus only.
HeatOperator make_heat_operator(const ModelSpace& space, double t, int mode_cap);

// Exact symbol of the ball-averaging operator at level t and radius r on the
// circle: the Fourier eigenvalue of xi(x) -> integral over B_{r/t}(x) of
// (xi(x)-xi(y)) against t * dy. The ball radius saturates at half the circle.
double local_symbol_circle(double t, double r, int k);

// Same symbol realized on the N-point lattice discretization (the eigenvalue
// actually produced by the assembled operator on an arithmetic net).
double local_symbol_circle_discrete(int n, double t, double r, int k);

// Two-dimensional flat-torus symbol via the closed Bessel form.
double local_symbol_torus2(double t, double r, int k1, int k2);

// Comparison constant 3 (4 pi)^{m/2} exp(r^2 / 4) of the upper bound.
double sandwich_constant(int m, double r);

struct SandwichRow {
  double t = 0.0;
  double kappa = 0.0;  // |k|
  double lhs = 0.0;    // ball-averaging symbol at radius r
  double rhs = 0.0;    // C * sigma
  double margin = 0.0; // rhs - lhs
};

struct SandwichReport {
  std::string space_name;
  int m = 1;
  double r = 0.0;
  double C = 0.0;
  std::vector<double> t_list;
  double eps_target = 0.0;
  int mode_cap = 0;

  // First inequality: symbol_r(k) <= C * sigma(k) for every mode and every
  // level from t0 on (t0 is the smallest listed level from which the bound
  // holds for every larger listed level).
  bool pass_upper = false;
  double t0 = 0.0;
  double max_violation_upper = 0.0;

  // Second inequality: sigma(k) <= D * symbol_R(k) + eps_target, with the
  // smallest integer radius R <= 50 that admits a witness D; D is fitted as
  // the max ratio over the lowest ten positive modes and then validated over
  // all modes and levels.
  bool pass_lower = false;
  int R = 0;
  double D = 0.0;
  double max_violation_lower = 0.0;
  double worst_kappa_lower = 0.0;

  std::vector<SandwichRow> rows;  // first-inequality table per (t, mode)

  bool pass() const { return pass_upper && pass_lower; }
};

// Verify the two-sided comparison between the ball-averaging symbol and the
// heat multiplier across the given levels, per Fourier mode. Circle uses
// modes k = 1..mode_cap; the 2-torus uses all lattice modes with
// |k|_inf <= ceil(sqrt(mode_cap)). Throws std::invalid_argument for other
// spaces.
SandwichReport sandwich_check(const ModelSpace& space, const std::vector<double>& t_list,
                              double r, double eps_target, int mode_cap = 500);

// Counting function N(R) = #{ k lattice : 4 pi^2 |k|^2 <= R } (the zero mode
// included), exact by enumeration. Circle and flat tori up to dimension 4
// (with an enumeration budget guard).
std::uint64_t count_modes_below(const ModelSpace& space, double R);

struct WeylReport {
  std::string space_name;
  int m = 1;
  std::vector<double> R_grid;
  std::vector<std::uint64_t> counts;
  double fit_constant = 0.0;     // least squares of N(R) ~ C R^{m/2}, upper half
  double oracle_constant = 0.0;  // vol(unit m-ball) / (2 pi)^m
  double relative_error = 0.0;   // |fit/oracle - 1|
};

WeylReport weyl_counting(const ModelSpace& space, double R_max, int grid_points = 32);

struct AccumulationReport {
  std::string space_name;
  double eps = 0.0;
  double window_top = 0.0;  // multiplier: window is [eps, window_top * eps]
  std::vector<double> t_list;
  std::vector<std::uint64_t> counts;  // #{ lambda : lambda / t^2 in window }
  bool has_threshold = false;
  double threshold_t0 = 0.0;  // least listed t with count >= 1 from there on
};

// Count rescaled Laplace eigenvalues falling in the closed window
// [eps, window_top * eps] per level. eps must be positive and window_top > 1.
AccumulationReport accumulation_scan(const ModelSpace& space,
                                     const std::vector<double>& t_list, double eps,
                                     double window_top = 2.0);

}  // namespace warpedlab
