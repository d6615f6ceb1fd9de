#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "warpedlab/actions.hpp"
#include "warpedlab/operators.hpp"

namespace warpedlab {

// Bottom of the spectrum of the pencil F ξ = λ W ξ, the matrix form of an
// operator acting on the weighted net.
struct SpectrumReport {
  std::string operator_id;
  double t = 0.0;
  std::string action_name;
  double epsilon = 0.0;
  double r = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> eigenvalues;  // ascending
  std::vector<double> residuals;    // ||F xi - lambda W xi||_2 at ||xi||_2 = 1
  double gap = 0.0;                 // eigenvalue over the complement of constants
  std::string method;               // "dense" | "lanczos"
};

// k smallest eigenpairs of (F, W), W = diag(weights) positive. Dense
// whitened solve (W^{-1/2} F W^{-1/2}) for dim <= 4000; above that a Lanczos
// iteration with full reorthogonalization on the reversed spectrum, with the
// exact constant-vector kernel deflated and re-inserted as an exact zero.
// Residuals are reported per pair; failure to reach 1e-8 * ||F||_inf after
// the iteration budget throws std::runtime_error carrying the best
// residuals. The iterative path resolves eigenvalue multiplicities only as
// far as it needs to order values, so multiset comparisons belong on the
// dense path.
SpectrumReport bottom_spectrum(const SparseSymmetricOperator& F,
                               const std::vector<double>& weights, int k);

// First eigenvalue above the kernel tolerance; 0.0 if none in the report.
double first_positive_eigenvalue(const SpectrumReport& report, double tol = 1e-9);

// One level of a spectral-gap sweep.
struct GapPoint {
  double t = 0.0;
  int net_size = 0;
  double lambda2 = 0.0;        // second eigenvalue of the coupling Laplacian
  double phi_mean = 0.0;       // weighted mean of the ball-mass function
  double normalized_gap = 0.0; // lambda2 / phi_mean
};

struct GapSweep {
  std::string action_name;
  std::string net_kind;  // "greedy" | "arithmetic"
  double epsilon = 0.0;
  double r = 0.0;        // radius actually used (resolved from "auto")
  std::uint64_t seed = 0;
  std::vector<GapPoint> points;
  double min_normalized_gap = 0.0;
  double ratio_last_to_first = 0.0;  // of normalized gaps
};

// Normalized spectral gap of the coupling Laplacian across increasing
// levels. levels must be strictly increasing. epsilon is the common net
// resolution (ignored by finite spaces); r <= 0 selects the automatic
// admissible radius t_min * free_radius, held fixed across the sweep.
// net_kind "arithmetic" (circle only) uses lattice nets of size round(t/eps);
// "greedy" uses seeded Haar nets with per-level seeds derived from seed.
GapSweep gap_across_levels(const IsometricAction& action,
                           const std::vector<double>& levels, double epsilon, double r,
                           const std::string& net_kind = "greedy",
                           std::uint64_t seed = 20240915);

// Digit-string (+1) sweep: the acting space itself grows with the level, so
// each level t = 2^depth rebuilds the depth-matched space and action and uses
// the full point set as its net. Levels must be strictly increasing powers of
// two; r <= 0 selects t_min * free_radius as above.
GapSweep gap_across_levels_odometer(const std::vector<double>& levels, double r,
                                    std::uint64_t seed = 20240915);

}  // namespace warpedlab
