#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "warpedlab/actions.hpp"
#include "warpedlab/net.hpp"

namespace warpedlab {

// Group-difference table of a net. Entry (i,j) is the index of the net point
// nearest to y_j^{-1} * x_i under the group structure carried by the space
// (circle and torus addition, quaternion multiplication, digit-string
// addition). Lifting a section f to K[i][j] = f[index(i,j)] realizes the
// translation-determined kernels; on lattice nets the table is an exact
// circulant and the lift is loss-free.
struct LiftedKernel {
  int n = 0;
  std::vector<int> snap_index;   // row-major (i,j)
  double max_snap_defect = 0.0;  // scaled distance from the exact difference
  int e_index = -1;              // index of the net point nearest the identity
  double e_defect = 0.0;         // scaled distance of that point from the identity
  std::vector<std::string> warnings;

  int index(int i, int j) const {
    return snap_index[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + j];
  }
  // K[i][j] = f[index(i,j)], row-major, size n*n.
  std::vector<double> matrix(const std::vector<double>& f) const;
};

LiftedKernel lift_kernel(const EpsNet& net, const NeighborIndex& index);
LiftedKernel lift_kernel(const EpsNet& net);

// Certificate that restriction-to-a-column identifies the lifted kernels
// with the sections, compatibly with the ball operator.
//
//   intertwining_residual : || A K - lift(A f) ||_{HS,w} / || K ||_{HS,w}
//                           where A = W^{-1} F acts on the first variable
//                           and F is the ball-kernel form at radius r.
//   section_residual      : the identity column of A K against A f, in the
//                           weighted l2 norm relative to || f ||_w.
//   isometry_defect       : | ||K||_{HS,w} / (sqrt(total mass) ||f||_w) - 1 |.
//
// On lattice nets every quantity is exact up to roundoff; on sampled nets
// the residuals scale with the snap defect and the section's modulus of
// continuity.
struct WResidualReport {
  int n = 0;
  double t = 0.0;
  double r = 0.0;
  int columns_used = 0;  // kernel columns entering the matrix-level norms
  double intertwining_residual = 0.0;
  double section_residual = 0.0;
  double isometry_defect = 0.0;
  double max_snap_defect = 0.0;
  int e_index = -1;
  std::vector<std::string> warnings;
};

// column_budget limits the kernel columns entering the Hilbert-Schmidt
// norms (the identity column is always included, so section_residual is
// always exact); <= 0 means every column. Building a full difference table
// costs n^2 nearest-point queries, so budget the columns on nets beyond a
// few thousand points.
WResidualReport w_unitary_residual(const EpsNet& net, double r,
                                   const std::vector<double>& f,
                                   int column_budget = 0);

// The closed-form eigenvalue coupling: for a commuting pair with generator
// eigenvalue l1 and ball eigenvalue l2,
//   f = s*phi - (s - l1)*(phi - l2),
// s the generating-set size (identity letter included) and phi the ball mass.
double joint_f_value(int group_size, double phi, double l1, double l2);

struct JointSample {
  int k = 0;          // Fourier mode
  double lambda1 = 0; // generator-operator eigenvalue at mode k
  double lambda2 = 0; // ball-operator eigenvalue at mode k
  double f_value = 0; // coupled eigenvalue through the closed form
};

struct JointSpectrumReport {
  std::string action_name;
  int n = 0;              // lattice size
  double t = 0.0;
  double r = 0.0;
  int rotation_steps = 0; // lattice steps of the snapped rotation
  double alpha_hat = 0.0; // snapped rotation fraction rotation_steps / n
  double phi = 0.0;       // uniform ball mass on the lattice
  int group_size = 0;     // generating-set size, identity letter included
  std::vector<JointSample> samples;         // modes k = 0 .. n-1
  // Comparison of the closed form against the assembled coupling operator:
  // the `compared` smallest eigenvalues from each side, sorted.
  int compared = 0;
  std::vector<double> formula_values;       // sorted, first `compared`
  std::vector<double> operator_values;      // sorted, first `compared`
  double multiset_error = 0.0;              // max absolute gap between the two
};

// Exact joint diagonalization on the snapped lattice: the rotation and the
// ball kernel are simultaneously circulant, so every Fourier mode carries a
// (lambda1, lambda2, f) triple, and the multiset {f} must reproduce the
// spectrum of the assembled coupling operator. Throws std::domain_error for
// any configuration where the two operators do not commute exactly (only a
// circle rotation over a lattice net qualifies).
JointSpectrumReport joint_spectrum(const IsometricAction& action, const EpsNet& net,
                                   double r, int compare_modes = 50);

}  // namespace warpedlab
