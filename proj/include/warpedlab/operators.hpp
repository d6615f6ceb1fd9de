#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "warpedlab/net.hpp"
#include "warpedlab/warped.hpp"

namespace warpedlab {

// Symmetric quadratic-form matrix in compressed sparse rows. Every assembled
// operator is stored as the form matrix F of a nonnegative-weight graph
// Laplacian: off-diagonals accumulate pair couplings, are averaged with their
// transpose (pre-averaging defect logged), and the diagonal is recomputed as
// minus the off-diagonal row sum. That single convention yields exact
// symmetry, zero row sums, and positive semidefiniteness at once. Spectral
// questions solve the pencil (F, W) with W the diagonal of quadrature
// weights, which is the matrix form of the operators acting on the weighted
// net.
struct SparseSymmetricOperator {
  int dim = 0;
  std::vector<int> row_start;  // size dim+1
  std::vector<int> col;
  std::vector<double> val;
  bool symmetry_checked = false;
  // max |c_ij - c_ji| over accumulated couplings before the averaging step;
  // zero where membership tests are intrinsically symmetric.
  double presym_defect = 0.0;
  std::vector<std::string> warnings;

  std::size_t nnz() const { return val.size(); }
  double entry(int i, int j) const;
  std::vector<double> matvec(const std::vector<double>& x) const;
  double quadratic_form(const std::vector<double>& x) const;
  double max_abs() const;
  double inf_norm() const;  // max absolute row sum
  // Row sums evaluated in the same order the finalization used, so they
  // vanish exactly rather than to rounding.
  std::vector<double> row_sums() const;
  double max_row_sum_defect() const;
  double symmetry_defect() const;  // max |F_ij - F_ji| of the stored matrix
  std::vector<double> to_dense() const;  // row-major dim*dim
};

// max |A_ij - B_ij| over the union of sparsity patterns (dims must agree).
double max_abs_diff(const SparseSymmetricOperator& a, const SparseSymmetricOperator& b);

// Text export, one entry per line: "i j value".
std::string operator_to_coordinate_text(const SparseSymmetricOperator& op);

// Quadrature of the ball mass phi(x) = t^m mu(B_{r/t}(x)) on the net:
// phi_i = sum of w_j over t*d(p_i,p_j) < r, the self term included. Entries
// are positive (each ball contains its center).
std::vector<double> quadrature_phi(const EpsNet& net, const NeighborIndex& index, double r);
std::vector<double> quadrature_phi(const EpsNet& net, double r);

// Local averaging Laplacian: couples x to the net points of its own metric
// ball, (L ξ)(x) = Σ_{0<t·d(x,y)<r} w_y (ξ(x) − ξ(y)) in pencil form.
// If r is below the net separation every ball is a singleton and the zero
// operator is returned with a warning recorded.
SparseSymmetricOperator assemble_local(const EpsNet& net, const NeighborIndex& index,
                                       double r);
SparseSymmetricOperator assemble_local(const EpsNet& net, double r);

// Group-layer Laplacian: (Δξ)(x) = Σ_{s∈S} (ξ(x) − ξ(s⋆x)) with s⋆x the
// snapped generator image, so the motion layer is an index map and the
// identity letter cancels. Works from the snap map the graph carries in
// either mode; asymmetry of the s ↔ s⁻¹ pairing shows up in presym_defect
// (zero on lattice nets).
SparseSymmetricOperator assemble_group(const WarpedGraph& graph);

// Coupling-set Laplacian over ⋃_{s∈S} B_{r/t}(s⋆x). Direct mode quadratures
// the definition row-wise through controlled_neighbors; Composed mode builds
// the same rows from the assembled parts as |S|φ − (|S| − Δ_G)(φ − L_r),
// reading the ball rows out of the local operator and routing them through
// the snap map. Both modes share the symmetrize-and-finalize step, so in
// snap mode they agree to rounding; in exact-offnet mode the direct route
// tests membership around the true off-net images and the gap between the
// two routes is of order of the snap defect.
enum class CoarseMode { Direct, Composed };
CoarseMode parse_coarse_mode(const std::string& text);  // "direct" | "composed"
std::string coarse_mode_name(CoarseMode mode);

// Requires 0 < r <= graph.admissible_r (balls around generator images must
// stay disjoint); throws std::domain_error citing the freeness bound.
SparseSymmetricOperator assemble_coarse(const WarpedGraph& graph, const NeighborIndex& index,
                                        double r, CoarseMode mode);
SparseSymmetricOperator assemble_coarse(const WarpedGraph& graph, double r, CoarseMode mode);

// Energy of a symmetric nonnegative kernel: ½ Σ_{x,y} α(x,y) |ξ_x − ξ_y|² w_x w_y,
// the quadratic form of the kernel's Laplacian. alpha must be square,
// symmetric (1e-12), with nonnegative entries; otherwise std::domain_error.
double kernel_form(const std::vector<std::vector<double>>& alpha,
                   const std::vector<double>& xi, const std::vector<double>& weights);

// Everything the spectral experiments need for one level, assembled once:
// the three Laplacians (coarse in both modes), phi, and the weight diagonal.
struct OperatorBundle {
  WarpedGraph graph;
  double r = 0.0;
  std::vector<double> phi;
  std::vector<double> weights;
  SparseSymmetricOperator local;
  SparseSymmetricOperator group;
  SparseSymmetricOperator coarse;         // composed route (reference)
  SparseSymmetricOperator coarse_direct;  // definition route (fidelity check)
  double decomposition_residual = 0.0;    // max-norm gap between the two routes
  std::vector<std::string> warnings;

  int dim() const { return graph.size(); }
};

OperatorBundle make_operator_bundle(const WarpedGraph& graph, double r);

}  // namespace warpedlab
