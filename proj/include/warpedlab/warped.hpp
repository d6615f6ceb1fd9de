#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "warpedlab/actions.hpp"
#include "warpedlab/net.hpp"
#include "warpedlab/spaces.hpp"

namespace warpedlab {

// How generator images are discretized onto the net.
//   Snap        images are replaced by their nearest net point, so the group
//               layer is a permutation-like index map and the operator
//               algebra closes exactly on the net (default).
//   ExactOffnet images keep their true coordinates; set membership is decided
//               by ball tests around the off-net image, which is metrically
//               faithful but costs O(epsilon) residuals in the identities.
enum class SnapMode { Snap, ExactOffnet };

SnapMode parse_snap_mode(const std::string& text);  // "snap" | "exact-offnet"
std::string snap_mode_name(SnapMode mode);

// Index map of the snapped action: to[s][i] is the net index nearest to the
// image of point i under generator s, defect_scaled[s][i] the scaled distance
// t*d between the true image and its snap target.
struct SnapMap {
  std::vector<std::vector<int>> to;
  std::vector<std::vector<double>> defect_scaled;
};

struct MetricEdge {
  int i = 0;
  int j = 0;          // i < j
  double weight = 0;  // t * d(p_i, p_j)
};

struct GeneratorEdge {
  int i = 0;
  int j = 0;  // snap target of s applied to i; weight is exactly 1
  int s = 0;  // generator index (identity included, giving self-loops)
};

// Discretized level set of the warped metric: the net joined by weighted
// metric edges (t*d up to the cutoff) and unit-weight generator edges.
struct WarpedGraph {
  EpsNet net;
  std::string action_name;
  int generator_count = 1;  // |S|, identity letter included
  std::vector<std::string> generator_labels;
  std::vector<int> generator_inverse;
  std::vector<char> generator_identity;

  double cutoff = 0.0;  // scaled metric-edge threshold (default 3*epsilon)
  SnapMode snap_mode = SnapMode::Snap;

  // Freeness budget of the action: free_radius is the unscaled bound from
  // max_free_radius, admissible_r = t * free_radius its scaled counterpart
  // (the largest r for which the generator-image balls B_{r/t}(s x) stay
  // pairwise disjoint; +infinity for the identity-only action).
  double free_radius = 0.0;
  double admissible_r = 0.0;

  SnapMap snap;
  double max_snap_defect = 0.0;  // over non-identity generators
  // Number of points whose generator images do not land on pairwise distinct
  // net points (recorded, never an error).
  int snap_collision_count = 0;

  // Exact images s * p_i (kept in both modes; ExactOffnet ball tests and the
  // snap-defect audit read from here).
  std::vector<std::vector<Point>> images;

  std::vector<MetricEdge> metric_edges;
  std::vector<GeneratorEdge> generator_edges;

  // Symmetric adjacency for shortest paths: metric edges with weight t*d and
  // generator edges with weight 1 in both directions; self-loops dropped.
  std::vector<std::vector<std::pair<int, double>>> adjacency;
  bool connected = false;

  int size() const { return net.size(); }
};

// Build the warped graph for a net and an action on the same space.
// cutoff <= 0 selects the default 3*epsilon. Disconnection is reported via
// the `connected` flag, not an error. Throws std::invalid_argument if the
// net and action live on different spaces, std::domain_error if the action
// fails the freeness probe.
WarpedGraph build_warped_graph(const EpsNet& net, const IsometricAction& action,
                               double cutoff = 0.0, SnapMode mode = SnapMode::Snap,
                               std::size_t free_radius_samples = 10000);

// Single-source shortest-path distances over the warped adjacency
// (nonnegative weights, binary-heap Dijkstra); +infinity across components.
std::vector<double> warped_distances_from(const WarpedGraph& graph, int source);

double warped_distance(const WarpedGraph& graph, int i, int j);

// Dense all-pairs table; guarded to |net| <= 4000.
std::vector<std::vector<double>> warped_all_pairs(const WarpedGraph& graph);

// One controlled neighbor: a net point inside the radius-r/t ball around the
// image of the base point under generator s.
struct ControlledNeighbor {
  int node = 0;
  int generator = 0;
};

// All net points y with t*d(center_s(i), y) < r, tagged by the generator
// producing them, ordered by generator then node. center_s(i) is the snapped
// image in Snap mode and the exact image in ExactOffnet mode. Requires
// 0 < r <= admissible_r: above that bound the generator balls overlap and the
// sections lose their defining disjointness, so a std::domain_error citing
// the freeness bound is thrown. The overload taking a NeighborIndex avoids
// rebuilding the index for repeated queries (the index must be built over
// net.points).
std::vector<ControlledNeighbor> controlled_neighbors(const WarpedGraph& graph,
                                                     const NeighborIndex& index,
                                                     int i, double r);
std::vector<ControlledNeighbor> controlled_neighbors(const WarpedGraph& graph, int i,
                                                     double r);

// Plain weighted undirected graph (comparison objects and small exact cases).
struct SimpleGraph {
  int n = 0;
  std::vector<MetricEdge> edges;
  std::vector<std::vector<std::pair<int, double>>> adjacency;
};

// Cayley graph of the integers mod 2^depth with generators +-1: a cycle on
// 2^depth nodes with unit weights (depth 1 collapses the double edge between
// its two nodes to a single edge). depth >= 1.
SimpleGraph box_space_graph(int depth);

std::vector<double> graph_distances_from(const SimpleGraph& graph, int source);
std::vector<std::vector<double>> graph_all_pairs(const SimpleGraph& graph);

// Best (L, C), L >= 1, C >= 0, with (1/L)*dA - C <= dB <= L*dA + C over all
// node pairs under the index-aligned correspondence. L is scanned over the
// grid 1.00, 1.05, ..., 4.00; the smallest C wins, ties resolved toward the
// smaller L. Matrices must be square, nonempty, and of equal size, else
// std::invalid_argument.
struct DistortionResult {
  double L = 1.0;
  double C = 0.0;
};
DistortionResult distortion(const std::vector<std::vector<double>>& dA,
                            const std::vector<std::vector<double>>& dB);

// Text edge list, one edge per line: "i j w metric" for metric edges followed
// by "i j 1 generator:<label>" for generator edges, in deterministic order.
std::string export_edge_list(const WarpedGraph& graph);

}  // namespace warpedlab
