#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "warpedlab/spaces.hpp"

namespace warpedlab {

// Discretized level set: an epsilon-separated net in the scaled metric t*d
// with quadrature weights summing to t^m * total mass.
struct EpsNet {
  ModelSpace space = ModelSpace::circle();
  double t = 1.0;
  double epsilon = 1.0;          // separation threshold in the scaled metric
  std::uint64_t seed = 0;
  std::string kind = "greedy";   // "greedy" | "arithmetic" | "full"
  std::vector<Point> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
  double scaled_distance(int i, int j) const {
    return t * space.distance(points[i], points[j]);
  }
  double weight_sum() const;
  double mass() const { return weight_sum(); }  // mu_t(M) as realized
};

// Spatial index over a fixed point list: radius queries and nearest-point
// queries in the unscaled metric. Grid-bucketed per space so both are local.
class NeighborIndex {
 public:
  NeighborIndex(const ModelSpace& space, const std::vector<Point>& points, double cell);
  ~NeighborIndex();
  NeighborIndex(NeighborIndex&&) noexcept;
  NeighborIndex& operator=(NeighborIndex&&) noexcept;

  // Indices i with d(points[i], q) < rho, ascending. Self matches are
  // included; the caller filters them if unwanted.
  std::vector<int> radius_query(const Point& q, double rho) const;
  // Nearest point index (ties broken by lowest index); -1 if empty.
  int nearest(const Point& q) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Greedy seeded-order insertion over a Haar pool: a pool point joins the net
// iff every accepted point is at scaled distance >= epsilon. The result is a
// maximal epsilon-separated subset of the pool, so separation >= epsilon holds
// exactly and every pool point lies within epsilon of the net. Weights are
// Monte Carlo Voronoi masses from max(1e5, 100*|net|) Haar probes (cells that
// draw no probe get one synthetic hit so every weight stays positive),
// normalized to sum to t^m exactly. CantorLevel ignores epsilon and returns
// the full point set with exact uniform weights.
EpsNet build_eps_net(const ModelSpace& space, double t, double epsilon,
                     std::uint64_t seed, std::size_t pool_override = 0,
                     std::size_t probes_override = 0);

// N equally spaced circle points {j/N} with exact weights t/N. Satisfies all
// EpsNet invariants with epsilon := t/N, and makes lattice-snapped rotations
// exact permutations; the machine-precision identity tests run on these.
EpsNet arithmetic_circle_net(double t, int n);

// Index over a net's points (unscaled metric), sized for queries around the
// net's own resolution.
NeighborIndex make_net_index(const EpsNet& net);

struct NetDiagnostics {
  double min_separation_scaled = 0.0;   // exhaustive for n <= 4096, else sampled
  double max_covering_scaled = 0.0;     // Monte Carlo over fresh Haar probes
  double weight_sum = 0.0;
  double weight_min = 0.0;
  double weight_max = 0.0;
  bool separation_exhaustive = true;
};
NetDiagnostics net_diagnostics(const EpsNet& net, std::size_t covering_probes = 10000,
                               std::uint64_t probe_seed = 4242);

}  // namespace warpedlab
