#include "warpedlab/net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace warpedlab {

namespace {

// Ambient Euclidean search radius that covers a metric ball of radius rho.
// Circle/torus coordinates are the metric; SO3 converts rotation angle to
// chordal distance between (sign-matched) unit quaternions.
double ambient_radius(const ModelSpace& space, double rho) {
  if (space.kind() == SpaceKind::SO3) {
    const double a = std::min(rho, 2.0 * 3.14159265358979323846) / 4.0;
    return 2.0 * std::sin(std::min(a, 1.5707963267948966));
  }
  return rho;
}

struct GridBuckets {
  const ModelSpace space;
  const bool toroidal;  // Circle behaves as a 1-D torus for bucketing
  double cell;
  int cells_per_axis;   // toroidal spaces only
  std::vector<Point> pts;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets;
  std::unordered_map<std::uint64_t, int> cantor_map;

  GridBuckets(const ModelSpace& s, double cell_size)
      : space(s),
        toroidal(s.kind() == SpaceKind::Circle || s.kind() == SpaceKind::FlatTorus),
        cell(std::max(cell_size, 1e-9)) {
    // Oversized cells keep queries at the sizing radius within reach 1,
    // which matters most on the 4-D rotation grid.
    if (space.kind() == SpaceKind::SO3) cell *= 1.3;
    cells_per_axis = std::max(1, static_cast<int>(std::floor(1.0 / cell)));
    if (toroidal) cell = 1.0 / cells_per_axis;
  }

  std::uint64_t torus_key(const Point& p) const {
    std::uint64_t key = 0;
    for (int i = 0; i < space.dim(); ++i) {
      int idx = static_cast<int>(std::floor(p.c[i] * cells_per_axis));
      idx = std::clamp(idx, 0, cells_per_axis - 1);
      key = key * static_cast<std::uint64_t>(cells_per_axis) + static_cast<std::uint64_t>(idx);
    }
    return key;
  }

  std::uint64_t so3_key(const Point& p) const {
    std::uint64_t key = 0;
    for (int i = 0; i < 4; ++i) {
      const int idx = static_cast<int>(std::floor((p.c[i] + 1.0) / cell));
      key = (key << 16) | static_cast<std::uint64_t>(idx & 0xffff);
    }
    return key;
  }

  void insert(const Point& p) {
    const int idx = static_cast<int>(pts.size());
    pts.push_back(p);
    if (toroidal) {
      buckets[torus_key(p)].push_back(idx);
    } else if (space.kind() == SpaceKind::SO3) {
      buckets[so3_key(p)].push_back(idx);
    } else {
      cantor_map.emplace(p.bits, idx);
    }
  }

  // True iff some stored point is at metric distance < rho from q. Probes
  // q's own bucket first: in saturated greedy passes the blocker is almost
  // always local, so the full box scan is usually skipped.
  bool any_within(const Point& q, double rho) {
    if (toroidal || space.kind() == SpaceKind::SO3) {
      const std::uint64_t home = toroidal ? torus_key(q) : so3_key(q);
      auto it = buckets.find(home);
      if (it != buckets.end()) {
        for (int i : it->second) {
          if (space.distance(q, pts[i]) < rho) return true;
        }
      }
    }
    bool found = false;
    visit_candidates(q, rho, [&](int i) {
      if (space.distance(q, pts[i]) < rho) {
        found = true;
        return false;
      }
      return true;
    });
    return found;
  }

  std::vector<int> collect_within(const Point& q, double rho) {
    std::vector<int> out;
    visit_candidates(q, rho, [&](int i) {
      if (space.distance(q, pts[i]) < rho) out.push_back(i);
      return true;
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  int nearest(const Point& q) {
    if (pts.empty()) return -1;
    if (space.kind() == SpaceKind::CantorLevel) {
      auto it = cantor_map.find(q.bits);
      if (it != cantor_map.end()) return it->second;
      int best = -1;
      double bd = 1e300;
      for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        const double d = space.distance(q, pts[i]);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      return best;
    }
    // Expanding search: a reach-k box scan covers every point within k*cell
    // in ambient coordinates, so a candidate found at ambient distance
    // <= k*cell is provably the global nearest.
    for (double coverage = cell;; coverage *= 2.0) {
      if (coverage > 4.0) {  // full scan fallback (tiny or degenerate sets)
        int best = 0;
        double bd = space.distance(q, pts[0]);
        for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
          const double d = space.distance(q, pts[i]);
          if (d < bd) {
            bd = d;
            best = i;
          }
        }
        return best;
      }
      std::vector<int> cand = collect_within(q, metric_from_ambient(coverage));
      if (cand.empty()) continue;
      int best = cand.front();
      double bd = space.distance(q, pts[best]);
      for (int i : cand) {
        const double d = space.distance(q, pts[i]);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      if (ambient_radius(space, bd) <= coverage) return best;
    }
  }

  double metric_from_ambient(double a) const {
    if (space.kind() == SpaceKind::SO3) {
      const double s = std::min(a / 2.0, 1.0);
      return 4.0 * std::asin(s);
    }
    return a;
  }

  template <typename F>
  void visit_candidates(const Point& q, double rho, F&& f) {
    switch (space.kind()) {
      case SpaceKind::Circle:
      case SpaceKind::FlatTorus: {
        const int m = space.dim();
        const int q_axis = cells_per_axis;
        const int reach = std::max(1, static_cast<int>(std::ceil(rho * q_axis + 1e-9)));
        if (2 * reach + 1 >= q_axis) {
          for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            if (!f(i)) return;
          }
          return;
        }
        int base[4] = {0, 0, 0, 0};
        for (int i = 0; i < m; ++i) {
          base[i] = std::clamp(static_cast<int>(std::floor(q.c[i] * q_axis)), 0, q_axis - 1);
        }
        int off[4] = {0, 0, 0, 0};
        // Iterate the (2*reach+1)^m offset box in row-major order.
        for (int i = 0; i < m; ++i) off[i] = -reach;
        for (;;) {
          std::uint64_t key = 0;
          for (int i = 0; i < m; ++i) {
            const int c = ((base[i] + off[i]) % q_axis + q_axis) % q_axis;
            key = key * static_cast<std::uint64_t>(q_axis) + static_cast<std::uint64_t>(c);
          }
          auto it = buckets.find(key);
          if (it != buckets.end()) {
            for (int i : it->second) {
              if (!f(i)) return;
            }
          }
          int axis = m - 1;
          while (axis >= 0) {
            if (++off[axis] <= reach) break;
            off[axis] = -reach;
            --axis;
          }
          if (axis < 0) break;
        }
        return;
      }
      case SpaceKind::SO3: {
        const double arad = ambient_radius(space, rho);
        // Round the ratio down through fp noise: metric<->ambient roundtrips
        // land exactly on integer ratios for the sizing radius.
        const int reach = std::max(1, static_cast<int>(std::ceil(arad / cell * (1.0 - 1e-12))));
        const int total_cells = static_cast<int>(std::ceil(2.0 / cell)) + 2;
        if (2 * reach + 1 >= total_cells) {
          for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            if (!f(i)) return;
          }
          return;
        }
        Point qc = q;
        canonicalize_quaternion(qc);
        // Stored representatives near -q exist only if the canonical-sign
        // boundary (a tie between the two largest |components|) is within
        // reach; otherwise the single-sign scan is exhaustive.
        double m1 = 0.0, m2 = 0.0;
        for (int i = 0; i < 4; ++i) {
          const double a = std::fabs(qc.c[i]);
          if (a > m1) {
            m2 = m1;
            m1 = a;
          } else if (a > m2) {
            m2 = a;
          }
        }
        const bool both_signs = (m1 - m2) <= 2.0 * (arad + cell);
        // A box of side `cell` holding a unit vector has center norm within
        // one half-diagonal (= cell in 4-D) of 1.
        const double shell = cell * 1.0001;
        Point reps[2] = {qc, qc};
        for (int i = 0; i < 4; ++i) reps[1].c[i] = -qc.c[i];
        for (int sign = 0; sign < (both_signs ? 2 : 1); ++sign) {
          const Point& rep = reps[sign];
          int base[4];
          for (int i = 0; i < 4; ++i) {
            base[i] = static_cast<int>(std::floor((rep.c[i] + 1.0) / cell));
          }
          int off[4] = {-reach, -reach, -reach, -reach};
          for (;;) {
            // Skip boxes that cannot meet the unit sphere.
            double norm2 = 0.0;
            for (int i = 0; i < 4; ++i) {
              const double c = (static_cast<double>(base[i] + off[i]) + 0.5) * cell - 1.0;
              norm2 += c * c;
            }
            const double lo = std::max(0.0, 1.0 - shell), hi = 1.0 + shell;
            if (norm2 >= lo * lo && norm2 <= hi * hi) {
              std::uint64_t key = 0;
              for (int i = 0; i < 4; ++i) {
                key = (key << 16) |
                      static_cast<std::uint64_t>((base[i] + off[i]) & 0xffff);
              }
              auto it = buckets.find(key);
              if (it != buckets.end()) {
                for (int i : it->second) {
                  if (!f(i)) return;
                }
              }
            }
            int axis = 3;
            while (axis >= 0) {
              if (++off[axis] <= reach) break;
              off[axis] = -reach;
              --axis;
            }
            if (axis < 0) break;
          }
        }
        return;
      }
      case SpaceKind::CantorLevel: {
        // Ultrametric ball: the first `a` coordinates agree. Enumerate the
        // completions when the ball is coarse, else a single map lookup.
        int a = 0;
        while (a <= space.depth() && std::ldexp(1.0, -a) >= rho) ++a;
        if (a >= space.depth()) {
          auto it = cantor_map.find(q.bits);
          if (it != cantor_map.end()) f(it->second);
          return;
        }
        const std::uint64_t low = q.bits & ((std::uint64_t{1} << a) - 1);
        const std::uint64_t combos = std::uint64_t{1} << (space.depth() - a);
        for (std::uint64_t h = 0; h < combos; ++h) {
          auto it = cantor_map.find(low | (h << a));
          if (it != cantor_map.end()) {
            if (!f(it->second)) return;
          }
        }
        return;
      }
    }
  }
};

// RSA-style saturation density per dimension, used only to size the pool.
double saturation_coefficient(int m) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 0.75;
    case 2: return 0.56;
    case 3: return 0.40;
    default: return 0.3;
  }
}

}  // namespace

double EpsNet::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

struct NeighborIndex::Impl {
  GridBuckets grid;
  Impl(const ModelSpace& s, double cell) : grid(s, cell) {}
};

NeighborIndex::NeighborIndex(const ModelSpace& space, const std::vector<Point>& points,
                             double cell)
    : impl_(std::make_unique<Impl>(space, std::max(ambient_radius(space, cell), 1e-9))) {
  for (const Point& p : points) impl_->grid.insert(p);
}

NeighborIndex::~NeighborIndex() = default;
NeighborIndex::NeighborIndex(NeighborIndex&&) noexcept = default;
NeighborIndex& NeighborIndex::operator=(NeighborIndex&&) noexcept = default;

std::vector<int> NeighborIndex::radius_query(const Point& q, double rho) const {
  return impl_->grid.collect_within(q, rho);
}

int NeighborIndex::nearest(const Point& q) const { return impl_->grid.nearest(q); }

EpsNet build_eps_net(const ModelSpace& space, double t, double epsilon,
                     std::uint64_t seed, std::size_t pool_override,
                     std::size_t probes_override) {
  if (t <= 0.0 || epsilon <= 0.0) {
    throw std::invalid_argument("build_eps_net: t and epsilon must be positive");
  }
  EpsNet net;
  net.space = space;
  net.t = t;
  net.epsilon = epsilon;
  net.seed = seed;

  const double tm = std::pow(t, space.dim());

  if (space.is_finite()) {
    net.kind = "full";
    const std::uint64_t n = space.point_count();
    net.points.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) net.points.push_back(space.enumerate_point(i));
    net.weights.assign(n, tm / static_cast<double>(n));
    return net;
  }

  net.kind = "greedy";
  const double rho = epsilon / t;  // separation radius in the unscaled metric

  // Pool sizing: saturation density over the half-radius ball volume.
  double half_ball = space.ball_volume(std::min(rho / 2.0, 0.49));
  if (half_ball <= 0.0) half_ball = 1.0;
  double expected = saturation_coefficient(space.dim()) / half_ball;
  expected = std::clamp(expected, 8.0, 2.0e6);
  std::size_t pool_n = pool_override
                           ? pool_override
                           : std::max<std::size_t>(10000, static_cast<std::size_t>(200.0 * expected));

  Rng rng(seed);
  GridBuckets accepted(space, ambient_radius(space, rho));
  for (std::size_t i = 0; i < pool_n; ++i) {
    const Point p = space.haar_sample(rng);
    if (!accepted.any_within(p, rho)) accepted.insert(p);
  }
  net.points = accepted.pts;

  // Monte Carlo Voronoi weights; fresh probe stream from the same seed chain.
  const std::size_t n = net.points.size();
  std::size_t probes = probes_override ? probes_override
                                       : std::max<std::size_t>(100000, 100 * n);
  std::vector<std::uint64_t> counts(n, 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < probes; ++i) {
    const Point p = space.haar_sample(rng);
    const int j = accepted.nearest(p);
    ++counts[static_cast<std::size_t>(j)];
    ++total;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) {  // keep every quadrature weight positive
      ++counts[i];
      ++total;
    }
  }
  net.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    net.weights[i] = tm * static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return net;
}

EpsNet arithmetic_circle_net(double t, int n) {
  if (t <= 0.0 || n < 2) throw std::invalid_argument("arithmetic_circle_net: need t > 0, n >= 2");
  EpsNet net;
  net.space = ModelSpace::circle();
  net.t = t;
  net.epsilon = t / static_cast<double>(n);
  net.seed = 0;
  net.kind = "arithmetic";
  net.points.resize(n);
  for (int j = 0; j < n; ++j) net.points[j].c[0] = static_cast<double>(j) / n;
  net.weights.assign(n, t / static_cast<double>(n));
  return net;
}

NeighborIndex make_net_index(const EpsNet& net) {
  return NeighborIndex(net.space, net.points, net.epsilon / net.t);
}

NetDiagnostics net_diagnostics(const EpsNet& net, std::size_t covering_probes,
                               std::uint64_t probe_seed) {
  NetDiagnostics d;
  const int n = net.size();
  d.weight_sum = net.weight_sum();
  d.weight_min = 1e300;
  d.weight_max = 0.0;
  for (double w : net.weights) {
    d.weight_min = std::min(d.weight_min, w);
    d.weight_max = std::max(d.weight_max, w);
  }

  Rng rng(probe_seed);
  double minsep = 1e300;
  if (n <= 4096) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        minsep = std::min(minsep, net.scaled_distance(i, j));
      }
    }
    d.separation_exhaustive = true;
  } else {
    // Local queries at 2.5x the separation radius find the global minimum
    // whenever any pair is that close, which holds for every saturated net.
    NeighborIndex index = make_net_index(net);
    for (int i = 0; i < n; ++i) {
      for (int j : index.radius_query(net.points[i], 2.5 * net.epsilon / net.t)) {
        if (j != i) minsep = std::min(minsep, net.scaled_distance(i, j));
      }
    }
    d.separation_exhaustive = true;
    if (minsep > 1e299) {  // sparse fallback: sampled pairs only
      d.separation_exhaustive = false;
      for (int k = 0; k < 4096; ++k) {
        const int i = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        const int j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        if (i != j) minsep = std::min(minsep, net.scaled_distance(i, j));
      }
    }
  }
  d.min_separation_scaled = (n > 1) ? minsep : 0.0;

  if (!net.space.is_finite()) {
    NeighborIndex index = make_net_index(net);
    double maxcov = 0.0;
    for (std::size_t k = 0; k < covering_probes; ++k) {
      const Point p = net.space.haar_sample(rng);
      const int j = index.nearest(p);
      maxcov = std::max(maxcov, net.t * net.space.distance(p, net.points[j]));
    }
    d.max_covering_scaled = maxcov;
  }
  return d;
}

}  // namespace warpedlab
