#include "warpedlab/warped.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <stdexcept>

namespace warpedlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_space(const ModelSpace& a, const ModelSpace& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == SpaceKind::FlatTorus && a.dim() != b.dim()) return false;
  if (a.kind() == SpaceKind::CantorLevel && a.depth() != b.depth()) return false;
  return true;
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             int source) {
  const int n = static_cast<int>(adj.size());
  if (source < 0 || source >= n) throw std::out_of_range("shortest path: source node out of range");
  std::vector<double> dist(n, kInf);
  dist[source] = 0.0;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, w] : adj[u]) {
      const double nd = d + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace

SnapMode parse_snap_mode(const std::string& text) {
  if (text == "snap") return SnapMode::Snap;
  if (text == "exact-offnet") return SnapMode::ExactOffnet;
  throw std::invalid_argument("unknown snap mode '" + text + "' (expected snap | exact-offnet)");
}

std::string snap_mode_name(SnapMode mode) {
  return mode == SnapMode::Snap ? "snap" : "exact-offnet";
}

WarpedGraph build_warped_graph(const EpsNet& net, const IsometricAction& action,
                               double cutoff, SnapMode mode,
                               std::size_t free_radius_samples) {
  if (!same_space(net.space, action.space())) {
    throw std::invalid_argument("warped graph: net and action live on different spaces (" +
                                net.space.name() + " vs " + action.space().name() + ")");
  }
  WarpedGraph g;
  g.net = net;
  g.action_name = action.name();
  g.generator_count = action.generator_count();
  for (int s = 0; s < g.generator_count; ++s) {
    g.generator_labels.push_back(action.generator_label(s));
    g.generator_inverse.push_back(action.inverse_index(s));
    g.generator_identity.push_back(action.is_identity(s) ? 1 : 0);
  }
  g.cutoff = cutoff > 0.0 ? cutoff : 3.0 * net.epsilon;
  g.snap_mode = mode;
  g.free_radius = max_free_radius(action, free_radius_samples);
  g.admissible_r = net.t * g.free_radius;

  const int n = net.size();
  const int ns = g.generator_count;
  NeighborIndex index = make_net_index(net);

  g.images.assign(ns, {});
  g.snap.to.assign(ns, std::vector<int>(n, 0));
  g.snap.defect_scaled.assign(ns, std::vector<double>(n, 0.0));
  for (int s = 0; s < ns; ++s) {
    g.images[s].resize(n);
    for (int i = 0; i < n; ++i) {
      const Point image = action.apply(s, net.points[i]);
      g.images[s][i] = image;
      const int k = index.nearest(image);
      g.snap.to[s][i] = k;
      const double defect = net.t * net.space.distance(image, net.points[k]);
      g.snap.defect_scaled[s][i] = defect;
      if (!action.is_identity(s)) g.max_snap_defect = std::max(g.max_snap_defect, defect);
    }
  }

  std::vector<int> targets(ns);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < ns; ++s) targets[s] = g.snap.to[s][i];
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
      ++g.snap_collision_count;
    }
  }

  // Metric edges: t*d <= cutoff inclusive, with relative slack so exact-ratio
  // lattice distances are kept despite the strict-< radius query.
  const double inclusive = g.cutoff * (1.0 + 1e-9);
  const double rho = (g.cutoff * (1.0 + 2e-9)) / net.t;
  for (int i = 0; i < n; ++i) {
    for (int j : index.radius_query(net.points[i], rho)) {
      if (j <= i) continue;
      const double w = net.scaled_distance(i, j);
      if (w <= inclusive) g.metric_edges.push_back({i, j, w});
    }
  }

  for (int s = 0; s < ns; ++s) {
    for (int i = 0; i < n; ++i) {
      g.generator_edges.push_back({i, g.snap.to[s][i], s});
    }
  }

  g.adjacency.assign(n, {});
  for (const auto& e : g.metric_edges) {
    g.adjacency[e.i].push_back({e.j, e.weight});
    g.adjacency[e.j].push_back({e.i, e.weight});
  }
  for (const auto& e : g.generator_edges) {
    if (e.i == e.j) continue;
    g.adjacency[e.i].push_back({e.j, 1.0});
    g.adjacency[e.j].push_back({e.i, 1.0});
  }

  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (const auto& [v, w] : g.adjacency[u]) {
      (void)w;
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  g.connected = (reached == n);
  return g;
}

std::vector<double> warped_distances_from(const WarpedGraph& graph, int source) {
  return dijkstra(graph.adjacency, source);
}

double warped_distance(const WarpedGraph& graph, int i, int j) {
  if (j < 0 || j >= graph.size()) throw std::out_of_range("warped_distance: node out of range");
  return warped_distances_from(graph, i)[static_cast<std::size_t>(j)];
}

std::vector<std::vector<double>> warped_all_pairs(const WarpedGraph& graph) {
  const int n = graph.size();
  if (n > 4000) {
    throw std::invalid_argument("all-pairs distances are limited to 4000 nodes; got " +
                                std::to_string(n));
  }
  std::vector<std::vector<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = warped_distances_from(graph, i);
  return out;
}

std::vector<ControlledNeighbor> controlled_neighbors(const WarpedGraph& graph,
                                                     const NeighborIndex& index, int i,
                                                     double r) {
  if (i < 0 || i >= graph.size()) throw std::out_of_range("controlled_neighbors: node out of range");
  if (!(r > 0.0)) throw std::invalid_argument("controlled_neighbors: r must be positive");
  if (r > graph.admissible_r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "controlled radius r=%.6g exceeds the freeness bound t*free_radius=%.6g; "
                  "generator-image balls are no longer pairwise disjoint",
                  r, graph.admissible_r);
    throw std::domain_error(buf);
  }
  const double rho = r / graph.net.t;
  std::vector<ControlledNeighbor> out;
  for (int s = 0; s < graph.generator_count; ++s) {
    const Point& center = graph.snap_mode == SnapMode::Snap
                              ? graph.net.points[graph.snap.to[s][i]]
                              : graph.images[s][i];
    for (int j : index.radius_query(center, rho)) out.push_back({j, s});
  }
  return out;
}

std::vector<ControlledNeighbor> controlled_neighbors(const WarpedGraph& graph, int i,
                                                     double r) {
  NeighborIndex index = make_net_index(graph.net);
  return controlled_neighbors(graph, index, i, r);
}

SimpleGraph box_space_graph(int depth) {
  if (depth < 1) throw std::invalid_argument("box_space_graph: depth must be >= 1");
  SimpleGraph g;
  g.n = 1 << depth;
  if (g.n == 2) {
    g.edges.push_back({0, 1, 1.0});
  } else {
    for (int i = 0; i < g.n; ++i) {
      const int j = (i + 1) % g.n;
      g.edges.push_back({std::min(i, j), std::max(i, j), 1.0});
    }
  }
  g.adjacency.assign(g.n, {});
  for (const auto& e : g.edges) {
    g.adjacency[e.i].push_back({e.j, e.weight});
    g.adjacency[e.j].push_back({e.i, e.weight});
  }
  return g;
}

std::vector<double> graph_distances_from(const SimpleGraph& graph, int source) {
  return dijkstra(graph.adjacency, source);
}

std::vector<std::vector<double>> graph_all_pairs(const SimpleGraph& graph) {
  std::vector<std::vector<double>> out(graph.n);
  for (int i = 0; i < graph.n; ++i) out[i] = graph_distances_from(graph, i);
  return out;
}

DistortionResult distortion(const std::vector<std::vector<double>>& dA,
                            const std::vector<std::vector<double>>& dB) {
  const std::size_t n = dA.size();
  if (n == 0 || dB.size() != n) {
    throw std::invalid_argument("distortion: distance tables must be nonempty and equally sized");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dA[i].size() != n || dB[i].size() != n) {
      throw std::invalid_argument("distortion: distance tables must be square");
    }
  }
  DistortionResult best;
  double best_c = kInf;
  for (int step = 0; step <= 60; ++step) {
    const double L = (100 + 5 * step) / 100.0;
    double c = 0.0;
    for (std::size_t i = 0; i < n && c < kInf; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = dA[i][j];
        const double b = dB[i][j];
        const bool ia = std::isinf(a);
        const bool ib = std::isinf(b);
        if (ia && ib) continue;
        if (ia != ib) {
          c = kInf;
          break;
        }
        c = std::max(c, std::max(b - L * a, a / L - b));
      }
    }
    c = std::max(c, 0.0);
    if (c < best_c - 1e-15) {
      best_c = c;
      best = {L, c};
    }
  }
  return best;
}

std::string export_edge_list(const WarpedGraph& graph) {
  std::string out;
  char line[128];
  for (const auto& e : graph.metric_edges) {
    std::snprintf(line, sizeof(line), "%d %d %.17g metric\n", e.i, e.j, e.weight);
    out += line;
  }
  for (const auto& e : graph.generator_edges) {
    std::snprintf(line, sizeof(line), "%d %d 1 generator:%s\n", e.i, e.j,
                  graph.generator_labels[e.s].c_str());
    out += line;
  }
  return out;
}

}  // namespace warpedlab
