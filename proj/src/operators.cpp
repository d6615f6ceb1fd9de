#include "warpedlab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

namespace warpedlab {

namespace {

// Off-diagonal coupling accumulator feeding the shared symmetrize-and-
// finalize step. Couplings are signed (Laplacian off-diagonals are negative).
class FormBuilder {
 public:
  explicit FormBuilder(int dim) : rows_(dim) {}

  void add(int i, int j, double value) {
    if (i == j) return;  // diagonals are rebuilt by finalize
    rows_[i].push_back({j, value});
  }

  SparseSymmetricOperator finalize() {
    const int n = static_cast<int>(rows_.size());
    for (auto& row : rows_) {
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      // merge duplicate columns
      std::size_t out = 0;
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (out > 0 && row[out - 1].first == row[k].first) {
          row[out - 1].second += row[k].second;
        } else {
          row[out++] = row[k];
        }
      }
      row.resize(out);
    }

    // Average each unordered pair with its transpose partner.
    double defect = 0.0;
    std::vector<std::vector<std::pair<int, double>>> sym(n);
    auto lookup = [&](int i, int j) -> const double* {
      const auto& row = rows_[i];
      auto it = std::lower_bound(row.begin(), row.end(), j,
                                 [](const auto& e, int c) { return e.first < c; });
      if (it == row.end() || it->first != j) return nullptr;
      return &it->second;
    };
    for (int i = 0; i < n; ++i) {
      for (const auto& [j, v] : rows_[i]) {
        if (j > i) {
          const double* partner = lookup(j, i);
          const double pv = partner ? *partner : 0.0;
          defect = std::max(defect, std::abs(v - pv));
          const double avg = 0.5 * (v + pv);
          sym[i].push_back({j, avg});
          sym[j].push_back({i, avg});
        } else if (j < i) {
          if (lookup(j, i) == nullptr) {
            defect = std::max(defect, std::abs(v));
            const double avg = 0.5 * v;
            sym[j].push_back({i, avg});
            sym[i].push_back({j, avg});
          }
        }
      }
    }

    SparseSymmetricOperator op;
    op.dim = n;
    op.presym_defect = defect;
    op.row_start.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) {
      auto& row = sym[i];
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      op.row_start[i + 1] = op.row_start[i] + static_cast<int>(row.size()) + 1;
    }
    op.col.reserve(op.row_start[n]);
    op.val.reserve(op.row_start[n]);
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (const auto& [j, v] : sym[i]) sum += v;
      bool placed = false;
      for (const auto& [j, v] : sym[i]) {
        if (!placed && j > i) {
          op.col.push_back(i);
          op.val.push_back(-sum);
          placed = true;
        }
        op.col.push_back(j);
        op.val.push_back(v);
      }
      if (!placed) {
        op.col.push_back(i);
        op.val.push_back(-sum);
      }
    }
    op.symmetry_checked = true;
    return op;
  }

 private:
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

void check_admissible(const WarpedGraph& graph, double r, const char* what) {
  if (!(r > 0.0)) throw std::invalid_argument(std::string(what) + ": r must be positive");
  if (r > graph.admissible_r) {
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "%s: radius r=%.6g exceeds the freeness bound t*free_radius=%.6g; "
                  "generator-image balls are no longer pairwise disjoint",
                  what, r, graph.admissible_r);
    throw std::domain_error(buf);
  }
}

}  // namespace

double SparseSymmetricOperator::entry(int i, int j) const {
  const int b = row_start[i];
  const int e = row_start[i + 1];
  auto first = col.begin() + b;
  auto last = col.begin() + e;
  auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return val[static_cast<std::size_t>(it - col.begin())];
}

std::vector<double> SparseSymmetricOperator::matvec(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim) {
    throw std::invalid_argument("matvec: vector length does not match operator dimension");
  }
  std::vector<double> y(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
  return y;
}

double SparseSymmetricOperator::quadratic_form(const std::vector<double>& x) const {
  const std::vector<double> y = matvec(x);
  double acc = 0.0;
  for (int i = 0; i < dim; ++i) acc += x[i] * y[i];
  return acc;
}

double SparseSymmetricOperator::max_abs() const {
  double m = 0.0;
  for (double v : val) m = std::max(m, std::abs(v));
  return m;
}

double SparseSymmetricOperator::inf_norm() const {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) acc += std::abs(val[k]);
    m = std::max(m, acc);
  }
  return m;
}

std::vector<double> SparseSymmetricOperator::row_sums() const {
  std::vector<double> sums(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    double off = 0.0;
    double diag = 0.0;
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      if (col[k] == i) {
        diag = val[k];
      } else {
        off += val[k];
      }
    }
    sums[i] = off + diag;
  }
  return sums;
}

double SparseSymmetricOperator::max_row_sum_defect() const {
  double m = 0.0;
  for (double s : row_sums()) m = std::max(m, std::abs(s));
  return m;
}

double SparseSymmetricOperator::symmetry_defect() const {
  double m = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      m = std::max(m, std::abs(val[k] - entry(col[k], i)));
    }
  }
  return m;
}

std::vector<double> SparseSymmetricOperator::to_dense() const {
  std::vector<double> d(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    for (int k = row_start[i]; k < row_start[i + 1]; ++k) {
      d[static_cast<std::size_t>(i) * dim + col[k]] = val[k];
    }
  }
  return d;
}

double max_abs_diff(const SparseSymmetricOperator& a, const SparseSymmetricOperator& b) {
  if (a.dim != b.dim) throw std::invalid_argument("max_abs_diff: dimension mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim; ++i) {
    for (int k = a.row_start[i]; k < a.row_start[i + 1]; ++k) {
      m = std::max(m, std::abs(a.val[k] - b.entry(i, a.col[k])));
    }
    for (int k = b.row_start[i]; k < b.row_start[i + 1]; ++k) {
      m = std::max(m, std::abs(b.val[k] - a.entry(i, b.col[k])));
    }
  }
  return m;
}

std::string operator_to_coordinate_text(const SparseSymmetricOperator& op) {
  std::string out;
  char line[96];
  for (int i = 0; i < op.dim; ++i) {
    for (int k = op.row_start[i]; k < op.row_start[i + 1]; ++k) {
      std::snprintf(line, sizeof(line), "%d %d %.17g\n", i, op.col[k], op.val[k]);
      out += line;
    }
  }
  return out;
}

std::vector<double> quadrature_phi(const EpsNet& net, const NeighborIndex& index, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("quadrature_phi: r must be positive");
  const int n = net.size();
  const double rho = r / net.t;
  std::vector<double> phi(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j : index.radius_query(net.points[i], rho)) acc += net.weights[j];
    phi[i] = acc;
  }
  return phi;
}

std::vector<double> quadrature_phi(const EpsNet& net, double r) {
  return quadrature_phi(net, make_net_index(net), r);
}

SparseSymmetricOperator assemble_local(const EpsNet& net, const NeighborIndex& index,
                                       double r) {
  if (!(r > 0.0)) throw std::invalid_argument("assemble_local: r must be positive");
  const int n = net.size();
  const double rho = r / net.t;
  FormBuilder builder(n);
  std::size_t couplings = 0;
  for (int i = 0; i < n; ++i) {
    const double wi = net.weights[i];
    for (int j : index.radius_query(net.points[i], rho)) {
      if (j == i) continue;
      builder.add(i, j, -wi * net.weights[j]);
      ++couplings;
    }
  }
  SparseSymmetricOperator op = builder.finalize();
  if (couplings == 0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "radius r=%.6g is below the net separation: every integration ball is a "
                  "singleton, operator is zero",
                  r);
    op.warnings.push_back(buf);
  }
  return op;
}

SparseSymmetricOperator assemble_local(const EpsNet& net, double r) {
  return assemble_local(net, make_net_index(net), r);
}

SparseSymmetricOperator assemble_group(const WarpedGraph& graph) {
  const int n = graph.size();
  FormBuilder builder(n);
  for (int s = 0; s < graph.generator_count; ++s) {
    if (graph.generator_identity[s]) continue;  // zero summand
    for (int i = 0; i < n; ++i) {
      const int k = graph.snap.to[s][i];
      builder.add(i, k, -graph.net.weights[i]);
    }
  }
  return builder.finalize();
}

CoarseMode parse_coarse_mode(const std::string& text) {
  if (text == "direct") return CoarseMode::Direct;
  if (text == "composed") return CoarseMode::Composed;
  throw std::invalid_argument("unknown coarse mode '" + text + "' (expected direct | composed)");
}

std::string coarse_mode_name(CoarseMode mode) {
  return mode == CoarseMode::Direct ? "direct" : "composed";
}

SparseSymmetricOperator assemble_coarse(const WarpedGraph& graph, const NeighborIndex& index,
                                        double r, CoarseMode mode) {
  check_admissible(graph, r, "assemble_coarse");
  const EpsNet& net = graph.net;
  const int n = net.size();
  FormBuilder builder(n);

  if (mode == CoarseMode::Direct) {
    for (int i = 0; i < n; ++i) {
      const double wi = net.weights[i];
      for (const ControlledNeighbor& nb : controlled_neighbors(graph, index, i, r)) {
        if (nb.node == i) continue;
        builder.add(i, nb.node, -wi * net.weights[nb.node]);
      }
    }
    return builder.finalize();
  }

  // Composed route: rows of the ball-averaging factor phi - L are read back
  // out of the assembled local operator, then routed through the snap map.
  // beta(k, j) = w_j for every j in the ball of k (the j = k case included,
  // reconstructed from phi and the local diagonal), so each generator adds
  // the couplings w_i * beta(k, j) with k the snapped image of i.
  const SparseSymmetricOperator local = assemble_local(net, index, r);
  const std::vector<double> phi = quadrature_phi(net, index, r);
  for (int s = 0; s < graph.generator_count; ++s) {
    for (int i = 0; i < n; ++i) {
      const int k = graph.snap.to[s][i];
      const double wi = net.weights[i];
      const double wk = net.weights[k];
      for (int idx = local.row_start[k]; idx < local.row_start[k + 1]; ++idx) {
        const int j = local.col[idx];
        const double beta = j == k ? phi[k] - local.val[idx] / wk : -local.val[idx] / wk;
        builder.add(i, j, -wi * beta);
      }
    }
  }
  return builder.finalize();
}

SparseSymmetricOperator assemble_coarse(const WarpedGraph& graph, double r, CoarseMode mode) {
  return assemble_coarse(graph, make_net_index(graph.net), r, mode);
}

double kernel_form(const std::vector<std::vector<double>>& alpha,
                   const std::vector<double>& xi, const std::vector<double>& weights) {
  const std::size_t n = alpha.size();
  if (xi.size() != n || weights.size() != n) {
    throw std::invalid_argument("kernel_form: size mismatch between kernel and vectors");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i].size() != n) throw std::domain_error("kernel_form: kernel must be square");
    for (std::size_t j = 0; j < n; ++j) {
      if (alpha[i][j] < 0.0) throw std::domain_error("kernel_form: kernel entries must be nonnegative");
      if (std::abs(alpha[i][j] - alpha[j][i]) > 1e-12) {
        throw std::domain_error("kernel_form: kernel must be symmetric");
      }
    }
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = xi[i] - xi[j];
      acc += alpha[i][j] * d * d * weights[i] * weights[j];
    }
  }
  return 0.5 * acc;
}

OperatorBundle make_operator_bundle(const WarpedGraph& graph, double r) {
  check_admissible(graph, r, "make_operator_bundle");
  OperatorBundle bundle;
  bundle.graph = graph;
  bundle.r = r;
  bundle.weights = graph.net.weights;
  NeighborIndex index = make_net_index(graph.net);
  bundle.phi = quadrature_phi(graph.net, index, r);
  bundle.local = assemble_local(graph.net, index, r);
  bundle.group = assemble_group(graph);
  bundle.coarse = assemble_coarse(graph, index, r, CoarseMode::Composed);
  bundle.coarse_direct = assemble_coarse(graph, index, r, CoarseMode::Direct);
  bundle.decomposition_residual = max_abs_diff(bundle.coarse, bundle.coarse_direct);
  for (const auto& w : bundle.local.warnings) bundle.warnings.push_back("local: " + w);
  if (graph.snap_collision_count > 0) {
    bundle.warnings.push_back("group: " + std::to_string(graph.snap_collision_count) +
                              " points have coinciding generator snap targets");
  }
  if (graph.snap_mode == SnapMode::ExactOffnet) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "coarse: exact-offnet membership makes the two assembly routes differ by "
                  "up to the snap defect (%.3g)",
                  graph.max_snap_defect);
    bundle.warnings.push_back(buf);
  }
  return bundle;
}

}  // namespace warpedlab
