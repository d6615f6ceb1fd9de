#include "warpedlab/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "warpedlab/rng.hpp"
#include "warpedlab/warped.hpp"

namespace warpedlab {

namespace {

void check_weights(const SparseSymmetricOperator& F, const std::vector<double>& weights) {
  if (static_cast<int>(weights.size()) != F.dim) {
    throw std::invalid_argument("bottom_spectrum: weight vector does not match dimension");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw std::invalid_argument("bottom_spectrum: weights must be positive");
  }
}

// y = D F D x with D = diag(scale)
std::vector<double> whitened_matvec(const SparseSymmetricOperator& F,
                                    const std::vector<double>& scale,
                                    const std::vector<double>& x) {
  const int n = F.dim;
  std::vector<double> tmp(n);
  for (int i = 0; i < n; ++i) tmp[i] = scale[i] * x[i];
  std::vector<double> y = F.matvec(tmp);
  for (int i = 0; i < n; ++i) y[i] *= scale[i];
  return y;
}

double pencil_residual(const SparseSymmetricOperator& F, const std::vector<double>& weights,
                       const std::vector<double>& xi, double lambda) {
  std::vector<double> y = F.matvec(xi);
  double norm2 = 0.0;
  double acc = 0.0;
  for (int i = 0; i < F.dim; ++i) {
    const double r = y[i] - lambda * weights[i] * xi[i];
    acc += r * r;
    norm2 += xi[i] * xi[i];
  }
  const double nrm = std::sqrt(norm2);
  return nrm > 0.0 ? std::sqrt(acc) / nrm : 0.0;
}

SpectrumReport dense_bottom(const SparseSymmetricOperator& F,
                            const std::vector<double>& weights, int k) {
  const int n = F.dim;
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(weights[i]);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int idx = F.row_start[i]; idx < F.row_start[i + 1]; ++idx) {
      B(i, F.col[idx]) = F.val[idx] * scale[i] * scale[F.col[idx]];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("bottom_spectrum: dense eigensolver failed to converge");
  }
  SpectrumReport report;
  report.method = "dense";
  for (int j = 0; j < k; ++j) {
    const double lambda = solver.eigenvalues()(j);
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = solver.eigenvectors()(i, j) * scale[i];
    report.eigenvalues.push_back(lambda);
    report.residuals.push_back(pencil_residual(F, weights, xi, lambda));
  }
  return report;
}

SpectrumReport lanczos_bottom(const SparseSymmetricOperator& F,
                              const std::vector<double>& weights, int k) {
  const int n = F.dim;
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) scale[i] = 1.0 / std::sqrt(weights[i]);

  // Gershgorin bound of the whitened matrix, shift so the wanted (smallest)
  // eigenvalues become the extremal ones of C = sigma I - B.
  double sigma = 0.0;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int idx = F.row_start[i]; idx < F.row_start[i + 1]; ++idx) {
      acc += std::abs(F.val[idx]) * scale[i] * scale[F.col[idx]];
    }
    sigma = std::max(sigma, acc);
  }
  sigma = sigma * 1.01 + 1e-12;

  // Exact kernel direction of B: W^{1/2} * constants.
  std::vector<double> v0(n);
  double v0n = 0.0;
  for (int i = 0; i < n; ++i) {
    v0[i] = std::sqrt(weights[i]);
    v0n += v0[i] * v0[i];
  }
  v0n = std::sqrt(v0n);
  for (double& v : v0) v /= v0n;

  const double tol = 1e-8 * std::max(F.inf_norm(), 1e-300);
  const int want = k - 1;  // beyond the deflated kernel

  std::vector<std::vector<double>> basis;
  std::vector<double> alphas;
  std::vector<double> betas;

  Rng rng(9176);
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = rng.uniform() - 0.5;

  auto project_out = [&](std::vector<double>& w) {
    for (int pass = 0; pass < 2; ++pass) {
      double dot0 = 0.0;
      for (int i = 0; i < n; ++i) dot0 += w[i] * v0[i];
      for (int i = 0; i < n; ++i) w[i] -= dot0 * v0[i];
      for (const auto& b : basis) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += w[i] * b[i];
        for (int i = 0; i < n; ++i) w[i] -= d * b[i];
      }
    }
  };

  project_out(q);
  {
    double qn = 0.0;
    for (double v : q) qn += v * v;
    qn = std::sqrt(qn);
    if (qn < 1e-14) throw std::runtime_error("bottom_spectrum: degenerate start vector");
    for (double& v : q) v /= qn;
  }

  const int hard_cap = std::min(n - 1, 800);
  int target = std::min(hard_cap, std::max(4 * k + 80, 160));
  SpectrumReport report;
  report.method = "lanczos";
  double best_resid = std::numeric_limits<double>::infinity();

  while (true) {
    while (static_cast<int>(basis.size()) < target) {
      basis.push_back(q);
      std::vector<double> w = whitened_matvec(F, scale, q);
      // C q = sigma q - B q
      for (int i = 0; i < n; ++i) w[i] = sigma * q[i] - w[i];
      double alpha = 0.0;
      for (int i = 0; i < n; ++i) alpha += w[i] * q[i];
      alphas.push_back(alpha);
      project_out(w);
      double beta = 0.0;
      for (double v : w) beta += v * v;
      beta = std::sqrt(beta);
      if (beta < 1e-13 * sigma) {
        betas.push_back(0.0);
        break;  // invariant subspace found
      }
      betas.push_back(beta);
      for (int i = 0; i < n; ++i) q[i] = w[i] / beta;
    }

    const int m = static_cast<int>(basis.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
      T(j, j) = alphas[j];
      if (j + 1 < m) {
        T(j, j + 1) = betas[j];
        T(j + 1, j) = betas[j];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(T);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("bottom_spectrum: tridiagonal eigensolver failed");
    }

    // Largest Ritz values of C give the smallest eigenvalues of B.
    std::vector<std::pair<double, int>> order;
    for (int j = 0; j < m; ++j) order.push_back({solver.eigenvalues()(j), j});
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    report.eigenvalues.assign(1, 0.0);
    std::vector<double> ones(n, 1.0);
    report.residuals.assign(1, pencil_residual(F, weights, ones, 0.0));
    double worst = report.residuals[0];
    for (int j = 0; j < want && j < m; ++j) {
      const int idx = order[j].second;
      const double lambda = sigma - order[j].first;
      std::vector<double> xi(n, 0.0);
      for (int b = 0; b < m; ++b) {
        const double coef = solver.eigenvectors()(b, idx);
        const auto& qb = basis[b];
        for (int i = 0; i < n; ++i) xi[i] += coef * qb[i];
      }
      for (int i = 0; i < n; ++i) xi[i] *= scale[i];
      report.eigenvalues.push_back(lambda);
      report.residuals.push_back(pencil_residual(F, weights, xi, lambda));
      worst = std::max(worst, report.residuals.back());
    }
    best_resid = std::min(best_resid, worst);

    const bool enough = static_cast<int>(report.eigenvalues.size()) >= k;
    const bool broke_down = !betas.empty() && betas.back() == 0.0;
    if ((enough && worst <= tol) || broke_down || m >= hard_cap) {
      if (!(enough && worst <= tol) && !broke_down) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "bottom_spectrum: iteration did not converge (best residual %.3g, "
                      "tolerance %.3g)",
                      best_resid, tol);
        throw std::runtime_error(buf);
      }
      break;
    }
    target = std::min(hard_cap, target + target / 2);
  }

  // Ascending order with the deflated zero in front already guaranteed for
  // PSD operators; sort defensively and carry residual pairing along.
  std::vector<int> perm(report.eigenvalues.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::sort(perm.begin(), perm.end(), [&](int a, int b) {
    return report.eigenvalues[a] < report.eigenvalues[b];
  });
  SpectrumReport sorted = report;
  sorted.eigenvalues.clear();
  sorted.residuals.clear();
  for (std::size_t i = 0; i < perm.size() && static_cast<int>(i) < k; ++i) {
    sorted.eigenvalues.push_back(report.eigenvalues[perm[i]]);
    sorted.residuals.push_back(report.residuals[perm[i]]);
  }
  return sorted;
}

}  // namespace

SpectrumReport bottom_spectrum(const SparseSymmetricOperator& F,
                               const std::vector<double>& weights, int k) {
  check_weights(F, weights);
  if (k < 1 || k > F.dim) {
    throw std::invalid_argument("bottom_spectrum: k must be between 1 and the dimension");
  }
  SpectrumReport report = F.dim <= 4000 ? dense_bottom(F, weights, k)
                                        : lanczos_bottom(F, weights, k);
  if (report.eigenvalues.size() >= 2) report.gap = report.eigenvalues[1];
  return report;
}

double first_positive_eigenvalue(const SpectrumReport& report, double tol) {
  for (double v : report.eigenvalues) {
    if (v > tol) return v;
  }
  return 0.0;
}

namespace {

// One sweep level: assemble the coupling operator on the net and read off
// its first nonzero pencil eigenvalue and the weighted ball-mass mean.
GapPoint sweep_level_point(const EpsNet& net, const IsometricAction& action,
                           double r_eff) {
  WarpedGraph graph = build_warped_graph(net, action);
  OperatorBundle bundle = make_operator_bundle(graph, r_eff);
  SpectrumReport spec = bottom_spectrum(bundle.coarse, bundle.weights, 2);

  GapPoint point;
  point.t = net.t;
  point.net_size = net.size();
  point.lambda2 = spec.eigenvalues.size() > 1 ? spec.eigenvalues[1] : 0.0;
  double wsum = 0.0;
  double psum = 0.0;
  for (int i = 0; i < net.size(); ++i) {
    wsum += net.weights[i];
    psum += bundle.phi[i] * net.weights[i];
  }
  point.phi_mean = psum / wsum;
  point.normalized_gap = point.lambda2 / point.phi_mean;
  return point;
}

void finish_sweep(GapSweep& sweep) {
  sweep.min_normalized_gap = sweep.points.front().normalized_gap;
  for (const auto& p : sweep.points) {
    sweep.min_normalized_gap = std::min(sweep.min_normalized_gap, p.normalized_gap);
  }
  sweep.ratio_last_to_first =
      sweep.points.back().normalized_gap / sweep.points.front().normalized_gap;
}

}  // namespace

GapSweep gap_across_levels(const IsometricAction& action, const std::vector<double>& levels,
                           double epsilon, double r, const std::string& net_kind,
                           std::uint64_t seed) {
  if (levels.empty()) throw std::invalid_argument("gap_across_levels: empty level list");
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] > levels[i - 1])) {
      throw std::invalid_argument("gap_across_levels: levels must be strictly increasing");
    }
  }
  if (net_kind != "greedy" && net_kind != "arithmetic") {
    throw std::invalid_argument("gap_across_levels: net kind must be greedy | arithmetic");
  }
  if (net_kind == "arithmetic" && action.space().kind() != SpaceKind::Circle) {
    throw std::invalid_argument("gap_across_levels: arithmetic nets exist only on the circle");
  }

  GapSweep sweep;
  sweep.action_name = action.name();
  sweep.net_kind = net_kind;
  sweep.epsilon = epsilon;
  sweep.seed = seed;
  const double free_radius = max_free_radius(action);
  double r_eff = r;
  if (!(r_eff > 0.0)) {
    r_eff = levels.front() * free_radius;
    if (!std::isfinite(r_eff)) r_eff = levels.front() * 0.25;  // identity-only action
  }
  sweep.r = r_eff;

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double t = levels[li];
    EpsNet net;
    if (net_kind == "arithmetic") {
      const int n = std::max(2, static_cast<int>(std::lround(t / epsilon)));
      net = arithmetic_circle_net(t, n);
    } else {
      net = build_eps_net(action.space(), t, epsilon, seed + 1000 * li);
    }
    sweep.points.push_back(sweep_level_point(net, action, r_eff));
  }

  finish_sweep(sweep);
  return sweep;
}

GapSweep gap_across_levels_odometer(const std::vector<double>& levels, double r,
                                    std::uint64_t seed) {
  if (levels.empty()) throw std::invalid_argument("gap sweep: empty level list");
  std::vector<int> depths;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      throw std::invalid_argument("gap sweep: levels must be strictly increasing");
    }
    const double t = levels[i];
    const int depth = static_cast<int>(std::lround(std::log2(t)));
    if (depth < 1 || depth > 30 || std::ldexp(1.0, depth) != t) {
      throw std::invalid_argument(
          "gap sweep: odometer levels must be powers of two (the level is the point "
          "count of the depth-matched digit space)");
    }
    depths.push_back(depth);
  }

  GapSweep sweep;
  sweep.net_kind = "full";
  sweep.epsilon = 0.0;
  sweep.seed = seed;

  double r_eff = r;
  {
    IsometricAction first = make_odometer(depths.front());
    sweep.action_name = first.name();
    if (!(r_eff > 0.0)) r_eff = levels.front() * max_free_radius(first);
  }
  sweep.r = r_eff;

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const ModelSpace space = ModelSpace::cantor_level(depths[li]);
    const IsometricAction action = make_odometer(depths[li]);
    EpsNet net = build_eps_net(space, levels[li], 1.0, seed + 1000 * li);
    sweep.points.push_back(sweep_level_point(net, action, r_eff));
  }

  finish_sweep(sweep);
  return sweep;
}

}  // namespace warpedlab
