#include "warpedlab/invariant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "warpedlab/heat.hpp"
#include "warpedlab/operators.hpp"
#include "warpedlab/spectra.hpp"
#include "warpedlab/warped.hpp"

namespace warpedlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

Point identity_point(const ModelSpace& space) {
  Point e;
  if (space.kind() == SpaceKind::SO3) e.c[0] = 1.0;
  return e;
}

// y_j^{-1} * x_i under the group structure of the space.
Point group_difference(const ModelSpace& space, const Point& x, const Point& y) {
  Point d;
  switch (space.kind()) {
    case SpaceKind::Circle:
      d.c[0] = wrap_unit_interval(x.c[0] - y.c[0]);
      break;
    case SpaceKind::FlatTorus:
      for (int a = 0; a < space.dim(); ++a) d.c[a] = wrap_unit_interval(x.c[a] - y.c[a]);
      break;
    case SpaceKind::SO3:
      d = quaternion_multiply(quaternion_conjugate(y), x);
      canonicalize_quaternion(d);
      break;
    case SpaceKind::CantorLevel: {
      const std::uint64_t mask = (std::uint64_t{1} << space.depth()) - 1;
      d.bits = (x.bits - y.bits) & mask;
      break;
    }
  }
  return d;
}

std::string format_defect_warning(double defect, double epsilon) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "group differences fall up to %.3g from the nearest net point, beyond "
                "the net resolution %.3g",
                defect, epsilon);
  return buf;
}

}  // namespace

std::vector<double> LiftedKernel::matrix(const std::vector<double>& f) const {
  if (static_cast<int>(f.size()) != n) {
    throw std::invalid_argument("LiftedKernel::matrix: section length mismatch");
  }
  std::vector<double> K(static_cast<std::size_t>(n) * n);
  for (std::size_t a = 0; a < K.size(); ++a) K[a] = f[snap_index[a]];
  return K;
}

LiftedKernel lift_kernel(const EpsNet& net, const NeighborIndex& index) {
  const int n = net.size();
  if (n == 0) throw std::invalid_argument("lift_kernel: empty net");
  LiftedKernel lk;
  lk.n = n;
  lk.snap_index.assign(static_cast<std::size_t>(n) * n, 0);

  const bool circle_lattice =
      net.kind == "arithmetic" && net.space.kind() == SpaceKind::Circle;
  const bool digit_lattice = net.kind == "full" &&
                             net.space.kind() == SpaceKind::CantorLevel &&
                             static_cast<std::uint64_t>(n) == net.space.point_count();

  if (circle_lattice || digit_lattice) {
    // Index arithmetic is exact: point i sits at lattice position i.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int k = i - j >= 0 ? i - j : i - j + n;
        lk.snap_index[static_cast<std::size_t>(i) * n + j] = k;
      }
    }
    lk.max_snap_defect = 0.0;
    lk.e_index = 0;
    lk.e_defect = 0.0;
    return lk;
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point d = group_difference(net.space, net.points[i], net.points[j]);
      const int k = index.nearest(d);
      lk.snap_index[static_cast<std::size_t>(i) * n + j] = k;
      worst = std::max(worst, net.t * net.space.distance(d, net.points[k]));
    }
  }
  lk.max_snap_defect = worst;
  const Point e = identity_point(net.space);
  lk.e_index = index.nearest(e);
  lk.e_defect = net.t * net.space.distance(e, net.points[lk.e_index]);
  if (worst > net.epsilon) {
    lk.warnings.push_back(format_defect_warning(worst, net.epsilon));
  }
  return lk;
}

LiftedKernel lift_kernel(const EpsNet& net) {
  NeighborIndex index = make_net_index(net);
  return lift_kernel(net, index);
}

WResidualReport w_unitary_residual(const EpsNet& net, double r,
                                   const std::vector<double>& f, int column_budget) {
  const int n = net.size();
  if (static_cast<int>(f.size()) != n) {
    throw std::invalid_argument("w_unitary_residual: section length mismatch");
  }
  NeighborIndex index = make_net_index(net);
  const SparseSymmetricOperator F = assemble_local(net, index, r);
  const std::vector<double>& w = net.weights;

  const bool lattice =
      (net.kind == "arithmetic" && net.space.kind() == SpaceKind::Circle) ||
      (net.kind == "full" && net.space.kind() == SpaceKind::CantorLevel &&
       static_cast<std::uint64_t>(n) == net.space.point_count());

  WResidualReport report;
  report.n = n;
  report.t = net.t;
  report.r = r;

  if (lattice) {
    report.e_index = 0;
  } else {
    const Point e = identity_point(net.space);
    report.e_index = index.nearest(e);
  }

  // Deterministic column sample: the identity column plus an even spread.
  std::vector<int> columns;
  if (column_budget <= 0 || column_budget >= n) {
    columns.resize(n);
    for (int j = 0; j < n; ++j) columns[j] = j;
  } else {
    columns.push_back(report.e_index);
    for (int k = 0; k < column_budget; ++k) {
      columns.push_back(static_cast<int>((static_cast<long long>(k) * n) / column_budget));
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
  }
  report.columns_used = static_cast<int>(columns.size());

  double f_norm2 = 0.0;
  for (int i = 0; i < n; ++i) f_norm2 += w[i] * f[i] * f[i];
  if (!(f_norm2 > 0.0)) {
    throw std::invalid_argument("w_unitary_residual: the section is zero");
  }

  // A f, with A = W^{-1} F.
  std::vector<double> Af = F.matvec(f);
  for (int i = 0; i < n; ++i) Af[i] /= w[i];

  // Per sampled column j: the difference indices, the lifted column of f,
  // A applied to it, and the lifted column of A f.
  std::vector<int> idx(n);
  std::vector<double> colK(n);
  double worst_snap = 0.0;
  double num2 = 0.0;  // || A K - lift(A f) ||_{HS,w}^2 over the sample
  double K2 = 0.0;    // || K ||_{HS,w}^2 over the sample
  double wcol = 0.0;  // total column weight of the sample
  double sec2 = 0.0;  // weighted l2 of the identity-column mismatch
  for (int j : columns) {
    if (lattice) {
      for (int i = 0; i < n; ++i) idx[i] = i - j >= 0 ? i - j : i - j + n;
    } else {
      for (int i = 0; i < n; ++i) {
        const Point d = group_difference(net.space, net.points[i], net.points[j]);
        idx[i] = index.nearest(d);
        worst_snap = std::max(worst_snap, net.t * net.space.distance(d, net.points[idx[i]]));
      }
    }
    for (int i = 0; i < n; ++i) colK[i] = f[idx[i]];
    const std::vector<double> Acol = F.matvec(colK);
    wcol += w[j];
    for (int i = 0; i < n; ++i) {
      const double aij = Acol[i] / w[i];
      const double diff = aij - Af[idx[i]];
      num2 += w[i] * w[j] * diff * diff;
      K2 += w[i] * w[j] * colK[i] * colK[i];
      if (j == report.e_index) {
        const double s = aij - Af[i];
        sec2 += w[i] * s * s;
      }
    }
  }
  report.max_snap_defect = worst_snap;
  report.intertwining_residual = std::sqrt(num2 / K2);
  report.section_residual = std::sqrt(sec2 / f_norm2);
  // || K ||_{HS,w} restricted to the sampled columns against the exact value
  // sqrt(sum of sampled column weights) * ||f||_w it must take.
  report.isometry_defect =
      std::fabs(std::sqrt(K2) / (std::sqrt(wcol) * std::sqrt(f_norm2)) - 1.0);
  if (worst_snap > net.epsilon) {
    report.warnings.push_back(format_defect_warning(worst_snap, net.epsilon));
  }
  for (const auto& warning : F.warnings) report.warnings.push_back(warning);
  return report;
}

double joint_f_value(int group_size, double phi, double l1, double l2) {
  return group_size * phi - (group_size - l1) * (phi - l2);
}

JointSpectrumReport joint_spectrum(const IsometricAction& action, const EpsNet& net,
                                   double r, int compare_modes) {
  if (action.space().kind() != SpaceKind::Circle || net.kind != "arithmetic" ||
      net.space.kind() != SpaceKind::Circle) {
    throw std::domain_error(
        "joint_spectrum: the generator and ball operators commute exactly only for a "
        "circle rotation over a lattice net (both are then circulants); build an "
        "arithmetic net and a circle rotation to use the closed form");
  }
  const int n = net.size();
  if (n < 2) throw std::invalid_argument("joint_spectrum: lattice too small");
  if (!(r > 0.0)) throw std::invalid_argument("joint_spectrum: r must be positive");
  if (compare_modes < 1) {
    throw std::invalid_argument("joint_spectrum: need at least one comparison mode");
  }

  JointSpectrumReport report;
  report.action_name = action.name();
  report.n = n;
  report.t = net.t;
  report.r = r;
  report.group_size = action.generator_count();

  // Lattice steps of the snapped rotation, read off the generator itself.
  int gen = -1;
  for (int s = 0; s < action.generator_count(); ++s) {
    if (!action.is_identity(s)) {
      gen = s;
      break;
    }
  }
  if (gen < 0) {
    throw std::domain_error("joint_spectrum: the action has no non-identity generator");
  }
  const double alpha = wrap_unit_interval(action.apply(gen, net.points[0]).c[0] -
                                          net.points[0].c[0]);
  report.rotation_steps = static_cast<int>(std::lround(alpha * n)) % n;
  report.alpha_hat = static_cast<double>(report.rotation_steps) / n;

  // Uniform ball mass: lattice points within scaled radius r of a center,
  // the center included.
  const std::vector<double> phi = quadrature_phi(net, r);
  report.phi = phi[0];

  report.samples.reserve(n);
  for (int k = 0; k < n; ++k) {
    JointSample s;
    s.k = k;
    s.lambda1 = 2.0 - 2.0 * std::cos(2.0 * kPi * k * report.alpha_hat);
    s.lambda2 = local_symbol_circle_discrete(n, net.t, r, k);
    s.f_value = joint_f_value(report.group_size, report.phi, s.lambda1, s.lambda2);
    report.samples.push_back(s);
  }

  // The assembled coupling operator must reproduce the multiset {f}.
  WarpedGraph graph = build_warped_graph(net, action);
  const SparseSymmetricOperator coarse =
      assemble_coarse(graph, r, CoarseMode::Composed);
  const int compared = std::min(compare_modes, n);
  SpectrumReport spectrum = bottom_spectrum(coarse, net.weights, compared);

  std::vector<double> formula(n);
  for (int k = 0; k < n; ++k) formula[k] = report.samples[k].f_value;
  std::sort(formula.begin(), formula.end());
  formula.resize(compared);

  report.compared = compared;
  report.formula_values = formula;
  report.operator_values = spectrum.eigenvalues;
  double worst = 0.0;
  for (int i = 0; i < compared; ++i) {
    worst = std::max(worst, std::fabs(formula[i] - spectrum.eigenvalues[i]));
  }
  report.multiset_error = worst;
  return report;
}

}  // namespace warpedlab
