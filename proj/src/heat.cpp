#include "warpedlab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace warpedlab {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

void require_flat(const ModelSpace& space, const char* what) {
  if (space.kind() != SpaceKind::Circle && space.kind() != SpaceKind::FlatTorus) {
    throw std::invalid_argument(std::string(what) +
                                ": closed-form Fourier spectra exist only on the circle "
                                "and flat tori");
  }
}

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Number of signed coordinate permutations of a sorted representative.
int orbit_size(const std::array<int, 4>& rep, int m) {
  int nonzero = 0;
  std::uint64_t perms = factorial(m);
  int run = 1;
  for (int i = 0; i < m; ++i) {
    if (rep[i] != 0) ++nonzero;
    if (i > 0 && rep[i] == rep[i - 1]) {
      ++run;
    } else {
      perms /= factorial(run);
      run = 1;
    }
  }
  perms /= factorial(run);
  return static_cast<int>(perms) << nonzero;
}

double unit_ball_volume(int m) {
  switch (m) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    case 4: return kPi * kPi / 2.0;
    default: throw std::invalid_argument("unit_ball_volume: dimension out of range");
  }
}

}  // namespace

double heat_sigma(double t, double lambda) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_sigma: t must be positive");
  return 1.0 - std::exp(-lambda / (t * t));
}

HeatOperator make_heat_operator(const ModelSpace& space, double t, int mode_cap) {
  require_flat(space, "make_heat_operator");
  if (mode_cap < 0) throw std::invalid_argument("make_heat_operator: negative mode cap");
  HeatOperator op;
  op.space = space;
  op.t = t;
  const int m = space.kind() == SpaceKind::Circle ? 1 : space.dim();

  // Sorted nonnegative representatives k1 <= k2 <= ... <= km.
  std::array<int, 4> rep{0, 0, 0, 0};
  std::vector<HeatMode> modes;
  auto emit = [&]() {
    HeatMode mode;
    mode.freq = rep;
    double k2 = 0.0;
    for (int i = 0; i < m; ++i) k2 += static_cast<double>(rep[i]) * rep[i];
    mode.lambda = 4.0 * kPi * kPi * k2;
    mode.multiplicity = orbit_size(rep, m);
    mode.sigma = heat_sigma(t, mode.lambda);
    modes.push_back(mode);
  };
  if (m == 1) {
    for (rep[0] = 0; rep[0] <= mode_cap; ++rep[0]) emit();
  } else if (m == 2) {
    for (rep[1] = 0; rep[1] <= mode_cap; ++rep[1])
      for (rep[0] = 0; rep[0] <= rep[1]; ++rep[0]) emit();
  } else if (m == 3) {
    for (rep[2] = 0; rep[2] <= mode_cap; ++rep[2])
      for (rep[1] = 0; rep[1] <= rep[2]; ++rep[1])
        for (rep[0] = 0; rep[0] <= rep[1]; ++rep[0]) emit();
  } else {
    for (rep[3] = 0; rep[3] <= mode_cap; ++rep[3])
      for (rep[2] = 0; rep[2] <= rep[3]; ++rep[2])
        for (rep[1] = 0; rep[1] <= rep[2]; ++rep[1])
          for (rep[0] = 0; rep[0] <= rep[1]; ++rep[0]) emit();
  }
  std::sort(modes.begin(), modes.end(),
            [](const HeatMode& a, const HeatMode& b) { return a.lambda < b.lambda; });
  op.modes = std::move(modes);
  return op;
}

double local_symbol_circle(double t, double r, int k) {
  if (!(t > 0.0) || !(r > 0.0)) throw std::invalid_argument("local_symbol_circle: t, r > 0");
  if (k == 0) return 0.0;
  const double rho = std::min(r / t, 0.5);
  return 2.0 * t * rho - (t / (kPi * k)) * std::sin(2.0 * kPi * k * rho);
}

double local_symbol_circle_discrete(int n, double t, double r, int k) {
  if (n < 2 || !(t > 0.0) || !(r > 0.0)) {
    throw std::invalid_argument("local_symbol_circle_discrete: need n >= 2 and t, r > 0");
  }
  if (k % n == 0) return 0.0;
  // Lattice neighbors strictly inside the scaled radius on each side.
  const std::int64_t M =
      std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(r * n / t)) - 1, n / 2);
  const double arg = kPi * k / n;
  const double window = (2.0 * M + 1.0) * arg;
  return (t / n) * (2.0 * M + 1.0 - std::sin(window) / std::sin(arg));
}

double local_symbol_torus2(double t, double r, int k1, int k2) {
  if (!(t > 0.0) || !(r > 0.0)) throw std::invalid_argument("local_symbol_torus2: t, r > 0");
  const double kappa = std::sqrt(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
  const double rho = std::min(r / t, 0.5);
  if (kappa == 0.0) return 0.0;
  const double area = kPi * rho * rho;
  const double cosine_mass = rho * std::cyl_bessel_j(1, 2.0 * kPi * kappa * rho) / kappa;
  return t * t * (area - cosine_mass);
}

double sandwich_constant(int m, double r) {
  return 3.0 * std::pow(4.0 * kPi, 0.5 * m) * std::exp(0.25 * r * r);
}

SandwichReport sandwich_check(const ModelSpace& space, const std::vector<double>& t_list,
                              double r, double eps_target, int mode_cap) {
  require_flat(space, "sandwich_check");
  const int m = space.kind() == SpaceKind::Circle ? 1 : space.dim();
  if (m > 2) {
    throw std::invalid_argument("sandwich_check: implemented on the circle and the 2-torus");
  }
  if (t_list.empty()) throw std::invalid_argument("sandwich_check: empty level list");
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("sandwich_check: levels must be positive");
  }
  if (!(r > 0.0)) throw std::invalid_argument("sandwich_check: r must be positive");
  if (!(eps_target > 0.0)) throw std::invalid_argument("sandwich_check: eps target must be positive");
  if (mode_cap < 1) throw std::invalid_argument("sandwich_check: mode cap must be >= 1");

  SandwichReport report;
  report.space_name = space.name();
  report.m = m;
  report.r = r;
  report.C = sandwich_constant(m, r);
  report.t_list = t_list;
  report.eps_target = eps_target;
  report.mode_cap = mode_cap;

  // Distinct positive mode magnitudes |k|, ascending.
  std::vector<double> kappas;
  if (m == 1) {
    for (int k = 1; k <= mode_cap; ++k) kappas.push_back(k);
  } else {
    const int cap = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(mode_cap))));
    std::vector<double> k2s;
    for (int k1 = 0; k1 <= cap; ++k1)
      for (int k2 = k1; k2 <= cap; ++k2) {
        if (k1 == 0 && k2 == 0) continue;
        k2s.push_back(static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
      }
    std::sort(k2s.begin(), k2s.end());
    k2s.erase(std::unique(k2s.begin(), k2s.end()), k2s.end());
    for (double v : k2s) kappas.push_back(std::sqrt(v));
  }

  auto symbol = [&](double t, double radius, double kappa) {
    if (m == 1) return local_symbol_circle(t, radius, static_cast<int>(std::lround(kappa)));
    // Radial closed form (depends on the magnitude only).
    const double rho = std::min(radius / t, 0.5);
    const double area = kPi * rho * rho;
    const double cosine_mass = rho * std::cyl_bessel_j(1, 2.0 * kPi * kappa * rho) / kappa;
    return t * t * (area - cosine_mass);
  };
  auto sigma_of = [&](double t, double kappa) {
    return heat_sigma(t, 4.0 * kPi * kPi * kappa * kappa);
  };

  // First inequality, with the level threshold scanned from the top down.
  std::vector<double> upper_violation_per_t;
  for (double t : t_list) {
    double worst = 0.0;
    for (double kappa : kappas) {
      const double lhs = symbol(t, r, kappa);
      const double rhs = report.C * sigma_of(t, kappa);
      worst = std::max(worst, lhs - rhs);
      worst = std::max(worst, -lhs);  // the 0 <= lhs side
      report.rows.push_back({t, kappa, lhs, rhs, rhs - lhs});
    }
    upper_violation_per_t.push_back(worst);
  }
  const double tol1 = 1e-12 * report.C;
  int first_ok = -1;
  for (int i = static_cast<int>(t_list.size()) - 1; i >= 0; --i) {
    if (upper_violation_per_t[i] <= tol1) {
      first_ok = i;
    } else {
      break;
    }
  }
  if (first_ok >= 0) {
    report.pass_upper = true;
    report.t0 = t_list[first_ok];
    for (std::size_t i = first_ok; i < t_list.size(); ++i) {
      report.max_violation_upper = std::max(report.max_violation_upper,
                                            upper_violation_per_t[i]);
    }
  } else {
    report.pass_upper = false;
    report.max_violation_upper =
        *std::max_element(upper_violation_per_t.begin(), upper_violation_per_t.end());
  }

  // Second inequality: scan integer R upward, fit D on the lowest ten modes,
  // validate everywhere.
  const int fit_modes = std::min<std::size_t>(10, kappas.size());
  for (int R = 1; R <= 50 && !report.pass_lower; ++R) {
    double D = 0.0;
    bool usable = true;
    for (double t : t_list) {
      for (int i = 0; i < fit_modes; ++i) {
        const double lam = symbol(t, R, kappas[i]);
        const double sig = sigma_of(t, kappas[i]);
        if (!(lam > 0.0)) {
          usable = false;
          break;
        }
        D = std::max(D, sig / lam);
      }
      if (!usable) break;
    }
    if (!usable) continue;
    double worst = 0.0;
    double worst_kappa = 0.0;
    for (double t : t_list) {
      for (double kappa : kappas) {
        const double violation = sigma_of(t, kappa) - D * symbol(t, R, kappa) - eps_target;
        if (violation > worst) {
          worst = violation;
          worst_kappa = kappa;
        }
      }
    }
    report.D = D;
    report.max_violation_lower = worst;
    report.worst_kappa_lower = worst_kappa;
    if (worst <= 1e-12) {
      report.pass_lower = true;
      report.R = R;
    }
  }
  return report;
}

std::uint64_t count_modes_below(const ModelSpace& space, double R) {
  require_flat(space, "count_modes_below");
  const int m = space.kind() == SpaceKind::Circle ? 1 : space.dim();
  if (R < 0.0) return 0;
  const double rho2 = R * (1.0 + 1e-12) / (4.0 * kPi * kPi);
  const double rho = std::sqrt(rho2);
  auto slice = [&](double remaining) -> std::uint64_t {
    if (remaining < 0.0) return 0;
    return 2 * static_cast<std::uint64_t>(std::floor(std::sqrt(remaining))) + 1;
  };
  switch (m) {
    case 1:
      return slice(rho2);
    case 2: {
      std::uint64_t total = 0;
      const int K = static_cast<int>(std::floor(rho));
      for (int k1 = -K; k1 <= K; ++k1) total += slice(rho2 - static_cast<double>(k1) * k1);
      return total;
    }
    case 3: {
      if (rho > 2000.0) throw std::invalid_argument("count_modes_below: enumeration budget");
      std::uint64_t total = 0;
      const int K = static_cast<int>(std::floor(rho));
      for (int k1 = -K; k1 <= K; ++k1) {
        const double r1 = rho2 - static_cast<double>(k1) * k1;
        const int K2 = r1 >= 0.0 ? static_cast<int>(std::floor(std::sqrt(r1))) : -1;
        for (int k2 = -K2; k2 <= K2; ++k2) {
          total += slice(r1 - static_cast<double>(k2) * k2);
        }
      }
      return total;
    }
    case 4: {
      if (rho > 220.0) throw std::invalid_argument("count_modes_below: enumeration budget");
      std::uint64_t total = 0;
      const int K = static_cast<int>(std::floor(rho));
      for (int k1 = -K; k1 <= K; ++k1) {
        const double r1 = rho2 - static_cast<double>(k1) * k1;
        const int K2 = r1 >= 0.0 ? static_cast<int>(std::floor(std::sqrt(r1))) : -1;
        for (int k2 = -K2; k2 <= K2; ++k2) {
          const double r2 = r1 - static_cast<double>(k2) * k2;
          const int K3 = r2 >= 0.0 ? static_cast<int>(std::floor(std::sqrt(r2))) : -1;
          for (int k3 = -K3; k3 <= K3; ++k3) {
            total += slice(r2 - static_cast<double>(k3) * k3);
          }
        }
      }
      return total;
    }
    default:
      throw std::invalid_argument("count_modes_below: dimension out of range");
  }
}

WeylReport weyl_counting(const ModelSpace& space, double R_max, int grid_points) {
  require_flat(space, "weyl_counting");
  if (!(R_max > 0.0)) throw std::invalid_argument("weyl_counting: R_max must be positive");
  if (grid_points < 2) throw std::invalid_argument("weyl_counting: need at least 2 grid points");
  WeylReport report;
  report.space_name = space.name();
  report.m = space.kind() == SpaceKind::Circle ? 1 : space.dim();
  for (int i = 1; i <= grid_points; ++i) {
    const double R = R_max * i / grid_points;
    report.R_grid.push_back(R);
    report.counts.push_back(count_modes_below(space, R));
  }
  double num = 0.0;
  double den = 0.0;
  for (int i = grid_points / 2; i < grid_points; ++i) {
    const double g = std::pow(report.R_grid[i], 0.5 * report.m);
    num += static_cast<double>(report.counts[i]) * g;
    den += g * g;
  }
  report.fit_constant = num / den;
  report.oracle_constant =
      unit_ball_volume(report.m) / std::pow(2.0 * kPi, report.m);
  report.relative_error = std::abs(report.fit_constant / report.oracle_constant - 1.0);
  return report;
}

AccumulationReport accumulation_scan(const ModelSpace& space,
                                     const std::vector<double>& t_list, double eps,
                                     double window_top) {
  require_flat(space, "accumulation_scan");
  if (!(eps > 0.0)) {
    throw std::invalid_argument("accumulation_scan: the window base eps must be positive");
  }
  if (!(window_top > 1.0)) {
    throw std::invalid_argument("accumulation_scan: window top multiplier must exceed 1");
  }
  if (t_list.empty()) throw std::invalid_argument("accumulation_scan: empty level list");
  AccumulationReport report;
  report.space_name = space.name();
  report.eps = eps;
  report.window_top = window_top;
  report.t_list = t_list;
  for (double t : t_list) {
    if (!(t > 0.0)) throw std::invalid_argument("accumulation_scan: levels must be positive");
    const double lo = eps * t * t;
    const double hi = window_top * eps * t * t;
    const std::uint64_t below_hi = count_modes_below(space, hi * (1.0 + 1e-9));
    const std::uint64_t below_lo = count_modes_below(space, lo * (1.0 - 1e-9));
    report.counts.push_back(below_hi - below_lo);
  }
  // Least listed level from which every larger listed level has a nonempty
  // window.
  int first_ok = -1;
  for (int i = static_cast<int>(t_list.size()) - 1; i >= 0; --i) {
    if (report.counts[i] >= 1) {
      first_ok = i;
    } else {
      break;
    }
  }
  if (first_ok >= 0) {
    report.has_threshold = true;
    report.threshold_t0 = t_list[first_ok];
  }
  return report;
}

}  // namespace warpedlab
