#include "warpedlab/spaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace warpedlab {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_unit(double x) {
  double y = x - std::floor(x);
  if (y >= 1.0) y -= 1.0;  // guards x just below an integer rounding up
  return y;
}

double circle_dist(double a, double b) {
  double d = std::fabs(a - b);
  return std::min(d, 1.0 - d);
}

// Volume of the unit-radius Euclidean ball in dimension m.
double unit_ball_volume(int m) {
  switch (m) {
    case 1: return 2.0;
    case 2: return kPi;
    case 3: return 4.0 * kPi / 3.0;
    case 4: return kPi * kPi / 2.0;
    default: throw std::invalid_argument("unsupported dimension");
  }
}

}  // namespace

ModelSpace ModelSpace::circle() {
  ModelSpace s;
  s.kind_ = SpaceKind::Circle;
  s.dim_ = 1;
  return s;
}

ModelSpace ModelSpace::flat_torus(int dim) {
  if (dim < 1 || dim > 4) throw std::invalid_argument("flat_torus: dim must be in [1,4]");
  ModelSpace s;
  s.kind_ = SpaceKind::FlatTorus;
  s.dim_ = dim;
  return s;
}

ModelSpace ModelSpace::so3() {
  ModelSpace s;
  s.kind_ = SpaceKind::SO3;
  s.dim_ = 3;
  return s;
}

ModelSpace ModelSpace::cantor_level(int depth) {
  if (depth < 1 || depth > 30) throw std::invalid_argument("cantor_level: depth must be in [1,30]");
  ModelSpace s;
  s.kind_ = SpaceKind::CantorLevel;
  s.dim_ = 0;
  s.depth_ = depth;
  return s;
}

double ModelSpace::diameter() const {
  switch (kind_) {
    case SpaceKind::Circle: return 0.5;
    case SpaceKind::FlatTorus: return 0.5 * std::sqrt(static_cast<double>(dim_));
    case SpaceKind::SO3: return kPi;
    case SpaceKind::CantorLevel: return 1.0;
  }
  return 0.0;
}

std::string ModelSpace::name() const {
  switch (kind_) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::FlatTorus: return "flat_torus(" + std::to_string(dim_) + ")";
    case SpaceKind::SO3: return "so3";
    case SpaceKind::CantorLevel: return "cantor_level(" + std::to_string(depth_) + ")";
  }
  return "";
}

double ModelSpace::distance(const Point& a, const Point& b) const {
  switch (kind_) {
    case SpaceKind::Circle:
      return circle_dist(a.c[0], b.c[0]);
    case SpaceKind::FlatTorus: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) {
        const double d = circle_dist(a.c[i], b.c[i]);
        s += d * d;
      }
      return std::sqrt(s);
    }
    case SpaceKind::SO3: {
      // Rotation angle of a^{-1} b: d = 2*acos(|<a,b>|), diameter pi.
      double dot = 0.0;
      for (int i = 0; i < 4; ++i) dot += a.c[i] * b.c[i];
      dot = std::fabs(dot);
      if (dot > 1.0) dot = 1.0;
      return 2.0 * std::acos(dot);
    }
    case SpaceKind::CantorLevel: {
      const std::uint64_t x = a.bits ^ b.bits;
      if (x == 0) return 0.0;
      const int i = std::countr_zero(x);  // first differing coordinate
      return std::ldexp(1.0, -i);         // 2^{-i}
    }
  }
  return 0.0;
}

Point ModelSpace::haar_sample(Rng& rng) const {
  Point p;
  switch (kind_) {
    case SpaceKind::Circle:
      p.c[0] = rng.uniform();
      break;
    case SpaceKind::FlatTorus:
      for (int i = 0; i < dim_; ++i) p.c[i] = rng.uniform();
      break;
    case SpaceKind::SO3: {
      // Four normal deviates normalized: uniform on S^3, hence Haar on SO3
      // after the antipodal identification.
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (int i = 0; i < 4; ++i) {
          p.c[i] = rng.gaussian();
          n2 += p.c[i] * p.c[i];
        }
      } while (n2 < 1e-12);
      const double inv = 1.0 / std::sqrt(n2);
      for (int i = 0; i < 4; ++i) p.c[i] *= inv;
      canonicalize_quaternion(p);
      break;
    }
    case SpaceKind::CantorLevel:
      p.bits = rng.raw() & ((std::uint64_t{1} << depth_) - 1);
      break;
  }
  return p;
}

double ModelSpace::ball_volume(double rho) const {
  if (rho <= 0.0) return 0.0;
  switch (kind_) {
    case SpaceKind::Circle:
      return std::min(2.0 * rho, 1.0);
    case SpaceKind::FlatTorus: {
      if (rho <= 0.5) return unit_ball_volume(dim_) * std::pow(rho, dim_);
      if (rho >= 0.5 * std::sqrt(static_cast<double>(dim_)) && dim_ == 1) return 1.0;
      if (rho > diameter()) return 1.0;
      return -1.0;  // wrapped ball, no closed form implemented
    }
    case SpaceKind::SO3: {
      if (rho >= kPi) return 1.0;
      // Rotation-angle density under Haar is (1-cos)/pi on [0,pi].
      return (rho - std::sin(rho)) / kPi;
    }
    case SpaceKind::CantorLevel: {
      // Open ball: y with 2^{-i} < rho where i is the first differing
      // coordinate; equivalently the first a coordinates agree, with a the
      // smallest integer satisfying 2^{-a} < rho.
      int a = 0;
      while (a <= depth_ && std::ldexp(1.0, -a) >= rho) ++a;
      if (a >= depth_) return std::ldexp(1.0, -depth_);  // singleton
      return std::ldexp(1.0, -a);
    }
  }
  return -1.0;
}

bool ModelSpace::has_ball_volume(double rho) const { return ball_volume(rho) >= 0.0; }

std::uint64_t ModelSpace::point_count() const {
  if (kind_ != SpaceKind::CantorLevel) return 0;
  return std::uint64_t{1} << depth_;
}

Point ModelSpace::enumerate_point(std::uint64_t i) const {
  if (kind_ != SpaceKind::CantorLevel) throw std::logic_error("enumerate_point: finite spaces only");
  Point p;
  p.bits = i & ((std::uint64_t{1} << depth_) - 1);
  return p;
}

std::vector<std::string> ModelSpace::coord_names() const {
  switch (kind_) {
    case SpaceKind::Circle: return {"x"};
    case SpaceKind::FlatTorus: {
      std::vector<std::string> n;
      for (int i = 0; i < dim_; ++i) n.push_back("x" + std::to_string(i));
      return n;
    }
    case SpaceKind::SO3: return {"qw", "qx", "qy", "qz"};
    case SpaceKind::CantorLevel: return {"code"};
  }
  return {};
}

std::vector<double> ModelSpace::coords(const Point& p) const {
  switch (kind_) {
    case SpaceKind::Circle: return {p.c[0]};
    case SpaceKind::FlatTorus: return std::vector<double>(p.c.begin(), p.c.begin() + dim_);
    case SpaceKind::SO3: return std::vector<double>(p.c.begin(), p.c.end());
    case SpaceKind::CantorLevel: return {static_cast<double>(p.bits)};
  }
  return {};
}

void canonicalize_quaternion(Point& p) {
  double n2 = 0.0;
  for (int i = 0; i < 4; ++i) n2 += p.c[i] * p.c[i];
  const double inv = 1.0 / std::sqrt(n2);
  for (int i = 0; i < 4; ++i) p.c[i] *= inv;
  int lead = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::fabs(p.c[i]) > std::fabs(p.c[lead])) lead = i;
  }
  if (p.c[lead] < 0.0) {
    for (int i = 0; i < 4; ++i) p.c[i] = -p.c[i];
  }
}

Point quaternion_multiply(const Point& a, const Point& b) {
  Point r;
  r.c[0] = a.c[0] * b.c[0] - a.c[1] * b.c[1] - a.c[2] * b.c[2] - a.c[3] * b.c[3];
  r.c[1] = a.c[0] * b.c[1] + a.c[1] * b.c[0] + a.c[2] * b.c[3] - a.c[3] * b.c[2];
  r.c[2] = a.c[0] * b.c[2] - a.c[1] * b.c[3] + a.c[2] * b.c[0] + a.c[3] * b.c[1];
  r.c[3] = a.c[0] * b.c[3] + a.c[1] * b.c[2] - a.c[2] * b.c[1] + a.c[3] * b.c[0];
  return r;
}

Point quaternion_conjugate(const Point& a) {
  Point r = a;
  r.c[1] = -r.c[1];
  r.c[2] = -r.c[2];
  r.c[3] = -r.c[3];
  return r;
}

// Euclidean wrap helper shared with the net builder.
double wrap_unit_interval(double x) { return wrap_unit(x); }

PhiEstimate phi_value(const ModelSpace& space, double t, double r,
                      const std::string& mode, const Point& x,
                      std::size_t samples, std::uint64_t seed) {
  if (t <= 0.0 || r <= 0.0) throw std::invalid_argument("phi_value: t and r must be positive");
  const double rho = r / t;
  const double scale = std::pow(t, space.dim());
  if (mode == "closed") {
    const double v = space.ball_volume(rho);
    if (v < 0.0) throw std::invalid_argument("phi_value: no closed form for this radius");
    return {scale * v, 0.0};
  }
  if (mode != "mc") throw std::invalid_argument("phi_value: mode must be 'closed' or 'mc'");
  Rng rng(seed);
  std::size_t hit = 0;
  if (space.is_finite()) {
    // Finite spaces are summed exactly; there is no Monte Carlo error.
    const std::uint64_t n = space.point_count();
    for (std::uint64_t i = 0; i < n; ++i) {
      if (space.distance(x, space.enumerate_point(i)) < rho) ++hit;
    }
    return {scale * static_cast<double>(hit) / static_cast<double>(n), 0.0};
  }
  for (std::size_t i = 0; i < samples; ++i) {
    if (space.distance(x, space.haar_sample(rng)) < rho) ++hit;
  }
  const double p = static_cast<double>(hit) / static_cast<double>(samples);
  const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(samples));
  return {scale * p, scale * se};
}

}  // namespace warpedlab
