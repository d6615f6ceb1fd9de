#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "warpedlab/rng.hpp"

namespace warpedlab {

enum class SpaceKind { Circle, FlatTorus, SO3, CantorLevel };

// A point of a model space. Continuous spaces use `c`:
//   Circle      c[0] in [0,1)
//   FlatTorus   c[0..m) in [0,1)^m
//   SO3         unit quaternion (w,x,y,z) in c, sign-canonicalized
// CantorLevel packs the bit string into `bits` (bit i = coordinate i, the
// coordinate the odometer increments first).
struct Point {
  std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};
  std::uint64_t bits = 0;
};

// Compact probability metric-measure space with unit total mass.
class ModelSpace {
 public:
  static ModelSpace circle();
  static ModelSpace flat_torus(int dim);      // dim in [1,4]
  static ModelSpace so3();
  static ModelSpace cantor_level(int depth);  // depth in [1,30]

  SpaceKind kind() const { return kind_; }
  // Measure-scaling dimension m (mu_t = t^m * mu): 1, m, 3, 0 respectively.
  int dim() const { return dim_; }
  int depth() const { return depth_; }
  double diameter() const;
  double total_mass() const { return 1.0; }
  std::string name() const;

  double distance(const Point& a, const Point& b) const;
  Point haar_sample(Rng& rng) const;

  // Haar measure of an open metric ball of radius rho; every model space is
  // homogeneous so the value does not depend on the center. Returns -1 where
  // no closed form is implemented (torus balls that wrap past 1/2).
  double ball_volume(double rho) const;
  bool has_ball_volume(double rho) const;

  // Finite spaces only (CantorLevel): exhaustive enumeration.
  bool is_finite() const { return kind_ == SpaceKind::CantorLevel; }
  std::uint64_t point_count() const;
  Point enumerate_point(std::uint64_t i) const;

  // CSV support: coordinate column names and values for a point.
  std::vector<std::string> coord_names() const;
  std::vector<double> coords(const Point& p) const;

 private:
  SpaceKind kind_ = SpaceKind::Circle;
  int dim_ = 1;
  int depth_ = 0;
};

// Canonicalize a quaternion to unit length with a deterministic global sign
// (first component of largest magnitude made positive).
void canonicalize_quaternion(Point& p);

// Quaternion product a*b (Hamilton convention, w-first).
Point quaternion_multiply(const Point& a, const Point& b);
Point quaternion_conjugate(const Point& a);

// Map x into [0, 1) by dropping the integer part (negative-safe).
double wrap_unit_interval(double x);

struct PhiEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for closed forms
};

// phi(x) = t^m * mu(B_{r/t}(x)). mode "closed" uses the ball-volume closed
// form (homogeneous, so x is ignored); mode "mc" estimates by Haar sampling
// around the given center and reports the Monte Carlo standard error.
PhiEstimate phi_value(const ModelSpace& space, double t, double r,
                      const std::string& mode, const Point& x,
                      std::size_t samples = 200000, std::uint64_t seed = 20240915);

}  // namespace warpedlab
