// Model spaces: metric axioms, Haar invariance, ball-volume closed forms,
// quaternion arithmetic.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "warpedlab/rng.hpp"
#include "warpedlab/spaces.hpp"

using namespace warpedlab;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

std::vector<ModelSpace> catalog() {
  return {ModelSpace::circle(), ModelSpace::flat_torus(2), ModelSpace::flat_torus(3),
          ModelSpace::so3(), ModelSpace::cantor_level(6)};
}
}  // namespace

TEST_CASE("metric axioms hold on sampled triples") {
  for (const ModelSpace& space : catalog()) {
    CAPTURE(space.name());
    Rng rng(12345);
    for (int trial = 0; trial < 200; ++trial) {
      const Point a = space.haar_sample(rng);
      const Point b = space.haar_sample(rng);
      const Point c = space.haar_sample(rng);
      const double dab = space.distance(a, b);
      const double dba = space.distance(b, a);
      const double dac = space.distance(a, c);
      const double dcb = space.distance(c, b);
      CHECK(dab >= 0.0);
      // The rotation-group distance goes through acos, whose rounding near 1
      // leaves a sqrt(eps)-sized floor; flat and dyadic metrics are exact.
      const double zero_tol = space.name() == "so3" ? 1e-7 : 0.0;
      CHECK(space.distance(a, a) <= zero_tol);
      CHECK(dab == doctest::Approx(dba).epsilon(1e-14));
      CHECK(dab <= dac + dcb + 1e-12);
      CHECK(dab <= space.diameter() + 1e-12);
    }
  }
}

TEST_CASE("circle distance is the shorter arc") {
  const ModelSpace circle = ModelSpace::circle();
  Point a, b;
  a.c = {0.1};
  b.c = {0.9};
  CHECK(circle.distance(a, b) == doctest::Approx(0.2).epsilon(1e-15));
  b.c = {0.45};
  CHECK(circle.distance(a, b) == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("torus distance is translation invariant") {
  const ModelSpace torus = ModelSpace::flat_torus(3);
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Point a = torus.haar_sample(rng);
    const Point b = torus.haar_sample(rng);
    const Point s = torus.haar_sample(rng);
    Point at = a, bt = b;
    for (int k = 0; k < 3; ++k) {
      at.c[k] = wrap_unit_interval(a.c[k] + s.c[k]);
      bt.c[k] = wrap_unit_interval(b.c[k] + s.c[k]);
    }
    CHECK(torus.distance(at, bt) == doctest::Approx(torus.distance(a, b)).epsilon(1e-13));
  }
}

TEST_CASE("cantor distance depends on the first differing coordinate") {
  const ModelSpace cantor = ModelSpace::cantor_level(8);
  Point a, b;
  a.bits = 0b00000000;
  b.bits = 0b00000001;  // differ in coordinate 0
  CHECK(cantor.distance(a, b) == doctest::Approx(1.0));
  b.bits = 0b00010000;  // first difference at coordinate 4
  CHECK(cantor.distance(a, b) == doctest::Approx(std::ldexp(1.0, -4)));
  b.bits = a.bits;
  CHECK(cantor.distance(a, b) == 0.0);
}

TEST_CASE("ball volume closed forms match their definitions") {
  const ModelSpace circle = ModelSpace::circle();
  CHECK(circle.ball_volume(0.2) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(circle.ball_volume(0.7) == 1.0);

  const ModelSpace torus = ModelSpace::flat_torus(2);
  CHECK(torus.ball_volume(0.3) == doctest::Approx(kPi * 0.09).epsilon(1e-14));
  CHECK_FALSE(torus.has_ball_volume(0.6));  // wrapped ball: no closed form

  const ModelSpace cantor = ModelSpace::cantor_level(4);
  // Open balls: d(x,y) = 2^-i with i the first differing coordinate, so
  // d < 1/4 pins the first THREE coordinates (d = 1/4 itself is excluded),
  // while d < 0.26 pins only two.
  CHECK(cantor.ball_volume(0.25) == doctest::Approx(0.125));
  CHECK(cantor.ball_volume(0.26) == doctest::Approx(0.25));
  CHECK(cantor.ball_volume(1.5) == doctest::Approx(1.0));
}

TEST_CASE("so3 ball volume matches Monte Carlo within three sigma") {
  const ModelSpace so3 = ModelSpace::so3();
  Rng rng(2024);
  const int n = 200000;
  const double rho = 1.0;
  const double expected = (rho - std::sin(rho)) / kPi;
  int hits = 0;
  const Point center = so3.haar_sample(rng);
  for (int i = 0; i < n; ++i) {
    if (so3.distance(center, so3.haar_sample(rng)) < rho) ++hits;
  }
  const double p = static_cast<double>(hits) / n;
  const double sigma = std::sqrt(expected * (1.0 - expected) / n);
  CHECK(std::fabs(p - expected) <= 3.0 * sigma);
}

TEST_CASE("quaternion arithmetic: unit norm, inverse, associativity") {
  const ModelSpace so3 = ModelSpace::so3();
  Rng rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    Point a = so3.haar_sample(rng);
    Point b = so3.haar_sample(rng);
    Point c = so3.haar_sample(rng);

    Point ab = quaternion_multiply(a, b);
    double norm2 = 0.0;
    for (double v : ab.c) norm2 += v * v;
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));

    // a * conj(a) is the identity rotation (distance zero from any x to x).
    Point id = quaternion_multiply(a, quaternion_conjugate(a));
    canonicalize_quaternion(id);
    CHECK(id.c[0] == doctest::Approx(1.0).epsilon(1e-12));

    Point lhs = quaternion_multiply(quaternion_multiply(a, b), c);
    Point rhs = quaternion_multiply(a, quaternion_multiply(b, c));
    canonicalize_quaternion(lhs);
    canonicalize_quaternion(rhs);
    for (int k = 0; k < 4; ++k) CHECK(lhs.c[k] == doctest::Approx(rhs.c[k]).epsilon(1e-10));
  }
}

TEST_CASE("so3 metric is bi-invariant") {
  const ModelSpace so3 = ModelSpace::so3();
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Point a = so3.haar_sample(rng);
    const Point b = so3.haar_sample(rng);
    const Point g = so3.haar_sample(rng);
    Point ga = quaternion_multiply(g, a);
    Point gb = quaternion_multiply(g, b);
    Point ag = quaternion_multiply(a, g);
    Point bg = quaternion_multiply(b, g);
    canonicalize_quaternion(ga);
    canonicalize_quaternion(gb);
    canonicalize_quaternion(ag);
    canonicalize_quaternion(bg);
    const double d = so3.distance(a, b);
    CHECK(so3.distance(ga, gb) == doctest::Approx(d).epsilon(1e-11));
    CHECK(so3.distance(ag, bg) == doctest::Approx(d).epsilon(1e-11));
  }
}

TEST_CASE("haar sampling is uniform per coordinate band") {
  // Coarse uniformity check: each circle band [k/8,(k+1)/8) receives its
  // share of 80000 samples within five sigma.
  const ModelSpace circle = ModelSpace::circle();
  Rng rng(31415);
  std::vector<int> bands(8, 0);
  const int n = 80000;
  for (int i = 0; i < n; ++i) {
    const Point p = circle.haar_sample(rng);
    ++bands[static_cast<int>(p.c[0] * 8.0) & 7];
  }
  const double expected = n / 8.0;
  const double sigma = std::sqrt(n * (1.0 / 8.0) * (7.0 / 8.0));
  for (int k = 0; k < 8; ++k) CHECK(std::fabs(bands[k] - expected) <= 5.0 * sigma);
}

TEST_CASE("finite enumeration round trips") {
  const ModelSpace cantor = ModelSpace::cantor_level(5);
  CHECK(cantor.point_count() == 32);
  for (std::uint64_t i = 0; i < 32; ++i) {
    CHECK(cantor.enumerate_point(i).bits == i);
  }
}

TEST_CASE("phi closed form agrees with Monte Carlo") {
  const ModelSpace circle = ModelSpace::circle();
  Point x;
  x.c = {0.3};
  const PhiEstimate closed = phi_value(circle, 10.0, 0.8, "closed", x);
  const PhiEstimate mc = phi_value(circle, 10.0, 0.8, "mc", x, 200000, 5);
  CHECK(closed.std_error == 0.0);
  CHECK(closed.value == doctest::Approx(10.0 * 0.16).epsilon(1e-12));
  CHECK(std::fabs(mc.value - closed.value) <= 4.0 * mc.std_error + 1e-12);
}
