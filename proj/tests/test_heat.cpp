// Fourier-side machinery: heat multiplier, ball-averaging symbols against
// independent quadrature, the two-sided comparison, mode counting, and the
// accumulation windows.

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "warpedlab/heat.hpp"
#include "warpedlab/net.hpp"
#include "warpedlab/operators.hpp"
#include "warpedlab/spaces.hpp"
#include "warpedlab/spectra.hpp"
#include "warpedlab/warped.hpp"
#include "warpedlab/actions.hpp"

using namespace warpedlab;

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

TEST_CASE("heat multiplier range and monotonicity") {
  CHECK(heat_sigma(10.0, 0.0) == 0.0);
  double prev = 0.0;
  for (int k = 1; k <= 40; ++k) {
    const double lambda = 4.0 * kPi * kPi * k * k;
    const double s = heat_sigma(10.0, lambda);
    CHECK(s >= prev);
    CHECK(s <= 1.0);
    // Strict growth holds until 1 - sigma = exp(-lambda/t^2) drops below
    // double rounding, after which the multiplier saturates at exactly 1.
    if (1.0 - prev > 1e-12) CHECK(s > prev);
    prev = s;
  }
  CHECK(heat_sigma(10.0, 4.0 * kPi * kPi) < 1.0);
  // Larger level damps the multiplier at fixed lambda.
  CHECK(heat_sigma(20.0, 39.5) < heat_sigma(10.0, 39.5));
  CHECK_THROWS_AS(heat_sigma(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("mode table: ascending energies with correct multiplicities") {
  HeatOperator heat = make_heat_operator(ModelSpace::flat_torus(2), 10.0, 6);
  REQUIRE(!heat.modes.empty());
  CHECK(heat.modes.front().lambda == 0.0);
  CHECK(heat.modes.front().multiplicity == 1);
  double prev = -1.0;
  std::uint64_t total = 0;
  for (const HeatMode& mode : heat.modes) {
    CHECK(mode.lambda >= prev);
    prev = mode.lambda;
    total += mode.multiplicity;
    CHECK(mode.sigma == doctest::Approx(heat_sigma(10.0, mode.lambda)));
  }
  // All integer vectors with |k|_inf <= 6: (2*6+1)^2 of them.
  CHECK(total == 13 * 13);

  // Representative (1,1): signed choices double per nonzero entry -> 4.
  bool found = false;
  for (const HeatMode& mode : heat.modes) {
    if (mode.freq[0] == 1 && mode.freq[1] == 1) {
      CHECK(mode.multiplicity == 4);
      found = true;
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(make_heat_operator(ModelSpace::so3(), 10.0, 4),
                  std::invalid_argument);
}

TEST_CASE("circle symbol: closed form against direct quadrature") {
  // Independent check: the symbol is (t/|B|-normalization-free form)
  // integral over the ball of (1 - cos(2 pi k u)) against t du, i.e.
  // 2t[rho - sin(2 pi k rho)/(2 pi k)] with rho = min(r/t, 1/2).
  const double t = 10.0, r = 0.8;
  const double rho = r / t;
  for (int k = 1; k <= 8; ++k) {
    double quad = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
      const double u = -rho + (i + 0.5) * (2.0 * rho / steps);
      quad += 1.0 - std::cos(2.0 * kPi * k * u);
    }
    quad *= t * (2.0 * rho / steps);
    CHECK(local_symbol_circle(t, r, k) == doctest::Approx(quad).epsilon(1e-7));
  }
  CHECK(local_symbol_circle(t, r, 0) == 0.0);
  // Oracle value pinned by hand (k=1, t=10, r=1):
  // 20 * (0.1 - sin(0.2 pi)/(2 pi)) = 0.1290214...
  CHECK(local_symbol_circle(10.0, 1.0, 1) == doctest::Approx(0.1290214).epsilon(1e-5));
}

TEST_CASE("discrete circle symbol matches the assembled lattice operator") {
  const int n = 256;
  const double t = 10.0, r = 0.8;
  EpsNet net = arithmetic_circle_net(t, n);
  SparseSymmetricOperator local = assemble_local(net, r);

  // Apply to the cosine mode and read the Rayleigh quotient: circulants make
  // it exact to rounding.
  for (int k = 1; k <= 5; ++k) {
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = std::cos(2.0 * kPi * k * i / n);
    const double num = local.quadratic_form(xi);
    double den = 0.0;
    for (int i = 0; i < n; ++i) den += net.weights[i] * xi[i] * xi[i];
    CHECK(num / den ==
          doctest::Approx(local_symbol_circle_discrete(n, t, r, k)).epsilon(1e-10));
  }
  // The discrete symbol approaches the continuum one; the boundary cell of
  // the rectangle sum caps the rate at O(1/n), so ask only for that scale.
  const double cont = local_symbol_circle(t, r, 1);
  const double err_coarse =
      std::abs(local_symbol_circle_discrete(512, t, r, 1) - cont);
  const double err_fine =
      std::abs(local_symbol_circle_discrete(4096, t, r, 1) - cont);
  CHECK(err_fine < err_coarse);
  CHECK(local_symbol_circle_discrete(4096, t, r, 1) ==
        doctest::Approx(cont).epsilon(5e-3));
}

TEST_CASE("torus symbol: Bessel closed form against Monte Carlo") {
  const double t = 10.0, r = 0.9;
  const double rho = r / t;
  Rng rng(246);
  for (const auto [k1, k2] : std::vector<std::pair<int, int>>{{1, 0}, {1, 1}, {2, 1}}) {
    double acc = 0.0;
    const int samples = 400000;
    int inside = 0;
    for (int i = 0; i < samples; ++i) {
      // Rejection sample the disc of radius rho.
      const double x = rho * (2.0 * rng.uniform() - 1.0);
      const double y = rho * (2.0 * rng.uniform() - 1.0);
      if (x * x + y * y > rho * rho) continue;
      ++inside;
      acc += 1.0 - std::cos(2.0 * kPi * (k1 * x + k2 * y));
    }
    const double disc_area = kPi * rho * rho;
    const double mc = t * t * disc_area * acc / inside;
    const double closed = local_symbol_torus2(t, r, k1, k2);
    CHECK(closed == doctest::Approx(mc).epsilon(1e-2));
  }
  CHECK(local_symbol_torus2(t, r, 0, 0) == 0.0);
}

TEST_CASE("comparison constant closed form") {
  CHECK(sandwich_constant(1, 1.0) ==
        doctest::Approx(3.0 * std::sqrt(4.0 * kPi) * std::exp(0.25)).epsilon(1e-14));
  CHECK(sandwich_constant(1, 1.0) == doctest::Approx(13.655255).epsilon(1e-6));
  CHECK(sandwich_constant(2, 1.0) == doctest::Approx(48.406618).epsilon(1e-6));
}

TEST_CASE("two-sided comparison passes on the circle with pinned witnesses") {
  SandwichReport rep =
      sandwich_check(ModelSpace::circle(), {10.0, 20.0, 40.0}, 1.0, 0.01, 500);
  CHECK(rep.pass_upper);
  CHECK(rep.pass_lower);
  CHECK(rep.t0 == doctest::Approx(10.0));
  CHECK(rep.R == 1);
  CHECK(rep.D == doctest::Approx(2.966950).epsilon(1e-3));
  CHECK(rep.max_violation_upper <= 0.0);
  REQUIRE(!rep.rows.empty());
  for (const SandwichRow& row : rep.rows) {
    CHECK(row.margin == doctest::Approx(row.rhs - row.lhs).epsilon(1e-12));
  }
}

TEST_CASE("two-sided comparison passes on the square torus") {
  SandwichReport rep =
      sandwich_check(ModelSpace::flat_torus(2), {10.0, 20.0, 40.0}, 1.0, 0.01, 200);
  CHECK(rep.pass_upper);
  CHECK(rep.pass_lower);
  CHECK_THROWS_AS(sandwich_check(ModelSpace::so3(), {10.0}, 1.0, 0.01, 10),
                  std::invalid_argument);
}

TEST_CASE("mode counting closed form on the circle") {
  const ModelSpace circle = ModelSpace::circle();
  // N(R) = 2 floor(sqrt(R) / (2 pi)) + 1.
  for (double R : {39.0, 40.0, 500.0, 1e4}) {
    const std::uint64_t expected =
        2 * static_cast<std::uint64_t>(std::sqrt(R) / (2.0 * kPi)) + 1;
    CHECK(count_modes_below(circle, R) == expected);
  }
  // Boundary membership: R exactly at 4 pi^2 k^2 includes the mode.
  const double boundary = 4.0 * kPi * kPi * 9.0;
  CHECK(count_modes_below(circle, boundary) == 7);
}

TEST_CASE("mode counting by enumeration on the 2-torus") {
  const ModelSpace torus = ModelSpace::flat_torus(2);
  // Brute-force count for a moderate R.
  const double R = 4.0 * kPi * kPi * 30.0;
  std::uint64_t brute = 0;
  for (int a = -10; a <= 10; ++a) {
    for (int b = -10; b <= 10; ++b) {
      if (4.0 * kPi * kPi * (a * a + b * b) <= R * (1.0 + 1e-12)) ++brute;
    }
  }
  CHECK(count_modes_below(torus, R) == brute);
}

TEST_CASE("counting fits recover the closed-form constants") {
  WeylReport circle = weyl_counting(ModelSpace::circle(), std::pow(500.0 * kPi, 2), 24);
  CHECK(circle.oracle_constant == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(circle.relative_error < 0.02);

  WeylReport torus = weyl_counting(ModelSpace::flat_torus(2),
                                   std::pow(200.0 * kPi, 2), 24);
  CHECK(torus.oracle_constant == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-12));
  CHECK(torus.relative_error < 0.05);
}

TEST_CASE("accumulation windows fill from the threshold level on") {
  AccumulationReport rep = accumulation_scan(
      ModelSpace::circle(), {5.0, 10.0, 20.0, 22.0, 30.0, 40.0}, 0.5, 2.0);
  const std::vector<std::uint64_t> expected = {0, 0, 2, 2, 2, 4};
  REQUIRE(rep.counts.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(rep.counts[i] == expected[i]);
  }
  CHECK(rep.has_threshold);
  CHECK(rep.threshold_t0 == doctest::Approx(20.0));

  // Below the first admissible level every window is empty.
  AccumulationReport low = accumulation_scan(ModelSpace::circle(), {5.0, 10.0}, 0.5);
  CHECK_FALSE(low.has_threshold);
}
