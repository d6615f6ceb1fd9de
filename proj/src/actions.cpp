#include "warpedlab/actions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "warpedlab/rng.hpp"

namespace warpedlab {

IsometricAction::IsometricAction(ModelSpace space, std::string name,
                                 std::vector<Generator> gens)
    : space_(space), name_(std::move(name)), gens_(std::move(gens)) {
  for (int s = 0; s < generator_count(); ++s) {
    const int inv = gens_[s].inverse;
    if (inv < 0 || inv >= generator_count() || gens_[inv].inverse != s) {
      throw std::invalid_argument("IsometricAction: generator set is not inverse-closed");
    }
  }
}

Point IsometricAction::apply(int s, const Point& x) const { return gens_.at(s).fn(x); }

namespace {

IsometricAction::Generator identity_generator() {
  return {"e", [](const Point& x) { return x; }, 0, true};
}

}  // namespace

IsometricAction make_circle_rotation() {
  const double alpha = std::sqrt(2.0) - 1.0;
  std::vector<IsometricAction::Generator> gens(3);
  gens[0] = identity_generator();
  gens[1] = {"+a", [alpha](const Point& x) {
               Point y = x;
               y.c[0] = wrap_unit_interval(y.c[0] + alpha);
               return y;
             },
             2, false};
  gens[2] = {"-a", [alpha](const Point& x) {
               Point y = x;
               y.c[0] = wrap_unit_interval(y.c[0] - alpha);
               return y;
             },
             1, false};
  return IsometricAction(ModelSpace::circle(), "circle-rotation", std::move(gens));
}

IsometricAction make_torus_translation(int dim) {
  static const double primes[4] = {2.0, 3.0, 5.0, 7.0};
  if (dim < 1 || dim > 4) throw std::invalid_argument("make_torus_translation: dim in [1,4]");
  std::array<double, 4> v{};
  for (int i = 0; i < dim; ++i) v[i] = wrap_unit_interval(std::sqrt(primes[i]) - 1.0);
  std::vector<IsometricAction::Generator> gens(3);
  gens[0] = identity_generator();
  gens[1] = {"+v", [v, dim](const Point& x) {
               Point y = x;
               for (int i = 0; i < dim; ++i) y.c[i] = wrap_unit_interval(y.c[i] + v[i]);
               return y;
             },
             2, false};
  gens[2] = {"-v", [v, dim](const Point& x) {
               Point y = x;
               for (int i = 0; i < dim; ++i) y.c[i] = wrap_unit_interval(y.c[i] - v[i]);
               return y;
             },
             1, false};
  return IsometricAction(ModelSpace::flat_torus(dim), "torus-translation", std::move(gens));
}

namespace {

Point unit_quaternion(double w, double x, double y, double z) {
  Point q;
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  q.c = {w / n, x / n, y / n, z / n};
  return q;
}

IsometricAction::Generator left_multiplier(const std::string& label, const Point& q,
                                           int inverse) {
  return {label, [q](const Point& x) {
            Point y = quaternion_multiply(q, x);
            canonicalize_quaternion(y);
            return y;
          },
          inverse, false};
}

}  // namespace

IsometricAction make_so3_rational_rotations() {
  const Point a = unit_quaternion(2.0, 1.0, 0.0, 0.0);
  const Point b = unit_quaternion(2.0, 0.0, 0.0, 1.0);
  std::vector<IsometricAction::Generator> gens;
  gens.push_back(identity_generator());
  gens.push_back(left_multiplier("a", a, 2));
  gens.push_back(left_multiplier("a_inv", quaternion_conjugate(a), 1));
  gens.push_back(left_multiplier("b", b, 4));
  gens.push_back(left_multiplier("b_inv", quaternion_conjugate(b), 3));
  return IsometricAction(ModelSpace::so3(), "so3-rational-rotations", std::move(gens));
}

IsometricAction make_odometer(int depth) {
  const ModelSpace space = ModelSpace::cantor_level(depth);
  const std::uint64_t mask = (depth >= 64) ? ~std::uint64_t{0}
                                           : ((std::uint64_t{1} << depth) - 1);
  std::vector<IsometricAction::Generator> gens(3);
  gens[0] = identity_generator();
  gens[1] = {"+1", [mask](const Point& x) {
               Point y = x;
               y.bits = (x.bits + 1) & mask;
               return y;
             },
             2, false};
  gens[2] = {"-1", [mask](const Point& x) {
               Point y = x;
               y.bits = (x.bits + mask) & mask;  // subtract one modulo 2^depth
               return y;
             },
             1, false};
  return IsometricAction(space, "odometer", std::move(gens));
}

IsometricAction make_trivial(const ModelSpace& space) {
  std::vector<IsometricAction::Generator> gens(1);
  gens[0] = identity_generator();
  return IsometricAction(space, "trivial", std::move(gens));
}

IsometricAction make_named_action(const std::string& name, const ModelSpace& space) {
  if (name == "trivial") return make_trivial(space);
  if (name == "circle-rotation") {
    if (space.kind() != SpaceKind::Circle) {
      throw std::invalid_argument("circle-rotation requires the circle space");
    }
    return make_circle_rotation();
  }
  if (name == "torus-translation") {
    if (space.kind() != SpaceKind::FlatTorus) {
      throw std::invalid_argument("torus-translation requires a flat torus space");
    }
    return make_torus_translation(space.dim());
  }
  if (name == "so3-rational-rotations") {
    if (space.kind() != SpaceKind::SO3) {
      throw std::invalid_argument("so3-rational-rotations requires the rotation group space");
    }
    return make_so3_rational_rotations();
  }
  if (name == "odometer") {
    if (space.kind() != SpaceKind::CantorLevel) {
      throw std::invalid_argument("odometer requires a binary-level space");
    }
    return make_odometer(space.depth());
  }
  throw std::invalid_argument("unknown action name: " + name);
}

int word_length(const IsometricAction& action, const std::vector<int>& word) {
  int len = 0;
  for (int s : word) {
    if (s < 0 || s >= action.generator_count()) {
      throw std::invalid_argument("word_length: letter outside the generating set");
    }
    if (!action.is_identity(s)) ++len;
  }
  return len;
}

double max_free_radius(const IsometricAction& action, std::size_t samples,
                       std::uint64_t seed) {
  const ModelSpace& space = action.space();
  std::vector<int> live;  // non-identity generators
  for (int s = 0; s < action.generator_count(); ++s) {
    if (!action.is_identity(s)) live.push_back(s);
  }
  if (live.empty()) return std::numeric_limits<double>::infinity();

  double best = std::numeric_limits<double>::infinity();
  auto visit = [&](const Point& x) {
    std::vector<Point> images;  // the identity image x plus each generator image
    images.reserve(live.size() + 1);
    images.push_back(x);
    for (int s : live) images.push_back(action.apply(s, x));
    for (std::size_t i = 0; i < images.size(); ++i) {
      for (std::size_t j = i + 1; j < images.size(); ++j) {
        best = std::min(best, space.distance(images[i], images[j]));
      }
    }
  };

  if (space.is_finite() && space.point_count() <= (std::uint64_t{1} << 20)) {
    for (std::uint64_t i = 0; i < space.point_count(); ++i) visit(space.enumerate_point(i));
  } else {
    Rng rng(seed);
    for (std::size_t i = 0; i < samples; ++i) visit(space.haar_sample(rng));
  }
  if (best < 1e-10) {
    throw std::domain_error("max_free_radius: action is not free at a sampled point (generator images collide)");
  }
  return 0.99 * 0.5 * best;
}

}  // namespace warpedlab
