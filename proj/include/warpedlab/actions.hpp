#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "warpedlab/spaces.hpp"

namespace warpedlab {

// A finite symmetric generating set acting on a model space by isometries.
// Generators are stored as closures; inverse_index pairs each generator with
// its inverse so symmetry of the induced operators can be asserted directly.
class IsometricAction {
 public:
  struct Generator {
    std::string label;
    std::function<Point(const Point&)> fn;
    int inverse = -1;     // index of the inverse generator within the set
    bool identity = false;
  };

  IsometricAction(ModelSpace space, std::string name, std::vector<Generator> gens);

  const ModelSpace& space() const { return space_; }
  const std::string& name() const { return name_; }
  int generator_count() const { return static_cast<int>(gens_.size()); }
  Point apply(int s, const Point& x) const;
  int inverse_index(int s) const { return gens_.at(s).inverse; }
  bool is_identity(int s) const { return gens_.at(s).identity; }
  const std::string& generator_label(int s) const { return gens_.at(s).label; }

 private:
  ModelSpace space_;
  std::string name_;
  std::vector<Generator> gens_;
};

// Catalog. Every generating set is symmetric and contains the identity as
// its first element, so |S| counts the identity letter. Rotation angles are
// fixed irrational constants so orbits never close; the odometer is the +1
// map on binary digit strings.
IsometricAction make_circle_rotation();               // S = {e, +a, -a}, a = sqrt(2)-1
IsometricAction make_torus_translation(int dim);      // S = {e, +v, -v}, v_k = sqrt(p_k)-1
IsometricAction make_so3_rational_rotations();        // S = {e, a, a^-1, b, b^-1}
IsometricAction make_odometer(int depth);             // S = {e, +1, -1} mod 2^depth
IsometricAction make_trivial(const ModelSpace& space);  // S = {e}

// Dispatch by catalog name; validates that the space matches the action.
// Names: "circle-rotation", "torus-translation", "so3-rational-rotations",
// "odometer", "trivial".
IsometricAction make_named_action(const std::string& name, const ModelSpace& space);

// Number of non-identity letters in a word over the generating set.
int word_length(const IsometricAction& action, const std::vector<int>& word);

// Largest radius (unscaled metric, with a 1% safety margin) at which the
// generator images of every sampled point, together with the point itself,
// stay pairwise more than two radii apart. Level-t discretizations remain
// faithful to the action as long as r/t stays below this value. Returns
// +infinity when the generating set is only the identity; throws
// std::domain_error if two images collide (the action is not free there).
// Finite spaces are enumerated exactly; continuous spaces are sampled.
double max_free_radius(const IsometricAction& action, std::size_t samples = 10000,
                       std::uint64_t seed = 777);

}  // namespace warpedlab
