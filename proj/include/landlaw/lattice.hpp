#pragma once

// Torus geometry for the periodic lattice (Z/KZ)^d.
//
// Coordinates are 0-based: site coordinate k corresponds to the congruence
// class k+1 in the usual {1..K}^d labelling. Sites are linearized row-major
// with axis 0 most significant; every module uses this single bijection.

#include <cstddef>
#include <span>
#include <vector>

namespace landlaw {

using Coord = std::vector<int>;
using ScalarField = std::vector<double>;

class Torus {
 public:
  Torus(int dim, int side);

  int dim() const noexcept { return dim_; }
  int side() const noexcept { return side_; }
  std::size_t volume() const noexcept { return volume_; }
  std::size_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }

  /// Linear index of a coordinate vector; components are reduced modulo K.
  std::size_t index(std::span<const int> c) const;
  Coord coords(std::size_t site) const;
  int coord(std::size_t site, int axis) const {
    return static_cast<int>((site / strides_[static_cast<std::size_t>(axis)]) %
                            static_cast<std::size_t>(side_));
  }

  /// Site reached from `site` by `step` unit moves along `axis` (wrapping).
  std::size_t step(std::size_t site, int axis, int step) const;

  /// The 2d nearest neighbors, ordered (+e_0, -e_0, +e_1, -e_1, ...).
  std::vector<std::size_t> neighbors(std::size_t site) const;

  friend bool operator==(const Torus& a, const Torus& b) noexcept {
    return a.dim_ == b.dim_ && a.side_ == b.side_;
  }

 private:
  int dim_;
  int side_;
  std::size_t volume_;
  std::vector<std::size_t> strides_;
};

Torus make_torus(int dim, int side);

/// Axis-aligned box: anchor (lowest corner) plus per-axis extents. On a torus
/// the anchor may sit anywhere and the box wraps; as a Z^d box it does not.
struct Cube {
  Coord anchor;
  std::vector<int> lengths;

  Cube() = default;
  Cube(Coord a, std::vector<int> l);
  static Cube regular(Coord a, int side);

  int dim() const noexcept { return static_cast<int>(lengths.size()); }
  bool is_regular() const noexcept;
  /// Largest extent; the side length for regular cubes.
  int side() const noexcept;
  std::size_t cardinality() const noexcept;

  /// Sites of the cube on the torus, in local row-major order.
  std::vector<std::size_t> sites(const Torus& t) const;
  /// Local (0-based, per-axis offset from the anchor) coordinates of a local
  /// row-major position.
  Coord local(std::size_t position) const;
};

/// Per-axis interval lengths of the 1-d partition P_1(s): q copies of s then
/// the remainder r when K = q*s + r, 0 < r < s.
std::vector<int> interval_lengths(int side, int s);

struct Partition {
  int side = 0;
  Coord shift;
  std::vector<Cube> boxes;
};

/// P(s) on the torus, translated by `shift` (each component in [0, s-1]).
Partition partition(const Torus& t, int s, std::span<const int> shift = {});

/// Middle third of the interval [a, a+r-1]: returns (start, length) with
/// start a + ceil(r/3) and length floor(r/3). Requires r >= 3.
std::pair<int, int> middle_third(int start, int length);

Cube tripled(const Torus& t, const Cube& q);
Cube middle_third(const Cube& q);
/// Inner boundary: sites with n+e_i or n-e_i outside Q for some axis i.
std::vector<std::size_t> boundary(const Torus& t, const Cube& q);
/// Boundary sites on exactly one face (corners removed).
std::vector<std::size_t> flat_boundary(const Torus& t, const Cube& q);

struct CubeSets {
  Cube tripled;
  Cube middle;
  std::vector<std::size_t> boundary;
  std::vector<std::size_t> flat_boundary;
};

CubeSets cube_sets(const Torus& t, const Cube& q);

/// Discrete cut-off supported on Q: 1 on Q/3, 1 - (3/R) j on the shell at
/// sup-distance j from Q/3, 0 outside 3(Q/3). Q must be regular, 3 <= R <= K.
ScalarField cutoff(const Torus& t, const Cube& q);

/// Forward differences, d components per site, stored site-major.
struct VectorField {
  int dim = 0;
  std::vector<double> data;

  double component(std::size_t site, int axis) const {
    return data[site * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis)];
  }
  double squared_norm(std::size_t site) const;
};

VectorField gradient(const Torus& t, std::span<const double> f);

}  // namespace landlaw
