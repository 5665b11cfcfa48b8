#pragma once

// Dirichlet problems on boxes of Z^d (no periodic wrap): the discrete Poisson
// kernel and Green's function of a centered cube, plus executable forms of the
// maximum principle, Poincare, sub-mean, Moser-Harnack, Harnack and
// Chernoff-Hoeffding estimates.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "landlaw/lattice.hpp"

namespace landlaw {

/// Box in Z^d with local coordinates 0..len_i-1, indexed row-major.
class Box {
 public:
  explicit Box(std::vector<int> lengths);
  static Box cube(int dim, int side);

  int dim() const noexcept { return static_cast<int>(lengths_.size()); }
  std::size_t size() const noexcept { return size_; }
  const std::vector<int>& lengths() const noexcept { return lengths_; }
  int max_length() const noexcept;

  std::size_t index(std::span<const int> c) const;
  Coord coords(std::size_t idx) const;
  bool contains(std::span<const int> c) const noexcept;
  std::optional<std::size_t> neighbor(std::size_t idx, int axis, int step) const;

  /// Number of axes along which the site touches a face.
  int boundary_axes(std::size_t idx) const;
  bool on_boundary(std::size_t idx) const { return boundary_axes(idx) > 0; }

  std::vector<std::size_t> interior() const;
  std::vector<std::size_t> boundary() const;
  std::vector<std::size_t> flat_boundary() const;

 private:
  std::vector<int> lengths_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// -(Delta f)_n = 2d f_n - sum of the 2d neighbors; n must be interior.
double neg_laplacian(const Box& box, std::span<const double> f, std::size_t n);

/// (-Delta + V) u = f on the interior, u = h on the boundary. Arrays are over
/// the whole box; entries of f on the boundary and of h in the interior are
/// ignored. An empty V means V = 0.
ScalarField solve_box_dirichlet(const Box& box, std::span<const double> v, std::span<const double> f,
                                std::span<const double> h);

/// Largest radius for which cube kernels are computed (memory guard).
int kernel_radius_cap(int dim) noexcept;

/// Q(r; xi) = {|m - xi|_inf <= r}, with xi the center of a (2r+1)^d box.
class CubeProblem {
 public:
  CubeProblem(int dim, int radius);

  int dim() const noexcept { return box_.dim(); }
  int radius() const noexcept { return radius_; }
  const Box& box() const noexcept { return box_; }
  std::size_t size() const noexcept { return box_.size(); }
  std::size_t center() const noexcept { return center_; }
  /// Sup-distance from the center.
  int shell(std::size_t idx) const;
  /// Index in this cube of the site at the same offset from the center as
  /// `idx` in a cube of radius `from_radius`.
  std::size_t embed(std::size_t idx, int from_radius) const;

 private:
  int radius_;
  Box box_;
  std::size_t center_;
};

/// -(Delta u) = f on Q(r-1), u = h on dQ(r). Full-cube arrays as for
/// solve_box_dirichlet. r = 0 returns h.
ScalarField dirichlet_solve(const CubeProblem& p, std::span<const double> f, std::span<const double> h);

/// Green's function G_r(., pole) over the full cube (zero on the boundary).
ScalarField green_column(const CubeProblem& p, std::size_t pole);

/// G_r on Q(r-1) x Q(r-1), rows/columns in interior order of the box.
Eigen::MatrixXd green_matrix(const CubeProblem& p);

enum class PoissonPath { FromGreen, BoundaryDeltas };

struct DirichletKernels {
  int dim = 0;
  int radius = 0;
  /// P_r(xi, m), full-cube array, nonzero only on dQ(r).
  ScalarField poisson;
  /// G_r(xi, m), full-cube array.
  ScalarField green;
  /// p_n = |dQ(rho)| P_rho(xi, n) with rho = |n - xi|_inf, full-cube array.
  ScalarField weights;
};

/// Kernels with pole at the center. FromGreen reads P off the normal
/// derivative of G_r(xi, .); BoundaryDeltas solves one harmonic extension per
/// boundary site.
DirichletKernels kernels(const CubeProblem& p, PoissonPath path = PoissonPath::FromGreen);

/// |u_xi - sum P u + sum G (Delta u)|.
double ibp_residual(const CubeProblem& p, const DirichletKernels& k, std::span<const double> u);

struct SurfaceAverages {
  std::vector<double> a;       ///< a_rho, rho = 0..R
  std::vector<double> big_a;   ///< A_rho, rho = 0..R
  std::vector<double> margin;  ///< a_rho - u_xi + rho^2
  double min_margin = 0.0;
};

/// a_rho = sum_{dQ(rho)} P_rho(xi, n) u_n and A_rho = |Q(rho)|^{-1} sum_{Q(rho)} p_n u_n.
SurfaceAverages surface_averages(const CubeProblem& p, const DirichletKernels& k, std::span<const double> u);

struct MaxPrincipleResult {
  bool pass = true;
  double interior_min = 0.0;
  double flat_boundary_min = 0.0;
  /// Lower bound applied to the interior minimum.
  double bound = 0.0;
  std::optional<std::size_t> witness;
};

/// For f with -(Delta f) + v f >= 0 on the interior: min over the interior is
/// at least min over the flat boundary when v = 0, and at least
/// min(flat-boundary min, 0) otherwise. Throws Precondition if f is not a
/// sub-solution.
MaxPrincipleResult max_principle_check(const Box& box, std::span<const double> v, std::span<const double> f);

struct PoincareResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = true;
};

/// sum (f - mean)^2 <= (d/2) l_max^2 sum over interior edges (grad f)^2.
PoincareResult poincare_check(const Box& box, std::span<const double> f);

/// f_xi / (r^{1-d} sum_{dQ} f) for nonnegative subharmonic f on Q(r).
double submean_ratio(const CubeProblem& p, std::span<const double> f);

/// (sum_{3 Omega} g^2 / l^d + l^4) / sup_Omega g^2 for g >= 0 with
/// -(Delta g) <= 1 on the box 3 Omega of side 3l; Omega is its middle cube.
double moser_harnack_ratio(int dim, int ell, std::span<const double> g);

struct HarnackResult {
  bool pass = true;
  double sup = 0.0;
  double inf = 0.0;
  /// log of the chain constant (2d + V_max)^{d l(Q)}.
  double log_constant = 0.0;
};

/// sup_Q f <= (2d + V_max)^{d l(Q)} inf_Q f for a nonnegative super-solution
/// of -Delta + v on `omega`; Q must sit inside the interior of omega.
HarnackResult harnack_check(const Box& omega, std::span<const double> v, double vmax, std::span<const double> f,
                            const Cube& q);

double kl_divergence(double x, double y);
/// exp(-D(1 - lambda || p) |B|).
double chernoff_bound(std::size_t block, double p, double lambda);
/// Empirical P{sum of |B| Bernoulli(p) >= (1 - lambda)|B|} over `trials` draws.
double chernoff_frequency(std::size_t block, double p, double lambda, std::size_t trials, std::uint64_t seed);

}  // namespace landlaw
