#pragma once

#include <Eigen/SparseCore>
#include <span>

#include "landlaw/lattice.hpp"
#include "landlaw/potentials.hpp"

namespace landlaw {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, std::ptrdiff_t>;

/// H = -Delta + V on the torus: diagonal 2d + v_n, -1 on each of the 2d
/// neighbors. The matrix is symmetric, so its compressed-column storage is also
/// its compressed-row storage.
class Hamiltonian {
 public:
  Hamiltonian(const Torus& t, PotentialField v);

  const Torus& torus() const noexcept { return potential_.torus(); }
  const PotentialField& potential() const noexcept { return potential_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return potential_.size(); }

  /// Matrix-free stencil evaluation of H phi.
  ScalarField apply(std::span<const double> phi) const;
  /// The same product through the assembled sparse matrix.
  ScalarField apply_matrix(std::span<const double> phi) const;
  /// Sum of squared forward differences plus sum of v_n f_n^2.
  double quadratic_form(std::span<const double> f) const;

  /// 4d + V_max with the reference V_max of the potential.
  double spectral_top() const noexcept;

 private:
  PotentialField potential_;
  SparseMatrix matrix_;
};

Hamiltonian assemble(const Torus& t, const PotentialField& v);

/// phi_n (-1)^{s(n)}, s(n) the coordinate sum. Requires K even.
ScalarField dual_vector(const Torus& t, std::span<const double> phi);

/// -Delta + V_max - V, the operator whose spectrum is {4d + V_max - lambda}.
Hamiltonian dual_hamiltonian(const Hamiltonian& h);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace landlaw
