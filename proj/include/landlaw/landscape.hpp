#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "landlaw/lattice.hpp"
#include "landlaw/operator.hpp"

namespace landlaw {

enum class SolverKind { Automatic, Direct, ConjugateGradient };

const char* solver_name(SolverKind kind) noexcept;

struct SolveOptions {
  SolverKind kind = SolverKind::Automatic;
  /// Max-norm bound on H u - 1 the solve must reach.
  double tolerance = 1e-10;
  /// Largest K^d handled by sparse Cholesky under Automatic.
  std::size_t direct_limit = 20000;
  /// Constant potentials are outside the estimates' hypotheses; refuse them
  /// unless explicitly allowed.
  bool allow_constant = false;
};

/// u with H u = 1, and the effective potential W = 1/u.
struct LandscapeField {
  Torus torus;
  ScalarField u;
  ScalarField effective;
  double residual_norm = 0.0;
  SolverKind solver = SolverKind::Direct;
  std::size_t iterations = 0;

  /// Wraps externally supplied values (e.g. read from a file). The residual is
  /// unknown and stored as NaN. Values must be strictly positive.
  static LandscapeField from_values(const Torus& t, ScalarField u);
};

LandscapeField solve_landscape(const Hamiltonian& h, const SolveOptions& options = {});

/// |<f,Hf> - sum u_{n+e_i} u_n (grad_i (f/u))^2 - sum f_n^2/u_n|.
double uncertainty_residual(const Hamiltonian& h, const LandscapeField& l, std::span<const double> f);

/// max over anchors of sum_{3Q} u^2 / (sum_Q u^2 + ell^{d+4}) for cubes of
/// side ell. Requires 3 ell <= K.
double scaling_constant(const LandscapeField& l, int ell);

}  // namespace landlaw
