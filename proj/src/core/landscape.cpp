#include "landlaw/landscape.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "landlaw/error.hpp"

namespace landlaw {

const char* solver_name(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::Automatic: return "auto";
    case SolverKind::Direct: return "direct";
    case SolverKind::ConjugateGradient: return "cg";
  }
  return "unknown";
}

LandscapeField LandscapeField::from_values(const Torus& t, ScalarField u) {
  if (u.size() != t.volume()) fail(ErrorCode::DimensionMismatch, "landscape size differs from torus volume");
  LandscapeField l{t, std::move(u), {}, std::numeric_limits<double>::quiet_NaN(), SolverKind::Direct, 0};
  l.effective.resize(l.u.size());
  for (std::size_t n = 0; n < l.u.size(); ++n) {
    if (!(l.u[n] > 0.0) || !std::isfinite(l.u[n]))
      fail(ErrorCode::InvalidArgument, "landscape values must be finite and strictly positive");
    l.effective[n] = 1.0 / l.u[n];
  }
  return l;
}

namespace {

using Vec = Eigen::VectorXd;

double residual_max(const SparseMatrix& a, const Vec& u) { return (a * u - Vec::Ones(u.size())).lpNorm<Eigen::Infinity>(); }

Vec solve_direct(const SparseMatrix& a, double tol, double& residual) {
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<std::ptrdiff_t>> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorCode::SingularOperator, "Cholesky factorization of H failed");
  const Vec b = Vec::Ones(a.rows());
  Vec u = llt.solve(b);
  residual = residual_max(a, u);
  // A couple of refinement sweeps recover the last digits on ill-conditioned fields.
  for (int sweep = 0; sweep < 3 && residual > 0.1 * tol; ++sweep) {
    u += llt.solve(b - a * u);
    residual = residual_max(a, u);
  }
  return u;
}

Vec solve_cg(const SparseMatrix& a, double tol, double& residual, std::size_t& iterations) {
  const auto n = static_cast<double>(a.rows());
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::DiagonalPreconditioner<double>> cg;
  // ||r||_inf <= ||r||_2 = rel * sqrt(n), so this relative target implies the max-norm one.
  cg.setTolerance(std::min(1e-12, 0.5 * tol / std::sqrt(n)));
  cg.setMaxIterations(static_cast<Eigen::Index>(10 * a.rows()));
  cg.compute(a);
  const Vec b = Vec::Ones(a.rows());
  Vec u = cg.solve(b);
  iterations = static_cast<std::size_t>(cg.iterations());
  residual = residual_max(a, u);
  if (cg.info() != Eigen::Success || residual > tol) {
    std::ostringstream os;
    os << "conjugate gradient stopped after " << cg.iterations() << " iterations with residual " << residual;
    fail(ErrorCode::IterationLimit, os.str());
  }
  return u;
}

}  // namespace

LandscapeField solve_landscape(const Hamiltonian& h, const SolveOptions& options) {
  const PotentialField& v = h.potential();
  if (v.is_zero()) fail(ErrorCode::SingularOperator, "V is identically 0, so H is singular on the torus");
  if (v.is_constant() && !options.allow_constant)
    fail(ErrorCode::Precondition, "constant potential refused (set allow_constant to override)");

  SolverKind kind = options.kind;
  if (kind == SolverKind::Automatic)
    kind = h.size() <= options.direct_limit ? SolverKind::Direct : SolverKind::ConjugateGradient;

  double residual = 0.0;
  std::size_t iterations = 0;
  Vec u = kind == SolverKind::Direct ? solve_direct(h.matrix(), options.tolerance, residual)
                                     : solve_cg(h.matrix(), options.tolerance, residual, iterations);
  if (residual > options.tolerance) {
    std::ostringstream os;
    os << "landscape residual " << residual << " exceeds tolerance " << options.tolerance;
    fail(ErrorCode::IterationLimit, os.str());
  }
  LandscapeField l{h.torus(), ScalarField(u.data(), u.data() + u.size()), {}, residual, kind, iterations};
  l.effective.resize(l.u.size());
  for (std::size_t n = 0; n < l.u.size(); ++n) {
    if (!(l.u[n] > 0.0)) fail(ErrorCode::SingularOperator, "landscape lost positivity; operator is numerically singular");
    l.effective[n] = 1.0 / l.u[n];
  }
  return l;
}

double uncertainty_residual(const Hamiltonian& h, const LandscapeField& l, std::span<const double> f) {
  const Torus& t = h.torus();
  if (!(l.torus == t) || f.size() != t.volume())
    fail(ErrorCode::DimensionMismatch, "fields do not live on the operator's torus");
  const double form = h.quadratic_form(f);
  double grad = 0.0;
  double pot = 0.0;
  for (std::size_t n = 0; n < t.volume(); ++n) {
    for (int i = 0; i < t.dim(); ++i) {
      const std::size_t m = t.step(n, i, 1);
      const double g = f[m] / l.u[m] - f[n] / l.u[n];
      grad += l.u[m] * l.u[n] * g * g;
    }
    pot += f[n] * f[n] / l.u[n];
  }
  return std::abs(form - grad - pot);
}

namespace {

// Sum of `values` over the box of side `len` anchored at every torus site.
std::vector<double> cyclic_box_sums(const Torus& t, std::vector<double> values, int len) {
  const auto k = static_cast<std::size_t>(t.side());
  std::vector<double> next(values.size());
  for (int axis = 0; axis < t.dim(); ++axis) {
    const std::size_t stride = t.stride(axis);
    for (std::size_t start = 0; start < values.size(); ++start) {
      if (t.coord(start, axis) != 0) continue;
      // start is the first site of a line along `axis`.
      auto at = [&](std::size_t c) { return values[start + (c % k) * stride]; };
      double window = 0.0;
      for (int j = 0; j < len; ++j) window += at(static_cast<std::size_t>(j));
      for (std::size_t c = 0; c < k; ++c) {
        next[start + c * stride] = window;
        window += at(c + static_cast<std::size_t>(len)) - at(c);
      }
    }
    values.swap(next);
  }
  return values;
}

}  // namespace

double scaling_constant(const LandscapeField& l, int ell) {
  const Torus& t = l.torus;
  if (ell < 1 || 3 * ell > t.side())
    fail(ErrorCode::Scale, "scaling audit needs 1 <= ell and 3*ell <= K (ell=" + std::to_string(ell) + ")");
  std::vector<double> sq(l.u.size());
  for (std::size_t n = 0; n < sq.size(); ++n) sq[n] = l.u[n] * l.u[n];
  const auto single = cyclic_box_sums(t, sq, ell);
  const auto triple = cyclic_box_sums(t, sq, 3 * ell);
  const double floor_term = std::pow(static_cast<double>(ell), t.dim() + 4);
  double best = 0.0;
  Coord c;
  for (std::size_t n = 0; n < sq.size(); ++n) {
    c = t.coords(n);
    for (int& x : c) x -= ell;
    best = std::max(best, triple[t.index(c)] / (single[n] + floor_term));
  }
  return best;
}

}  // namespace landlaw
