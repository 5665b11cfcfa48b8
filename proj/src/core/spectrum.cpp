#include "landlaw/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>
#include <optional>
#include <sstream>

#include "landlaw/error.hpp"

namespace landlaw {

std::size_t Spectrum::count_leq(double mu) const {
  const double edge = mu + tie_guard(mu);
  return static_cast<std::size_t>(std::upper_bound(eigenvalues.begin(), eigenvalues.end(), edge) - eigenvalues.begin());
}

std::size_t Spectrum::count_lt(double mu) const {
  const double edge = mu - tie_guard(mu);
  return static_cast<std::size_t>(std::lower_bound(eigenvalues.begin(), eigenvalues.end(), edge) - eigenvalues.begin());
}

Spectrum full_spectrum(const Hamiltonian& h) {
  const Eigen::MatrixXd dense = Eigen::MatrixXd(h.matrix());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::SingularOperator, "dense eigensolver did not converge");
  Spectrum s;
  s.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
  return s;
}

InertiaResult shifted_inertia(const Hamiltonian& h, double shift) {
  SparseMatrix shifted = h.matrix();
  for (Eigen::Index k = 0; k < shifted.outerSize(); ++k) shifted.coeffRef(k, k) -= shift;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<std::ptrdiff_t>> ldlt(shifted);
  const double scale = h.spectral_top() + std::abs(shift);
  if (ldlt.info() != Eigen::Success) fail(ErrorCode::ShiftDegeneracy, "LDL^T broke down at the shift");
  const auto& diag = ldlt.vectorD();
  InertiaResult r;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double p = diag[i];
    if (!std::isfinite(p) || std::abs(p) <= 1e-14 * scale)
      fail(ErrorCode::ShiftDegeneracy, "vanishing pivot in LDL^T at the shift");
    if (p < 0.0) ++r.negatives;
  }
  // The computed factors are exact for H - shift + E with
  // |E| <= gamma |L||D||L^T|, so eigenvalues move by at most
  // gamma * max row sum of |L||D||L^T|.
  const auto& l = ldlt.matrixL().nestedExpression();
  using Inner = std::remove_cvref_t<decltype(l)>::InnerIterator;
  const Eigen::Index n = diag.size();
  Eigen::VectorXd colsum = Eigen::VectorXd::Ones(n);
  Eigen::VectorXi rownnz = Eigen::VectorXi::Ones(n);
  for (Eigen::Index j = 0; j < l.outerSize(); ++j)
    for (Inner it(l, j); it; ++it)
      if (it.row() > j) {
        colsum[j] += std::abs(it.value());
        ++rownnz[it.row()];
      }
  const Eigen::VectorXd w = diag.cwiseAbs().cwiseProduct(colsum);
  Eigen::VectorXd rowsum = w;
  for (Eigen::Index j = 0; j < l.outerSize(); ++j)
    for (Inner it(l, j); it; ++it)
      if (it.row() > j) rowsum[it.row()] += std::abs(it.value()) * w[j];
  const double u = std::numeric_limits<double>::epsilon() / 2.0;
  r.error_bound = 4.0 * (rownnz.maxCoeff() + 1) * u * rowsum.maxCoeff();
  return r;
}

std::size_t inertia_negative_count(const Hamiltonian& h, double shift) { return shifted_inertia(h, shift).negatives; }

namespace {

bool use_dense(const Hamiltonian& h, const CountOptions& o) {
  switch (o.method) {
    case CountMethod::Dense: return true;
    case CountMethod::Inertia: return false;
    case CountMethod::Automatic: return h.size() <= o.dense_limit;
  }
  return true;
}

// Number of eigenvalues below `shift`, or nullopt when no eigenvalue-free
// neighborhood of the shift can be certified. A count c(x) computed with
// error bound e lies in [N(x - e), N(x + e)]; equal counts at shift -/+ 3e
// with bounds <= 2e pin N down on [shift - e, shift + e].
std::optional<std::size_t> certified_count(const Hamiltonian& h, double shift, double tolerance) {
  const InertiaResult mid = shifted_inertia(h, shift);
  if (mid.error_bound <= tolerance) return mid.negatives;
  const double e = mid.error_bound;
  const InertiaResult lo = shifted_inertia(h, shift - 3.0 * e);
  const InertiaResult hi = shifted_inertia(h, shift + 3.0 * e);
  if (lo.negatives == hi.negatives && lo.error_bound <= 2.0 * e && hi.error_bound <= 2.0 * e) return lo.negatives;
  return std::nullopt;
}

// direction +1 counts lambda <= mu, -1 counts lambda < mu.
std::size_t inertia_count(const Hamiltonian& h, double mu, int direction) {
  double guard = tie_guard(mu);
  for (int attempt = 0; attempt <= 3; ++attempt, guard *= 2.0) {
    try {
      if (const auto c = certified_count(h, mu + direction * guard, 0.5 * guard)) return *c;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ShiftDegeneracy) throw;
    }
  }
  if (h.size() <= kDenseFallbackLimit) {
    const Spectrum s = full_spectrum(h);
    return direction > 0 ? s.count_leq(mu) : s.count_lt(mu);
  }
  std::ostringstream os;
  os.precision(17);
  os << "shift " << mu << " stays degenerate after 3 tie-guard doublings";
  fail(ErrorCode::ShiftDegeneracy, os.str());
}

// Counts at many shifts, reusing one eigendecomposition when dense.
class Counter {
 public:
  Counter(const Hamiltonian& h, const CountOptions& o) : h_(h) {
    if (use_dense(h, o)) spectrum_ = full_spectrum(h);
  }
  std::size_t leq(double mu) const { return spectrum_ ? spectrum_->count_leq(mu) : inertia_count(h_, mu, +1); }
  std::size_t lt(double mu) const { return spectrum_ ? spectrum_->count_lt(mu) : inertia_count(h_, mu, -1); }

 private:
  const Hamiltonian& h_;
  std::optional<Spectrum> spectrum_;
};

}  // namespace

std::size_t count_leq(const Hamiltonian& h, double mu, const CountOptions& options) {
  if (use_dense(h, options)) return full_spectrum(h).count_leq(mu);
  return inertia_count(h, mu, +1);
}

std::size_t count_lt(const Hamiltonian& h, double mu, const CountOptions& options) {
  if (use_dense(h, options)) return full_spectrum(h).count_lt(mu);
  return inertia_count(h, mu, -1);
}

const char* curve_kind_name(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::N: return "N";
    case CurveKind::NStrict: return "N_strict";
    case CurveKind::Nu: return "N_u";
    case CurveKind::NuDual: return "N_u_dual";
    case CurveKind::MeanN: return "mean_N";
    case CurveKind::MeanNu: return "mean_N_u";
    case CurveKind::MeanNuDual: return "mean_N_u_dual";
  }
  return "unknown";
}

CurveKind parse_curve_kind(const std::string& name) {
  for (CurveKind k : {CurveKind::N, CurveKind::NStrict, CurveKind::Nu, CurveKind::NuDual, CurveKind::MeanN,
                      CurveKind::MeanNu, CurveKind::MeanNuDual})
    if (name == curve_kind_name(k)) return k;
  fail(ErrorCode::Io, "unknown curve kind '" + name + "'");
}

bool CountingCurve::nondecreasing() const noexcept {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1]) return false;
  return true;
}

namespace {

void require_sorted(std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) fail(ErrorCode::InvalidArgument, "mu grid must be sorted");
  for (double mu : grid)
    if (!std::isfinite(mu)) fail(ErrorCode::InvalidArgument, "mu grid must be finite");
}

}  // namespace

CountingCurve ids_curve(const Hamiltonian& h, std::span<const double> grid, const CountOptions& options) {
  require_sorted(grid);
  const Counter counter(h, options);
  CountingCurve c;
  c.kind = CurveKind::N;
  c.grid.assign(grid.begin(), grid.end());
  c.values.reserve(grid.size());
  const auto volume = static_cast<double>(h.size());
  for (double mu : grid) c.values.push_back(static_cast<double>(counter.leq(mu)) / volume);
  c.metadata["d"] = std::to_string(h.torus().dim());
  c.metadata["K"] = std::to_string(h.torus().side());
  return c;
}

std::int64_t dual_identity_check(const Hamiltonian& h, std::span<const double> grid, const CountOptions& options) {
  if (h.torus().side() % 2 != 0) fail(ErrorCode::Parity, "dual identity needs an even torus side K");
  require_sorted(grid);
  const Hamiltonian dual = dual_hamiltonian(h);
  const Counter direct(h, options);
  const Counter reflected(dual, options);
  const double top = h.spectral_top();
  const auto volume = static_cast<std::int64_t>(h.size());
  std::int64_t worst = 0;
  for (double mu : grid) {
    const auto total = static_cast<std::int64_t>(direct.leq(mu)) + static_cast<std::int64_t>(reflected.lt(top - mu));
    worst = std::max(worst, std::abs(total - volume));
  }
  return worst;
}

}  // namespace landlaw
