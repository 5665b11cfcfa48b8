#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "landlaw/landscape.hpp"
#include "landlaw/potentials.hpp"
#include "landlaw/spectrum.hpp"

namespace landlaw {

struct EnsembleConfig {
  int dim = 1;
  int side = 0;
  Distribution distribution = Distribution::uniform(0.0, 1.0);
  std::size_t realizations = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> grid;
  bool want_n = true;
  bool want_nu = true;
  bool want_dual = false;
  /// Also average N_u(4d mu) over the same realizations.
  bool want_upper = false;
  bool keep_realizations = false;
  std::size_t threads = 1;
  CountOptions count;
  SolveOptions solve;
};

/// 1 - N_u~(4d + V_max - mu) where u~ is the landscape of the dual operator.
/// NaN where the dual argument falls below the box-counting domain.
CountingCurve dual_nu_curve(const LandscapeField& dual, double top, std::span<const double> grid);

struct RealizationCurves {
  std::vector<double> n;
  std::vector<double> nu;
  std::vector<double> nu_dual;
  /// N_u(4d mu), the right side of the upper law.
  std::vector<double> nu_upper;
};

struct EnsembleResult {
  std::vector<double> grid;
  std::vector<double> mean_n, se_n;
  std::vector<double> mean_nu, se_nu;
  std::vector<double> mean_nu_dual, se_nu_dual;
  std::vector<double> mean_nu_upper, se_nu_upper;
  std::vector<RealizationCurves> realizations;

  CountingCurve curve(CurveKind kind) const;
};

/// Grid points where mean N exceeds mean N_u(4d mu). Needs want_n and want_upper.
std::vector<double> upper_violations(const EnsembleResult& r);

/// Realization i draws its potential from stream (master_seed, i). Means and
/// standard errors sum in realization order, so results do not depend on the
/// number of threads.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

/// Default mu grid: `points` log-spaced values in [1e-3 top, top] with
/// top = 4d + V_max, dropping values below 1/K^2.
std::vector<double> default_grid(int dim, int side, double vmax, std::size_t points = 200);

struct TailWindow {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> points;
  /// Grid points inside the window where E N = 0, excluded from fits.
  std::vector<double> excluded;
};

/// Intersects (K_*/K^2, mu0) with the grid and the domain mu >= 1/K^2.
TailWindow tail_window(const EnsembleConfig& cfg, std::span<const double> mean_n, double mu0, double kstar = 1.0);

}  // namespace landlaw
