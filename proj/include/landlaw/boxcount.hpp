#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "landlaw/landscape.hpp"
#include "landlaw/lattice.hpp"
#include "landlaw/spectrum.hpp"

namespace landlaw {

/// ceil(mu^{-1/2}), snapping to an integer when mu^{-1/2} is within 1e-9 of it.
int s_of_mu(double mu);

/// Smallest mu with s(mu) <= K.
inline double min_box_mu(int side) { return 1.0 / (static_cast<double>(side) * side); }

/// Number of boxes of `p` on which min W <= mu.
std::size_t qualifying_boxes(const Torus& t, std::span<const double> effective, const Partition& p, double mu);

/// N_u(mu): K^{-d} times the number of boxes of P(s(mu)) (translated by
/// `shift`) with min 1/u <= mu.
double box_counting(const LandscapeField& l, double mu, std::span<const int> shift = {});

CountingCurve nu_curve(const LandscapeField& l, std::span<const double> grid);

struct Violation {
  double mu;
  double lhs;
  double rhs;
};

struct ScalingFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double sup_distance = 0.0;
  std::size_t points = 0;
};

/// A Landscape-Law inequality evaluated on a grid. `margin` is signed:
/// negative means the inequality failed at that point.
struct LawReport {
  std::string check;
  std::vector<double> grid;
  std::vector<double> lhs;
  std::vector<double> rhs;
  std::vector<double> margin;
  std::vector<Violation> violations;
  /// Grid points dropped because an N_u argument fell below the box-counting domain.
  std::vector<double> truncated;
  std::optional<ScalingFit> fitted;

  bool holds() const noexcept { return violations.empty(); }
};

/// N(mu) <= N_u(4 d mu) at every grid point, with fresh box counts.
LawReport upper_bound_check(const CountingCurve& n, const LandscapeField& l);

struct LowerBoundConstants {
  double c0 = 0.0;
  double big_c0 = 0.0;
  double c1 = 1.0;
};

/// N(mu) >= c0 a^d N_u(c1 a^{d+2} mu) - C0 N_u(c1 a^{d+4} mu) with trial constants.
LawReport lower_bound_check(const CountingCurve& n, const LandscapeField& l, double alpha,
                            const LowerBoundConstants& constants);

/// Scale factors c2 searched by fit_scaling: 61 log-spaced points on [0.1, 10].
std::vector<double> scaling_fit_grid();

/// Best (c1, c2) in sup-distance for N(mu) ~ c1 model(c2 mu). The model
/// returns nullopt where it is undefined; such points are skipped.
ScalingFit fit_scaling(const CountingCurve& n, const std::function<std::optional<double>(double)>& model);

/// fit_scaling against the landscape box-counting function of `l`.
ScalingFit fit_scaling(const CountingCurve& n, const LandscapeField& l);

/// fit_scaling against the average of the box-counting functions of several
/// landscapes on the same torus.
ScalingFit fit_scaling(const CountingCurve& n, std::span<const LandscapeField* const> landscapes);

/// Least-squares slope of log(-log E N) against log mu on [lo, hi].
double lifschitz_fit(const CountingCurve& mean, int dim, double lo, double hi);

}  // namespace landlaw
