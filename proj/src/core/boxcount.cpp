#include "landlaw/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "landlaw/error.hpp"

namespace landlaw {

int s_of_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) fail(ErrorCode::InvalidDomain, "s(mu) needs mu > 0");
  const double x = 1.0 / std::sqrt(mu);
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9) return std::max(1, static_cast<int>(nearest));
  if (x > static_cast<double>(std::numeric_limits<int>::max())) return std::numeric_limits<int>::max();
  return std::max(1, static_cast<int>(std::ceil(x)));
}

std::size_t qualifying_boxes(const Torus& t, std::span<const double> effective, const Partition& p, double mu) {
  if (effective.size() != t.volume()) fail(ErrorCode::DimensionMismatch, "field size differs from torus volume");
  std::size_t count = 0;
  for (const Cube& box : p.boxes) {
    for (std::size_t site : box.sites(t)) {
      if (effective[site] <= mu) {
        ++count;
        break;
      }
    }
  }
  return count;
}

double box_counting(const LandscapeField& l, double mu, std::span<const int> shift) {
  const int s = s_of_mu(mu);
  const Torus& t = l.torus;
  if (s > t.side()) {
    std::ostringstream os;
    os.precision(17);
    os << "mu=" << mu << " gives s(mu)=" << s << " > K=" << t.side() << "; smallest admissible mu is "
       << min_box_mu(t.side());
    fail(ErrorCode::Scale, os.str());
  }
  const Partition p = partition(t, s, shift);
  return static_cast<double>(qualifying_boxes(t, l.effective, p, mu)) / static_cast<double>(t.volume());
}

CountingCurve nu_curve(const LandscapeField& l, std::span<const double> grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) fail(ErrorCode::InvalidArgument, "mu grid must be sorted");
  CountingCurve c;
  c.kind = CurveKind::Nu;
  c.grid.assign(grid.begin(), grid.end());
  for (double mu : grid) c.values.push_back(box_counting(l, mu));
  c.metadata["d"] = std::to_string(l.torus.dim());
  c.metadata["K"] = std::to_string(l.torus.side());
  c.metadata["shift"] = "0";
  return c;
}

namespace {

std::optional<double> nu_or_none(const LandscapeField& l, double mu) {
  if (!(mu > 0.0) || mu < min_box_mu(l.torus.side()) || s_of_mu(mu) > l.torus.side()) return std::nullopt;
  return box_counting(l, mu);
}

void require_same_torus(const CountingCurve& n, const LandscapeField& l) {
  if (n.grid.size() != n.values.size()) fail(ErrorCode::DimensionMismatch, "curve grid and values differ in length");
  auto it = n.metadata.find("K");
  if (it != n.metadata.end() && it->second != std::to_string(l.torus.side()))
    fail(ErrorCode::DimensionMismatch, "curve and landscape come from different tori");
}

}  // namespace

LawReport upper_bound_check(const CountingCurve& n, const LandscapeField& l) {
  require_same_torus(n, l);
  LawReport r;
  r.check = "upper";
  const double c1 = 4.0 * l.torus.dim();
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double mu = n.grid[i];
    const auto rhs = nu_or_none(l, c1 * mu);
    if (!rhs) {
      r.truncated.push_back(mu);
      continue;
    }
    r.grid.push_back(mu);
    r.lhs.push_back(n.values[i]);
    r.rhs.push_back(*rhs);
    r.margin.push_back(*rhs - n.values[i]);
    if (n.values[i] > *rhs) r.violations.push_back({mu, n.values[i], *rhs});
  }
  return r;
}

LawReport lower_bound_check(const CountingCurve& n, const LandscapeField& l, double alpha,
                            const LowerBoundConstants& k) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  require_same_torus(n, l);
  const int d = l.torus.dim();
  LawReport r;
  r.check = "lower";
  const double lead = k.c0 * std::pow(alpha, d);
  const double near = k.c1 * std::pow(alpha, d + 2);
  const double far = k.c1 * std::pow(alpha, d + 4);
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double mu = n.grid[i];
    std::optional<double> a = 0.0;
    std::optional<double> b = 0.0;
    if (lead != 0.0) a = nu_or_none(l, near * mu);
    if (k.big_c0 != 0.0) b = nu_or_none(l, far * mu);
    if (!a || !b) {
      r.truncated.push_back(mu);
      continue;
    }
    const double rhs = lead * *a - k.big_c0 * *b;
    r.grid.push_back(mu);
    r.lhs.push_back(n.values[i]);
    r.rhs.push_back(rhs);
    r.margin.push_back(n.values[i] - rhs);
    if (n.values[i] < rhs) r.violations.push_back({mu, n.values[i], rhs});
  }
  return r;
}

std::vector<double> scaling_fit_grid() {
  constexpr int kPoints = 61;
  std::vector<double> g;
  for (int i = 0; i < kPoints; ++i) g.push_back(std::pow(10.0, -1.0 + 2.0 * i / (kPoints - 1)));
  return g;
}

namespace {

double sup_distance(std::span<const double> a, std::span<const double> g, double c) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - c * g[i]));
  return worst;
}

// Minimizes the convex function c -> max_i |a_i - c g_i| over c >= 0.
std::pair<double, double> best_multiplier(std::span<const double> a, std::span<const double> g) {
  const double amax = *std::max_element(a.begin(), a.end());
  const double gmax = *std::max_element(g.begin(), g.end());
  if (gmax <= 0.0) return {1.0, sup_distance(a, g, 1.0)};
  double lo = 0.0;
  double hi = 2.0 * std::max(amax, 1e-300) / gmax;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = sup_distance(a, g, x1);
  double f2 = sup_distance(a, g, x2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = sup_distance(a, g, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = sup_distance(a, g, x2);
    }
  }
  const double c = 0.5 * (lo + hi);
  return {c, sup_distance(a, g, c)};
}

}  // namespace

ScalingFit fit_scaling(const CountingCurve& n, const std::function<std::optional<double>(double)>& model) {
  if (n.grid.size() != n.values.size() || n.grid.empty()) fail(ErrorCode::Fit, "empty curve");
  if (std::all_of(n.values.begin(), n.values.end(), [](double v) { return v == 0.0; }))
    fail(ErrorCode::Fit, "cannot fit an all-zero curve");
  std::optional<ScalingFit> best;
  std::vector<double> a;
  std::vector<double> g;
  for (double c2 : scaling_fit_grid()) {
    a.clear();
    g.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
      if (auto m = model(c2 * n.grid[i])) {
        a.push_back(n.values[i]);
        g.push_back(*m);
      }
    }
    if (2 * a.size() < n.size() || std::all_of(g.begin(), g.end(), [](double v) { return v == 0.0; })) continue;
    const auto [c1, dist] = best_multiplier(a, g);
    if (!best || dist < best->sup_distance) best = ScalingFit{c1, c2, dist, a.size()};
  }
  if (!best) fail(ErrorCode::Fit, "model is undefined or zero for every scale factor");
  return *best;
}

ScalingFit fit_scaling(const CountingCurve& n, const LandscapeField& l) {
  return fit_scaling(n, [&l](double mu) { return nu_or_none(l, mu); });
}

ScalingFit fit_scaling(const CountingCurve& n, std::span<const LandscapeField* const> landscapes) {
  if (landscapes.empty()) fail(ErrorCode::Fit, "no landscapes to fit against");
  for (const LandscapeField* l : landscapes)
    if (!(l->torus == landscapes.front()->torus)) fail(ErrorCode::DimensionMismatch, "landscapes live on different tori");
  return fit_scaling(n, [landscapes](double mu) -> std::optional<double> {
    double sum = 0.0;
    for (const LandscapeField* l : landscapes) {
      const auto v = nu_or_none(*l, mu);
      if (!v) return std::nullopt;
      sum += *v;
    }
    return sum / static_cast<double>(landscapes.size());
  });
}

double lifschitz_fit(const CountingCurve& mean, int dim, double lo, double hi) {
  if (dim < 1) fail(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!(lo > 0.0) || !(hi > lo)) fail(ErrorCode::Window, "window needs 0 < lo < hi");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double mu = mean.grid[i];
    if (mu < lo || mu > hi) continue;
    const double v = mean.values[i];
    if (!(v > 0.0 && v < 1.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "E N(" << mu << ") = " << v << " is outside (0,1); log(-log) undefined";
      fail(ErrorCode::Window, os.str());
    }
    x.push_back(std::log(mu));
    y.push_back(std::log(-std::log(v)));
  }
  if (x.size() < 2) fail(ErrorCode::Window, "fewer than two grid points inside the window");
  const double m = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double xbar = sx / m;
  const double ybar = sy / m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xbar) * (x[i] - xbar);
    sxy += (x[i] - xbar) * (y[i] - ybar);
  }
  if (sxx <= 0.0) fail(ErrorCode::Window, "window grid points are not distinct");
  return sxy / sxx;
}

}  // namespace landlaw
