#include "landlaw/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "landlaw/boxcount.hpp"
#include "landlaw/error.hpp"
#include "landlaw/operator.hpp"

namespace landlaw {

CountingCurve dual_nu_curve(const LandscapeField& dual, double top, std::span<const double> grid) {
  CountingCurve c;
  c.kind = CurveKind::NuDual;
  c.grid.assign(grid.begin(), grid.end());
  const double floor = min_box_mu(dual.torus.side());
  for (double mu : grid) {
    const double reflected = top - mu;
    c.values.push_back(reflected >= floor ? 1.0 - box_counting(dual, reflected)
                                          : std::numeric_limits<double>::quiet_NaN());
  }
  c.metadata["d"] = std::to_string(dual.torus.dim());
  c.metadata["K"] = std::to_string(dual.torus.side());
  return c;
}

CountingCurve EnsembleResult::curve(CurveKind kind) const {
  CountingCurve c;
  c.kind = kind;
  c.grid = grid;
  switch (kind) {
    case CurveKind::MeanN: c.values = mean_n; break;
    case CurveKind::MeanNu: c.values = mean_nu; break;
    case CurveKind::MeanNuDual: c.values = mean_nu_dual; break;
    default: fail(ErrorCode::InvalidArgument, "ensemble results hold only mean curves");
  }
  if (c.values.size() != c.grid.size()) fail(ErrorCode::InvalidArgument, "curve was not requested");
  return c;
}

namespace {

void validate(const EnsembleConfig& cfg) {
  if (cfg.realizations < 1) fail(ErrorCode::InvalidArgument, "realizations must be >= 1");
  if (cfg.grid.empty()) fail(ErrorCode::InvalidArgument, "mu grid is empty");
  if (!std::is_sorted(cfg.grid.begin(), cfg.grid.end())) fail(ErrorCode::InvalidArgument, "mu grid must be sorted");
  if ((cfg.want_nu || cfg.want_upper) && cfg.grid.front() < min_box_mu(cfg.side)) {
    std::ostringstream os;
    os.precision(17);
    os << "grid starts at " << cfg.grid.front() << " below the box-counting floor 1/K^2 = " << min_box_mu(cfg.side);
    fail(ErrorCode::Scale, os.str());
  }
  if (cfg.want_dual && cfg.side % 2 != 0) fail(ErrorCode::Parity, "dual curves need an even torus side K");
}

RealizationCurves one_realization(const EnsembleConfig& cfg, const Torus& t, std::size_t index) {
  PotentialField v = sample_anderson(t, cfg.distribution, cfg.master_seed, index);
  const Hamiltonian h(t, std::move(v));
  RealizationCurves r;
  if (cfg.want_n) r.n = ids_curve(h, cfg.grid, cfg.count).values;
  if (cfg.want_nu || cfg.want_upper) {
    const LandscapeField l = solve_landscape(h, cfg.solve);
    if (cfg.want_nu) r.nu = nu_curve(l, cfg.grid).values;
    if (cfg.want_upper) {
      const double c1 = 4.0 * t.dim();
      for (double mu : cfg.grid) r.nu_upper.push_back(box_counting(l, c1 * mu));
    }
  }
  if (cfg.want_dual) {
    const Hamiltonian dual = dual_hamiltonian(h);
    r.nu_dual = dual_nu_curve(solve_landscape(dual, cfg.solve), h.spectral_top(), cfg.grid).values;
  }
  return r;
}

void reduce(const std::vector<RealizationCurves>& all, std::vector<double> RealizationCurves::*field,
            std::vector<double>& mean, std::vector<double>& se) {
  const std::size_t points = (all.front().*field).size();
  const auto r = static_cast<double>(all.size());
  mean.assign(points, 0.0);
  se.assign(points, 0.0);
  for (const auto& c : all)
    for (std::size_t i = 0; i < points; ++i) mean[i] += (c.*field)[i];
  for (double& m : mean) m /= r;
  if (all.size() < 2) return;
  for (std::size_t i = 0; i < points; ++i) {
    double ss = 0.0;
    for (const auto& c : all) {
      const double dev = (c.*field)[i] - mean[i];
      ss += dev * dev;
    }
    se[i] = std::sqrt(ss / (r - 1.0) / r);
  }
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  validate(cfg);
  const Torus t(cfg.dim, cfg.side);
  std::vector<RealizationCurves> slots(cfg.realizations);
  std::vector<std::exception_ptr> errors(cfg.realizations);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < cfg.realizations; i = next.fetch_add(1)) {
      try {
        slots[i] = one_realization(cfg, t, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cfg.realizations);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "realization " << i << " (seed " << cfg.master_seed << ", stream " << i << ") failed: " << e.what();
      fail(ErrorCode::Realization, os.str());
    }
  }
  EnsembleResult out;
  out.grid = cfg.grid;
  if (cfg.want_n) reduce(slots, &RealizationCurves::n, out.mean_n, out.se_n);
  if (cfg.want_nu) reduce(slots, &RealizationCurves::nu, out.mean_nu, out.se_nu);
  if (cfg.want_dual) reduce(slots, &RealizationCurves::nu_dual, out.mean_nu_dual, out.se_nu_dual);
  if (cfg.want_upper) reduce(slots, &RealizationCurves::nu_upper, out.mean_nu_upper, out.se_nu_upper);
  if (cfg.keep_realizations) out.realizations = std::move(slots);
  return out;
}

std::vector<double> upper_violations(const EnsembleResult& r) {
  if (r.mean_n.empty() || r.mean_nu_upper.empty())
    fail(ErrorCode::InvalidArgument, "upper check needs the N and N_u(4d mu) means");
  std::vector<double> out;
  for (std::size_t i = 0; i < r.grid.size(); ++i)
    if (r.mean_n[i] > r.mean_nu_upper[i]) out.push_back(r.grid[i]);
  return out;
}

std::vector<double> default_grid(int dim, int side, double vmax, std::size_t points) {
  if (points < 2) fail(ErrorCode::InvalidArgument, "grid needs at least two points");
  const double top = 4.0 * dim + vmax;
  const double lo = std::log(1e-3 * top);
  const double hi = std::log(top);
  const double floor = min_box_mu(side);
  std::vector<double> g;
  for (std::size_t i = 0; i < points; ++i) {
    const double mu = i + 1 == points ? top : std::exp(lo + (hi - lo) * static_cast<double>(i) / (points - 1.0));
    if (mu >= floor) g.push_back(mu);
  }
  return g;
}

TailWindow tail_window(const EnsembleConfig& cfg, std::span<const double> mean_n, double mu0, double kstar) {
  if (mean_n.size() != cfg.grid.size()) fail(ErrorCode::DimensionMismatch, "mean curve and grid differ in length");
  if (!(kstar > 0.0)) fail(ErrorCode::Window, "K_* must be positive");
  const double k2 = static_cast<double>(cfg.side) * cfg.side;
  TailWindow w;
  w.lo = std::max(kstar / k2, 1.0 / k2);
  w.hi = cfg.grid.empty() ? mu0 : std::min(mu0, cfg.grid.back());
  for (std::size_t i = 0; i < cfg.grid.size(); ++i) {
    const double mu = cfg.grid[i];
    if (mu < w.lo || mu > w.hi) continue;
    if (mean_n[i] > 0.0)
      w.points.push_back(mu);
    else
      w.excluded.push_back(mu);
  }
  if (w.points.empty()) fail(ErrorCode::Window, "tail window contains no usable grid points");
  return w;
}

}  // namespace landlaw
