#include "landlaw/landlaw.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "landlaw/boxcount.hpp"
#include "landlaw/ensemble.hpp"
#include "landlaw/error.hpp"
#include "landlaw/io.hpp"
#include "landlaw/landscape.hpp"
#include "landlaw/operator.hpp"
#include "landlaw/oracle_suite.hpp"
#include "landlaw/potentials.hpp"
#include "landlaw/spectrum.hpp"
#include "landlaw/version.hpp"

using namespace landlaw;

struct ll_potential {
  PotentialField v;
};
struct ll_hamiltonian {
  Hamiltonian h;
};
struct ll_landscape {
  LandscapeField l;
};
struct ll_report {
  LawReport r;
};
struct ll_curve {
  CountingCurve c;
};
struct ll_ensemble {
  EnsembleResult e;
};
struct ll_suite {
  SuiteResult s;
};

namespace {

std::string& last_error_slot() {
  thread_local std::string message;
  return message;
}

template <class F>
ll_status guard(F&& body) noexcept {
  try {
    body();
    last_error_slot().clear();
    return LL_OK;
  } catch (const Error& e) {
    last_error_slot() = e.what();
    return static_cast<ll_status>(e.code());
  } catch (const std::bad_alloc&) {
    last_error_slot() = "out of memory";
    return LL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error_slot() = e.what();
    return LL_ERR_INTERNAL;
  } catch (...) {
    last_error_slot() = "unknown failure";
    return LL_ERR_INTERNAL;
  }
}

template <class T>
T& need(T* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  return *p;
}

template <class T>
const T& need(const T* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  return *p;
}

std::string text(const char* s, const char* what) {
  if (!s) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  return s;
}

std::span<const double> input(const double* data, std::size_t n, const char* what) {
  if (n > 0 && !data) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
  return {data, n};
}

void copy_out(std::span<const double> from, double* to, std::size_t n, const char* what) {
  if (n != from.size())
    fail(ErrorCode::DimensionMismatch, std::string(what) + ": buffer holds " + std::to_string(n) + ", need " +
                                           std::to_string(from.size()));
  if (n > 0 && !to) fail(ErrorCode::InvalidArgument, std::string(what) + " output is NULL");
  std::copy(from.begin(), from.end(), to);
}

void with_output(const char* path, const std::function<void(std::ostream&)>& write) {
  const std::string p = text(path, "path");
  if (p == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(p);
  if (!os) fail(ErrorCode::Io, "cannot open " + p + " for writing");
  write(os);
}

Distribution to_distribution(const ll_distribution& d) {
  switch (d.law) {
    case LL_LAW_UNIFORM: return Distribution::uniform(d.lo, d.hi);
    case LL_LAW_BERNOULLI: return Distribution::bernoulli(d.p, d.height);
    case LL_LAW_DISCRETE: {
      const auto v = input(d.values, d.count, "values");
      const auto p = input(d.probs, d.count, "probs");
      return Distribution::discrete({v.begin(), v.end()}, {p.begin(), p.end()});
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown law");
}

CountOptions to_count(const ll_count_options* o) {
  CountOptions c;
  if (!o) return c;
  switch (o->method) {
    case LL_COUNT_AUTO: c.method = CountMethod::Automatic; break;
    case LL_COUNT_DENSE: c.method = CountMethod::Dense; break;
    case LL_COUNT_INERTIA: c.method = CountMethod::Inertia; break;
    default: fail(ErrorCode::InvalidArgument, "unknown count method");
  }
  c.dense_limit = o->dense_limit;
  return c;
}

SolveOptions to_solve(const ll_solve_options* o) {
  SolveOptions s;
  if (!o) return s;
  switch (o->solver) {
    case LL_SOLVER_AUTO: s.kind = SolverKind::Automatic; break;
    case LL_SOLVER_DIRECT: s.kind = SolverKind::Direct; break;
    case LL_SOLVER_CG: s.kind = SolverKind::ConjugateGradient; break;
    default: fail(ErrorCode::InvalidArgument, "unknown solver");
  }
  if (!(o->tolerance > 0.0)) fail(ErrorCode::InvalidArgument, "solver tolerance must be positive");
  s.tolerance = o->tolerance;
  s.direct_limit = o->direct_limit;
  s.allow_constant = o->allow_constant != 0;
  return s;
}

CountingCurve curve_from(const double* grid, const double* values, std::size_t n, const ll_landscape& l) {
  CountingCurve c;
  const auto g = input(grid, n, "grid");
  const auto v = input(values, n, "values");
  c.grid.assign(g.begin(), g.end());
  c.values.assign(v.begin(), v.end());
  c.metadata["K"] = std::to_string(l.l.torus.side());
  return c;
}

}  // namespace

extern "C" {

const char* ll_version(void) { return kVersion; }

const char* ll_last_error(void) { return last_error_slot().c_str(); }

const char* ll_status_name(ll_status status) {
  if (status == LL_OK) return "ok";
  if (status == LL_ERR_INTERNAL) return "internal";
  return error_code_name(static_cast<ErrorCode>(status));
}

void ll_solve_options_default(ll_solve_options* o) {
  if (!o) return;
  const SolveOptions s;
  *o = {LL_SOLVER_AUTO, s.tolerance, s.direct_limit, 0};
}

void ll_count_options_default(ll_count_options* o) {
  if (!o) return;
  *o = {LL_COUNT_AUTO, CountOptions{}.dense_limit};
}

ll_status ll_potential_create(int d, int k, const double* values, size_t n, double bound, ll_potential** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    const auto v = input(values, n, "values");
    std::optional<double> b;
    if (!std::isnan(bound)) b = bound;
    *out = new ll_potential{PotentialField(Torus(d, k), {v.begin(), v.end()}, b)};
  });
}

ll_status ll_potential_periodic(int d, int k, const int* cell_dims, const double* cell, size_t n, ll_potential** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    if (d < 1 || !cell_dims) fail(ErrorCode::InvalidArgument, "cell dimensions missing");
    const std::span<const int> dims(cell_dims, static_cast<std::size_t>(d));
    *out = new ll_potential{periodic_potential(Torus(d, k), dims, input(cell, n, "cell"))};
  });
}

ll_status ll_potential_sample(int d, int k, const ll_distribution* dist, uint64_t seed, uint64_t realization,
                              ll_potential** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    *out = new ll_potential{sample_anderson(Torus(d, k), to_distribution(need(dist, "dist")), seed, realization)};
  });
}

ll_status ll_potential_load(const char* path, ll_potential** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    FlatField f = load_field(text(path, "path"));
    *out = new ll_potential{PotentialField(f.torus, std::move(f.values))};
  });
}

ll_status ll_potential_save(const ll_potential* v, const char* path) {
  return guard([&] {
    const auto& p = need(v, "potential").v;
    with_output(path, [&](std::ostream& os) { write_field(os, p.torus(), p.values()); });
  });
}

ll_status ll_potential_info(const ll_potential* v, int* d, int* k, double* vmax, double* reference_max) {
  return guard([&] {
    const auto& p = need(v, "potential").v;
    if (d) *d = p.torus().dim();
    if (k) *k = p.torus().side();
    if (vmax) *vmax = p.vmax();
    if (reference_max) *reference_max = p.reference_max();
  });
}

ll_status ll_potential_values(const ll_potential* v, double* out, size_t n) {
  return guard([&] { copy_out(need(v, "potential").v.values(), out, n, "values"); });
}

void ll_potential_free(ll_potential* v) { delete v; }

ll_status ll_distribution_cdf(const ll_distribution* dist, double delta, double* out) {
  return guard([&] { need(out, "out") = to_distribution(need(dist, "dist")).cdf(delta); });
}

ll_status ll_hamiltonian_create(const ll_potential* v, ll_hamiltonian** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    const auto& p = need(v, "potential").v;
    *out = new ll_hamiltonian{Hamiltonian(p.torus(), p)};
  });
}

ll_status ll_hamiltonian_dual(const ll_hamiltonian* h, ll_hamiltonian** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    *out = new ll_hamiltonian{dual_hamiltonian(need(h, "hamiltonian").h)};
  });
}

ll_status ll_hamiltonian_info(const ll_hamiltonian* h, int* d, int* k, double* spectral_top) {
  return guard([&] {
    const auto& op = need(h, "hamiltonian").h;
    if (d) *d = op.torus().dim();
    if (k) *k = op.torus().side();
    if (spectral_top) *spectral_top = op.spectral_top();
  });
}

ll_status ll_hamiltonian_apply(const ll_hamiltonian* h, const double* phi, double* out, size_t n) {
  return guard([&] {
    const auto& op = need(h, "hamiltonian").h;
    const auto x = input(phi, n, "phi");
    if (n != op.size()) fail(ErrorCode::DimensionMismatch, "vector length differs from K^d");
    copy_out(op.apply(x), out, n, "H phi");
  });
}

ll_status ll_hamiltonian_spectrum(const ll_hamiltonian* h, double* out, size_t n) {
  return guard([&] { copy_out(full_spectrum(need(h, "hamiltonian").h).eigenvalues, out, n, "spectrum"); });
}

ll_status ll_count(const ll_hamiltonian* h, double mu, int strict, const ll_count_options* o, size_t* out) {
  return guard([&] {
    const auto& op = need(h, "hamiltonian").h;
    need(out, "out") = strict ? count_lt(op, mu, to_count(o)) : count_leq(op, mu, to_count(o));
  });
}

ll_status ll_ids_curve(const ll_hamiltonian* h, const double* grid, size_t n, const ll_count_options* o, double* out) {
  return guard([&] {
    const CountingCurve c = ids_curve(need(h, "hamiltonian").h, input(grid, n, "grid"), to_count(o));
    copy_out(c.values, out, n, "N");
  });
}

ll_status ll_dual_identity(const ll_hamiltonian* h, const double* grid, size_t n, const ll_count_options* o,
                           int64_t* max_deviation) {
  return guard([&] {
    need(max_deviation, "out") = dual_identity_check(need(h, "hamiltonian").h, input(grid, n, "grid"), to_count(o));
  });
}

void ll_hamiltonian_free(ll_hamiltonian* h) { delete h; }

ll_status ll_landscape_solve(const ll_hamiltonian* h, const ll_solve_options* o, ll_landscape** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    *out = new ll_landscape{solve_landscape(need(h, "hamiltonian").h, to_solve(o))};
  });
}

ll_status ll_landscape_load(const char* path, ll_landscape** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    FlatField f = load_field(text(path, "path"));
    *out = new ll_landscape{LandscapeField::from_values(f.torus, std::move(f.values))};
  });
}

ll_status ll_landscape_save(const ll_landscape* l, const char* path) {
  return guard([&] {
    const auto& f = need(l, "landscape").l;
    with_output(path, [&](std::ostream& os) { write_field(os, f.torus, f.u); });
  });
}

ll_status ll_landscape_info(const ll_landscape* l, int* d, int* k, double* residual, ll_solver* solver,
                            size_t* iterations) {
  return guard([&] {
    const auto& f = need(l, "landscape").l;
    if (d) *d = f.torus.dim();
    if (k) *k = f.torus.side();
    if (residual) *residual = f.residual_norm;
    if (solver) *solver = f.solver == SolverKind::ConjugateGradient ? LL_SOLVER_CG : LL_SOLVER_DIRECT;
    if (iterations) *iterations = f.iterations;
  });
}

ll_status ll_landscape_values(const ll_landscape* l, double* out, size_t n) {
  return guard([&] { copy_out(need(l, "landscape").l.u, out, n, "u"); });
}

ll_status ll_uncertainty_residual(const ll_hamiltonian* h, const ll_landscape* l, const double* f, size_t n,
                                  double* out) {
  return guard([&] {
    need(out, "out") = uncertainty_residual(need(h, "hamiltonian").h, need(l, "landscape").l, input(f, n, "f"));
  });
}

ll_status ll_scaling_constant(const ll_landscape* l, int ell, double* out) {
  return guard([&] { need(out, "out") = scaling_constant(need(l, "landscape").l, ell); });
}

ll_status ll_box_counting(const ll_landscape* l, double mu, double* out) {
  return guard([&] { need(out, "out") = box_counting(need(l, "landscape").l, mu); });
}

ll_status ll_nu_curve(const ll_landscape* l, const double* grid, size_t n, double* out) {
  return guard([&] { copy_out(nu_curve(need(l, "landscape").l, input(grid, n, "grid")).values, out, n, "N_u"); });
}

ll_status ll_dual_nu_curve(const ll_landscape* dual, double top, const double* grid, size_t n, double* out) {
  return guard([&] {
    copy_out(dual_nu_curve(need(dual, "landscape").l, top, input(grid, n, "grid")).values, out, n, "N_u dual");
  });
}

void ll_landscape_free(ll_landscape* l) { delete l; }

ll_status ll_min_box_mu(int k, double* out) {
  return guard([&] {
    if (k < 1) fail(ErrorCode::InvalidDomain, "K must be positive");
    need(out, "out") = min_box_mu(k);
  });
}

ll_status ll_default_grid(int d, int k, double vmax, size_t points, double* out, size_t capacity, size_t* n) {
  return guard([&] {
    const auto g = default_grid(d, k, vmax, points);
    if (g.size() > capacity) fail(ErrorCode::DimensionMismatch, "grid buffer too small");
    if (!g.empty() && !out) fail(ErrorCode::InvalidArgument, "grid output is NULL");
    std::copy(g.begin(), g.end(), out);
    need(n, "n") = g.size();
  });
}

ll_status ll_curve_write(const char* path, const double* grid, const double* values, size_t n, const char* kind) {
  return guard([&] {
    CountingCurve c;
    const auto g = input(grid, n, "grid");
    const auto v = input(values, n, "values");
    c.grid.assign(g.begin(), g.end());
    c.values.assign(v.begin(), v.end());
    c.kind = parse_curve_kind(text(kind, "kind"));
    with_output(path, [&](std::ostream& os) { write_curve(os, c); });
  });
}

ll_status ll_curve_read(const char* path, ll_curve** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    *out = new ll_curve{load_curve(text(path, "path"))};
  });
}

ll_status ll_curve_size(const ll_curve* c, size_t* n) {
  return guard([&] { need(n, "n") = need(c, "curve").c.size(); });
}

ll_status ll_curve_data(const ll_curve* c, double* grid, double* values, size_t n) {
  return guard([&] {
    const auto& curve = need(c, "curve").c;
    copy_out(curve.grid, grid, n, "grid");
    copy_out(curve.values, values, n, "values");
  });
}

const char* ll_curve_kind(const ll_curve* c) { return c ? curve_kind_name(c->c.kind) : ""; }

void ll_curve_free(ll_curve* c) { delete c; }

ll_status ll_upper_bound_check(const double* grid, const double* n_values, size_t n, const ll_landscape* l,
                               ll_report** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    const auto& land = need(l, "landscape");
    *out = new ll_report{upper_bound_check(curve_from(grid, n_values, n, land), land.l)};
  });
}

ll_status ll_lower_bound_check(const double* grid, const double* n_values, size_t n, const ll_landscape* l,
                               double alpha, double c0, double big_c0, double c1, ll_report** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    const auto& land = need(l, "landscape");
    *out = new ll_report{lower_bound_check(curve_from(grid, n_values, n, land), land.l, alpha, {c0, big_c0, c1})};
  });
}

ll_status ll_fit_scaling(const double* grid, const double* n_values, size_t n, const ll_landscape* l, double* c1,
                         double* c2, double* sup_distance) {
  return guard([&] {
    const auto& land = need(l, "landscape");
    const ScalingFit fit = fit_scaling(curve_from(grid, n_values, n, land), land.l);
    if (c1) *c1 = fit.c1;
    if (c2) *c2 = fit.c2;
    if (sup_distance) *sup_distance = fit.sup_distance;
  });
}

ll_status ll_fit_scaling_mean(const double* grid, const double* n_values, size_t n,
                              const ll_landscape* const* landscapes, size_t count, double* c1, double* c2,
                              double* sup_distance) {
  return guard([&] {
    if (count == 0 || !landscapes) fail(ErrorCode::InvalidArgument, "no landscapes given");
    std::vector<const LandscapeField*> ls;
    for (size_t i = 0; i < count; ++i) ls.push_back(&need(landscapes[i], "landscape").l);
    const ScalingFit fit = fit_scaling(curve_from(grid, n_values, n, *landscapes[0]), ls);
    if (c1) *c1 = fit.c1;
    if (c2) *c2 = fit.c2;
    if (sup_distance) *sup_distance = fit.sup_distance;
  });
}

ll_status ll_report_attach_fit(ll_report* r, double c1, double c2, double sup_distance) {
  return guard([&] { need(r, "report").r.fitted = ScalingFit{c1, c2, sup_distance, 0}; });
}

ll_status ll_report_summary(const ll_report* r, size_t* points, size_t* violations, size_t* truncated,
                            double* min_margin) {
  return guard([&] {
    const auto& rep = need(r, "report").r;
    if (points) *points = rep.grid.size();
    if (violations) *violations = rep.violations.size();
    if (truncated) *truncated = rep.truncated.size();
    if (min_margin) *min_margin = rep.margin.empty() ? 0.0 : *std::min_element(rep.margin.begin(), rep.margin.end());
  });
}

ll_status ll_report_violation(const ll_report* r, size_t i, double* mu, double* lhs, double* rhs) {
  return guard([&] {
    const auto& rep = need(r, "report").r;
    if (i >= rep.violations.size()) fail(ErrorCode::InvalidArgument, "violation index out of range");
    const Violation& v = rep.violations[i];
    if (mu) *mu = v.mu;
    if (lhs) *lhs = v.lhs;
    if (rhs) *rhs = v.rhs;
  });
}

ll_status ll_report_write(const ll_report* r, const char* path) {
  return guard([&] {
    const auto& rep = need(r, "report").r;
    with_output(path, [&](std::ostream& os) { write_report(os, rep); });
  });
}

void ll_report_free(ll_report* r) { delete r; }

ll_status ll_ensemble_run(const ll_ensemble_config* cfg, ll_ensemble** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    const auto& c = need(cfg, "config");
    EnsembleConfig e;
    e.dim = c.d;
    e.side = c.k;
    e.distribution = to_distribution(c.dist);
    e.realizations = c.realizations;
    e.master_seed = c.seed;
    const auto g = input(c.grid, c.grid_size, "grid");
    e.grid.assign(g.begin(), g.end());
    e.want_n = c.want_n != 0;
    e.want_nu = c.want_nu != 0;
    e.want_dual = c.want_dual != 0;
    e.want_upper = c.want_upper != 0;
    e.threads = c.threads;
    e.count = to_count(&c.count);
    e.solve = to_solve(&c.solve);
    *out = new ll_ensemble{run_ensemble(e)};
  });
}

ll_status ll_ensemble_curve(const ll_ensemble* e, ll_mean which, double* mean, double* se, size_t n) {
  return guard([&] {
    const auto& r = need(e, "ensemble").e;
    const std::vector<double>* m = nullptr;
    const std::vector<double>* s = nullptr;
    switch (which) {
      case LL_MEAN_N: m = &r.mean_n; s = &r.se_n; break;
      case LL_MEAN_NU: m = &r.mean_nu; s = &r.se_nu; break;
      case LL_MEAN_NU_DUAL: m = &r.mean_nu_dual; s = &r.se_nu_dual; break;
      case LL_MEAN_NU_UPPER: m = &r.mean_nu_upper; s = &r.se_nu_upper; break;
      default: fail(ErrorCode::InvalidArgument, "unknown curve");
    }
    if (m->empty()) fail(ErrorCode::InvalidArgument, "curve was not requested in the configuration");
    copy_out(*m, mean, n, "mean");
    if (se) copy_out(*s, se, n, "se");
  });
}

ll_status ll_ensemble_upper_violations(const ll_ensemble* e, size_t* count) {
  return guard([&] { need(count, "count") = upper_violations(need(e, "ensemble").e).size(); });
}

ll_status ll_ensemble_write(const ll_ensemble* e, const char* path) {
  return guard([&] {
    const auto& r = need(e, "ensemble").e;
    with_output(path, [&](std::ostream& os) { write_ensemble(os, r); });
  });
}

ll_status ll_ensemble_tail(const ll_ensemble* e, int k, double mu0, double kstar, double* lo, double* hi,
                           size_t* used, size_t* excluded, double* slope) {
  return guard([&] {
    const auto& r = need(e, "ensemble").e;
    if (r.mean_n.empty()) fail(ErrorCode::InvalidArgument, "ensemble has no N curve");
    EnsembleConfig cfg;
    cfg.side = k;
    cfg.grid = r.grid;
    const TailWindow w = tail_window(cfg, r.mean_n, mu0, kstar);
    if (lo) *lo = w.lo;
    if (hi) *hi = w.hi;
    if (used) *used = w.points.size();
    if (excluded) *excluded = w.excluded.size();
    if (slope) {
      // Fit on the usable points only; excluded zeros would break log(-log).
      CountingCurve c;
      c.kind = CurveKind::MeanN;
      for (std::size_t i = 0; i < r.grid.size(); ++i) {
        if (r.grid[i] >= w.lo && r.grid[i] <= w.hi && r.mean_n[i] > 0.0) {
          c.grid.push_back(r.grid[i]);
          c.values.push_back(r.mean_n[i]);
        }
      }
      *slope = lifschitz_fit(c, 1, w.lo, w.hi);
    }
  });
}

void ll_ensemble_free(ll_ensemble* e) { delete e; }

ll_status ll_suite_run(uint64_t seed, size_t trials, size_t chernoff_trials, ll_suite** out) {
  return guard([&] {
    need(out, "out") = nullptr;
    if (trials == 0 || chernoff_trials == 0) fail(ErrorCode::InvalidArgument, "trial counts must be positive");
    *out = new ll_suite{run_oracle_suite({seed, trials, chernoff_trials})};
  });
}

ll_status ll_suite_rows(const ll_suite* s, size_t* n) {
  return guard([&] { need(n, "n") = need(s, "suite").s.rows.size(); });
}

ll_status ll_suite_row(const ll_suite* s, size_t i, const char** name, int* hard, size_t* trials, size_t* passed,
                       double* value) {
  return guard([&] {
    const auto& rows = need(s, "suite").s.rows;
    if (i >= rows.size()) fail(ErrorCode::InvalidArgument, "row index out of range");
    const OracleRow& r = rows[i];
    if (name) *name = r.name.c_str();
    if (hard) *hard = r.kind == OracleKind::Hard;
    if (trials) *trials = r.trials;
    if (passed) *passed = r.passed;
    if (value) *value = r.value;
  });
}

ll_status ll_suite_hard_pass(const ll_suite* s, int* pass) {
  return guard([&] { need(pass, "pass") = need(s, "suite").s.hard_pass() ? 1 : 0; });
}

ll_status ll_suite_write(const ll_suite* s, const char* path, int csv) {
  return guard([&] {
    const auto& r = need(s, "suite").s;
    with_output(path, [&](std::ostream& os) { csv ? write_suite_csv(os, r) : write_suite_text(os, r); });
  });
}

void ll_suite_free(ll_suite* s) { delete s; }

}  // extern "C"
