#include "landlaw/oracle_suite.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "landlaw/elliptic.hpp"
#include "landlaw/error.hpp"
#include "landlaw/io.hpp"
#include "landlaw/landscape.hpp"
#include "landlaw/operator.hpp"
#include "landlaw/potentials.hpp"
#include "landlaw/rng.hpp"

namespace landlaw {

namespace {

// Sequential draws from one counter stream; every trial owns its own stream.
class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t tag, std::uint64_t trial) : stream_(seed ^ mix64(tag), trial) {}
  double uniform() { return stream_.uniform(counter_++); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(stream_.bits(counter_++) % span);
  }
  ScalarField field(std::size_t n, double lo, double hi) {
    ScalarField f(n);
    for (double& x : f) x = uniform(lo, hi);
    return f;
  }

 private:
  CounterStream stream_;
  std::uint64_t counter_ = 0;
};

enum Tag : std::uint64_t {
  kMaxPrinciple = 1,
  kPoincare,
  kPoissonNorm,
  kPoissonPaths,
  kGreen,
  kIbp,
  kSurface,
  kHarnack,
  kFloor,
  kChernoff,
  kMoser,
  kSubmean,
};

Box random_box(Draw& g, int dim, int lo, int hi) {
  std::vector<int> lengths(static_cast<std::size_t>(dim));
  for (int& l : lengths) l = g.integer(lo, hi);
  return Box(std::move(lengths));
}

int random_radius(Draw& g, int dim) {
  const int hi = dim == 1 ? 30 : dim == 2 ? 12 : 5;
  return g.integer(1, hi);
}

// Kernels of centered cubes, computed once per (d, r) for the whole battery.
const DirichletKernels& cached_kernels(int dim, int radius) {
  static std::map<std::pair<int, int>, DirichletKernels> cache;
  auto it = cache.find({dim, radius});
  if (it == cache.end()) it = cache.emplace(std::pair{dim, radius}, kernels(CubeProblem(dim, radius))).first;
  return it->second;
}

// Window of side 2R+1 of a torus field centered at `center`, as a box field.
ScalarField window(const Torus& t, std::span<const double> f, const Coord& center, int radius) {
  const CubeProblem p(t.dim(), radius);
  ScalarField out(p.size());
  Coord c(center.size());
  for (std::size_t m = 0; m < p.size(); ++m) {
    const Coord local = p.box().coords(m);
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = center[a] + local[a] - radius;
    out[m] = f[t.index(c)];
  }
  return out;
}

// A random Anderson landscape on a torus large enough for a cube of radius R.
struct SolvedTorus {
  Torus torus;
  PotentialField v;
  LandscapeField l;
};

SolvedTorus random_landscape(Draw& g, int dim, int radius, double vmax) {
  const int side = std::max(2 * radius + 1, dim == 1 ? g.integer(2 * radius + 1, 4 * radius + 8) : 2 * radius + 3);
  Torus t(dim, side);
  PotentialField v(t, g.field(t.volume(), 0.0, vmax), vmax);
  const Hamiltonian h(t, v);
  LandscapeField l = solve_landscape(h);
  return {t, v, std::move(l)};
}

Coord random_site(Draw& g, const Torus& t) {
  Coord c(static_cast<std::size_t>(t.dim()));
  for (int& x : c) x = g.integer(0, t.side() - 1);
  return c;
}

OracleRow hard(std::string name, std::size_t trials) {
  OracleRow r;
  r.name = std::move(name);
  r.kind = OracleKind::Hard;
  r.trials = trials;
  r.value = std::numeric_limits<double>::infinity();
  return r;
}

void record(OracleRow& r, double slack) {
  if (slack >= 0.0) ++r.passed;
  r.value = std::min(r.value, slack);
}

}  // namespace

OracleRow oracle_max_principle(const SuiteOptions& o) {
  OracleRow r = hard("max_principle", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kMaxPrinciple, i);
    const int dim = g.integer(1, 3);
    const Box box = random_box(g, dim, 3, dim == 3 ? 6 : 10);
    // Even trials use V = 0, odd ones a random nonnegative V.
    const ScalarField v = i % 2 == 0 ? ScalarField{} : g.field(box.size(), 0.0, 3.0);
    const ScalarField source = g.field(box.size(), 0.0, 1.0);
    const ScalarField h = g.field(box.size(), -1.0, 1.0);
    const ScalarField f = solve_box_dirichlet(box, v, source, h);
    const auto res = max_principle_check(box, v, f);
    record(r, res.interior_min - res.bound + 1e-12);
  }
  return r;
}

OracleRow oracle_poincare(const SuiteOptions& o) {
  OracleRow r = hard("poincare", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kPoincare, i);
    const int dim = g.integer(1, 3);
    const Box box = random_box(g, dim, 1, dim == 3 ? 8 : 12);
    ScalarField f = g.field(box.size(), -1.0, 1.0);
    if (i % 3 == 1) {
      // Smooth profiles come closer to the constant than white noise does.
      for (std::size_t n = 0; n < box.size(); ++n) f[n] = std::cos(0.3 * box.coords(n)[0]);
    }
    const auto res = poincare_check(box, f);
    record(r, res.rhs + 1e-12 * (1.0 + res.rhs) - res.lhs);
  }
  return r;
}

OracleRow oracle_poisson_normalization(const SuiteOptions& o) {
  OracleRow r = hard("poisson_normalization", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kPoissonNorm, i);
    const int dim = g.integer(1, 3);
    const DirichletKernels& k = cached_kernels(dim, random_radius(g, dim));
    double sum = 0.0;
    double low = 0.0;
    for (double p : k.poisson) {
      sum += p;
      low = std::min(low, p);
    }
    record(r, std::min(1e-12 - std::abs(sum - 1.0), low));
  }
  return r;
}

OracleRow oracle_poisson_paths(const SuiteOptions& o) {
  OracleRow r = hard("poisson_paths", o.trials);
  std::map<std::pair<int, int>, double> seen;
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kPoissonPaths, i);
    const int dim = g.integer(1, 3);
    const int radius = random_radius(g, dim);
    auto it = seen.find({dim, radius});
    if (it == seen.end()) {
      const CubeProblem p(dim, radius);
      const DirichletKernels& a = cached_kernels(dim, radius);
      const DirichletKernels b = kernels(p, PoissonPath::BoundaryDeltas);
      double gap = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) gap = std::max(gap, std::abs(a.poisson[m] - b.poisson[m]));
      it = seen.emplace(std::pair{dim, radius}, gap).first;
    }
    record(r, 1e-11 - it->second);
  }
  return r;
}

OracleRow oracle_green_symmetry(const SuiteOptions& o) {
  OracleRow r = hard("green_symmetry", o.trials);
  std::map<std::pair<int, int>, double> seen;
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kGreen, i);
    const int dim = g.integer(1, 3);
    const int radius = g.integer(1, dim == 1 ? 30 : dim == 2 ? 8 : 3);
    auto it = seen.find({dim, radius});
    if (it == seen.end()) {
      const Eigen::MatrixXd m = green_matrix(CubeProblem(dim, radius));
      const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
      const double low = std::min(0.0, m.minCoeff());
      it = seen.emplace(std::pair{dim, radius}, asym - low).first;
    }
    record(r, 1e-12 - it->second);
  }
  return r;
}

OracleRow oracle_ibp(const SuiteOptions& o) {
  OracleRow r = hard("ibp", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kIbp, i);
    const int dim = g.integer(1, 3);
    const int radius = random_radius(g, dim);
    const CubeProblem p(dim, radius);
    const double scale = std::pow(10.0, g.uniform(-2.0, 3.0));
    const ScalarField u = g.field(p.size(), -scale, scale);
    double norm = 0.0;
    for (double x : u) norm = std::max(norm, std::abs(x));
    const double res = ibp_residual(p, cached_kernels(dim, radius), u);
    record(r, 1e-10 * (1.0 + norm) - res);
  }
  return r;
}

OracleRow oracle_surface_average(const SuiteOptions& o) {
  OracleRow r = hard("surface_average", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kSurface, i);
    const int dim = g.integer(1, 2);
    const int radius = g.integer(1, dim == 1 ? 20 : 8);
    const double vmax = std::pow(10.0, g.uniform(-2.0, 1.0));
    const SolvedTorus s = random_landscape(g, dim, radius, vmax);
    const CubeProblem p(dim, radius);
    const ScalarField u = window(s.torus, s.l.u, random_site(g, s.torus), radius);
    const auto avg = surface_averages(p, cached_kernels(dim, radius), u);
    record(r, avg.min_margin + 1e-9);
  }
  return r;
}

OracleRow oracle_harnack(const SuiteOptions& o) {
  OracleRow r = hard("harnack", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kHarnack, i);
    const int dim = g.integer(1, 2);
    const int radius = g.integer(2, dim == 1 ? 20 : 7);
    const CubeProblem p(dim, radius);
    ScalarField f;
    ScalarField v;
    double vmax = 0.0;
    if (i % 2 == 0) {
      vmax = std::pow(10.0, g.uniform(-1.0, 1.0));
      const SolvedTorus s = random_landscape(g, dim, radius, vmax);
      const Coord c = random_site(g, s.torus);
      f = window(s.torus, s.l.u, c, radius);
      v = window(s.torus, s.v.values(), c, radius);
    } else {
      const auto interior = p.box().interior();
      f = green_column(p, interior[static_cast<std::size_t>(g.integer(0, static_cast<int>(interior.size()) - 1))]);
    }
    const int side = 2 * radius + 1;
    const int ell = g.integer(1, side - 2);
    Coord anchor(static_cast<std::size_t>(dim));
    for (int& a : anchor) a = g.integer(1, side - 1 - ell);
    const auto res = harnack_check(p.box(), v, vmax, f, Cube::regular(anchor, ell));
    const double slack = res.log_constant + std::log1p(1e-9) - (std::log(res.sup) - std::log(res.inf));
    record(r, res.pass ? std::max(slack, 0.0) : std::min(slack, -1e-300));
  }
  return r;
}

OracleRow oracle_landscape_floor(const SuiteOptions& o) {
  OracleRow r = hard("landscape_floor", o.trials);
  for (std::size_t i = 0; i < o.trials; ++i) {
    Draw g(o.seed, kFloor, i);
    const int dim = g.integer(1, 3);
    const int side = g.integer(3, dim == 1 ? 200 : dim == 2 ? 24 : 10);
    const Torus t(dim, side);
    const double vmax = std::pow(10.0, g.uniform(-2.0, 2.0));
    PotentialField v(t, g.field(t.volume(), 0.0, vmax), vmax);
    const double realized = v.vmax();
    const LandscapeField l = solve_landscape(Hamiltonian(t, std::move(v)));
    const double floor = *std::min_element(l.u.begin(), l.u.end());
    record(r, floor - 1.0 / realized + 1e-9);
  }
  return r;
}

OracleRow oracle_chernoff(const SuiteOptions& o) {
  OracleRow r = hard("chernoff", 27);
  std::size_t cell = 0;
  for (std::size_t block : {20, 50, 100}) {
    for (double p : {0.1, 0.3, 0.5}) {
      for (double frac : {0.2, 0.5, 0.8}) {
        const double lambda = frac * (1.0 - p);
        const double bound = chernoff_bound(block, p, lambda);
        const double freq = chernoff_frequency(block, p, lambda, o.chernoff_trials, o.seed ^ mix64(kChernoff + cell));
        const double se = std::sqrt(freq * (1.0 - freq) / static_cast<double>(o.chernoff_trials));
        record(r, bound + 3.0 * se - freq);
        ++cell;
      }
    }
  }
  return r;
}

namespace {

// A nonnegative g on the box of side 3 ell with -Delta g = f in [0, 1] inside.
ScalarField moser_instance(Draw& g, const Box& box, int ell, std::size_t trial) {
  ScalarField f(box.size(), 0.0);
  ScalarField h(box.size(), 0.0);
  const double l2 = static_cast<double>(ell) * ell;
  switch (trial % 4) {
    case 0:  // full unit source, zero boundary
      std::fill(f.begin(), f.end(), 1.0);
      break;
    case 1:  // random source
      f = g.field(box.size(), 0.0, 1.0);
      break;
    case 2: {  // harmonic with large boundary data on one face
      const double scale = l2 * std::pow(10.0, g.uniform(-1.0, 2.0));
      for (std::size_t n : box.boundary())
        if (box.coords(n)[0] == 0) h[n] = scale;
      break;
    }
    default: {  // sparse point sources plus random boundary data
      for (int k = 0; k < 3; ++k) f[static_cast<std::size_t>(g.integer(0, static_cast<int>(box.size()) - 1))] = 1.0;
      for (std::size_t n : box.boundary()) h[n] = g.uniform(0.0, l2);
      break;
    }
  }
  return solve_box_dirichlet(box, {}, f, h);
}

}  // namespace

OracleRow oracle_moser_harnack(const SuiteOptions& o, int ell) {
  OracleRow r;
  r.name = "moser_harnack_l" + std::to_string(ell);
  r.kind = OracleKind::Empirical;
  r.trials = std::max<std::size_t>(o.trials / 2, 4);
  r.value = std::numeric_limits<double>::infinity();
  const Box box = Box::cube(2, 3 * ell);
  for (std::size_t i = 0; i < r.trials; ++i) {
    Draw g(o.seed, kMoser + 1000 * static_cast<std::uint64_t>(ell), i);
    ScalarField u = moser_instance(g, box, ell, i);
    for (double& x : u) x = std::max(x, 0.0);  // clears round-off below zero
    r.value = std::min(r.value, moser_harnack_ratio(2, ell, u));
    ++r.passed;
  }
  std::ostringstream os;
  os << "min ratio over " << r.trials << " sub-solutions, d=2";
  r.detail = os.str();
  return r;
}

OracleRow oracle_submean(const SuiteOptions& o, int dim) {
  OracleRow r;
  r.name = "submean_d" + std::to_string(dim);
  r.kind = OracleKind::Empirical;
  r.trials = std::max<std::size_t>(o.trials / 2, 4);
  r.value = 0.0;
  for (std::size_t i = 0; i < r.trials; ++i) {
    Draw g(o.seed, kSubmean + 1000 * static_cast<std::uint64_t>(dim), i);
    const CubeProblem p(dim, random_radius(g, dim));
    ScalarField h(p.size(), 0.0);
    const auto boundary = p.box().boundary();
    if (i % 2 == 0) {
      for (std::size_t m : boundary) h[m] = g.uniform();
    } else {
      h[boundary[static_cast<std::size_t>(g.integer(0, static_cast<int>(boundary.size()) - 1))]] = 1.0;
    }
    const ScalarField zero(p.size(), 0.0);
    ScalarField f = dirichlet_solve(p, zero, h);
    for (double& x : f) x = std::max(x, 0.0);
    r.value = std::max(r.value, submean_ratio(p, f));
    ++r.passed;
  }
  std::ostringstream os;
  os << "max ratio over " << r.trials << " nonnegative harmonic functions";
  r.detail = os.str();
  return r;
}

bool SuiteResult::hard_pass() const noexcept {
  return std::all_of(rows.begin(), rows.end(), [](const OracleRow& r) { return r.pass(); });
}

SuiteResult run_oracle_suite(const SuiteOptions& o) {
  SuiteResult s;
  s.rows.push_back(oracle_max_principle(o));
  s.rows.push_back(oracle_poincare(o));
  s.rows.push_back(oracle_poisson_normalization(o));
  s.rows.push_back(oracle_poisson_paths(o));
  s.rows.push_back(oracle_green_symmetry(o));
  s.rows.push_back(oracle_ibp(o));
  s.rows.push_back(oracle_surface_average(o));
  s.rows.push_back(oracle_harnack(o));
  s.rows.push_back(oracle_landscape_floor(o));
  s.rows.push_back(oracle_chernoff(o));
  for (int ell : {3, 6, 9}) s.rows.push_back(oracle_moser_harnack(o, ell));
  for (int dim : {2, 3}) s.rows.push_back(oracle_submean(o, dim));
  return s;
}

void write_suite_text(std::ostream& os, const SuiteResult& r) {
  os << std::left << std::setw(24) << "oracle" << std::setw(10) << "kind" << std::setw(12) << "passed"
     << std::setw(26) << "value" << "status\n";
  for (const auto& row : r.rows) {
    const std::string count = std::to_string(row.passed) + "/" + std::to_string(row.trials);
    os << std::setw(24) << row.name << std::setw(10) << (row.kind == OracleKind::Hard ? "hard" : "empirical")
       << std::setw(12) << count << std::setw(26) << format_real(row.value)
       << (row.kind == OracleKind::Empirical ? "report" : row.pass() ? "PASS" : "FAIL") << '\n';
  }
  os << (r.hard_pass() ? "all hard oracles pass\n" : "hard oracle failure\n");
}

void write_suite_csv(std::ostream& os, const SuiteResult& r) {
  os << "name,kind,trials,passed,value,status\n";
  for (const auto& row : r.rows)
    os << row.name << ',' << (row.kind == OracleKind::Hard ? "hard" : "empirical") << ',' << row.trials << ','
       << row.passed << ',' << format_real(row.value) << ','
       << (row.kind == OracleKind::Empirical ? "report" : row.pass() ? "pass" : "fail") << '\n';
}

}  // namespace landlaw
