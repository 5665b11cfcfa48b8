#include "landlaw/elliptic.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "landlaw/error.hpp"
#include "landlaw/rng.hpp"

namespace landlaw {

namespace {

constexpr double kSiteTolerance = 1e-11;

std::string coord_string(const Coord& c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ')';
  return os.str();
}

void require_size(const Box& box, std::span<const double> f, const char* what) {
  if (f.size() != box.size()) {
    std::ostringstream os;
    os << what << " has " << f.size() << " entries, box has " << box.size();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

}  // namespace

Box::Box(std::vector<int> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) fail(ErrorCode::InvalidDomain, "box needs dimension >= 1");
  for (int l : lengths_)
    if (l < 1) fail(ErrorCode::InvalidDomain, "box extents must be >= 1");
  strides_.assign(lengths_.size(), 1);
  for (int a = dim() - 1; a >= 0; --a) {
    strides_[static_cast<std::size_t>(a)] = size_;
    size_ *= static_cast<std::size_t>(lengths_[static_cast<std::size_t>(a)]);
  }
}

Box Box::cube(int dim, int side) {
  if (dim < 1) fail(ErrorCode::InvalidDomain, "box needs dimension >= 1");
  return Box(std::vector<int>(static_cast<std::size_t>(dim), side));
}

int Box::max_length() const noexcept { return *std::max_element(lengths_.begin(), lengths_.end()); }

std::size_t Box::index(std::span<const int> c) const {
  if (!contains(c)) fail(ErrorCode::InvalidArgument, "coordinate outside box");
  std::size_t idx = 0;
  for (std::size_t a = 0; a < c.size(); ++a) idx += strides_[a] * static_cast<std::size_t>(c[a]);
  return idx;
}

Coord Box::coords(std::size_t idx) const {
  Coord c(lengths_.size());
  for (std::size_t a = 0; a < lengths_.size(); ++a)
    c[a] = static_cast<int>((idx / strides_[a]) % static_cast<std::size_t>(lengths_[a]));
  return c;
}

bool Box::contains(std::span<const int> c) const noexcept {
  if (c.size() != lengths_.size()) return false;
  for (std::size_t a = 0; a < c.size(); ++a)
    if (c[a] < 0 || c[a] >= lengths_[a]) return false;
  return true;
}

std::optional<std::size_t> Box::neighbor(std::size_t idx, int axis, int step) const {
  const auto a = static_cast<std::size_t>(axis);
  const int c = static_cast<int>((idx / strides_[a]) % static_cast<std::size_t>(lengths_[a])) + step;
  if (c < 0 || c >= lengths_[a]) return std::nullopt;
  return step >= 0 ? idx + strides_[a] * static_cast<std::size_t>(step)
                   : idx - strides_[a] * static_cast<std::size_t>(-step);
}

int Box::boundary_axes(std::size_t idx) const {
  int n = 0;
  for (std::size_t a = 0; a < lengths_.size(); ++a) {
    const int c = static_cast<int>((idx / strides_[a]) % static_cast<std::size_t>(lengths_[a]));
    if (c == 0 || c == lengths_[a] - 1) ++n;
  }
  return n;
}

std::vector<std::size_t> Box::interior() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (boundary_axes(i) == 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> Box::boundary() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (boundary_axes(i) > 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> Box::flat_boundary() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size_; ++i)
    if (boundary_axes(i) == 1) out.push_back(i);
  return out;
}

double neg_laplacian(const Box& box, std::span<const double> f, std::size_t n) {
  double acc = 2.0 * box.dim() * f[n];
  for (int a = 0; a < box.dim(); ++a) {
    for (int s : {+1, -1}) {
      const auto m = box.neighbor(n, a, s);
      if (!m) fail(ErrorCode::InvalidArgument, "Laplacian evaluated at a boundary site");
      acc -= f[*m];
    }
  }
  return acc;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Interior numbering of a box and the Dirichlet matrix -Delta + V on it.
struct InteriorSystem {
  std::vector<std::size_t> interior;
  std::vector<std::ptrdiff_t> position;  // box index -> interior slot or -1
  SpMat matrix;
};

InteriorSystem build_system(const Box& box, std::span<const double> v) {
  InteriorSystem s;
  s.interior = box.interior();
  s.position.assign(box.size(), -1);
  for (std::size_t i = 0; i < s.interior.size(); ++i) s.position[s.interior[i]] = static_cast<std::ptrdiff_t>(i);
  std::vector<Eigen::Triplet<double>> trip;
  const auto n = static_cast<Eigen::Index>(s.interior.size());
  trip.reserve(s.interior.size() * static_cast<std::size_t>(2 * box.dim() + 1));
  for (std::size_t i = 0; i < s.interior.size(); ++i) {
    const std::size_t site = s.interior[i];
    const double diag = 2.0 * box.dim() + (v.empty() ? 0.0 : v[site]);
    trip.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i), diag);
    for (int a = 0; a < box.dim(); ++a) {
      for (int st : {+1, -1}) {
        const std::size_t m = *box.neighbor(site, a, st);
        if (s.position[m] >= 0) trip.emplace_back(static_cast<Eigen::Index>(i), s.position[m], -1.0);
      }
    }
  }
  s.matrix.resize(n, n);
  s.matrix.setFromTriplets(trip.begin(), trip.end());
  return s;
}

Eigen::VectorXd interior_rhs(const Box& box, const InteriorSystem& s, std::span<const double> f,
                             std::span<const double> h) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(s.interior.size()));
  for (std::size_t i = 0; i < s.interior.size(); ++i) {
    const std::size_t site = s.interior[i];
    double acc = f[site];
    for (int a = 0; a < box.dim(); ++a) {
      for (int st : {+1, -1}) {
        const std::size_t m = *box.neighbor(site, a, st);
        if (s.position[m] < 0) acc += h[m];
      }
    }
    b[static_cast<Eigen::Index>(i)] = acc;
  }
  return b;
}

ScalarField assemble_solution(const Box& box, const InteriorSystem& s, const Eigen::VectorXd& x,
                              std::span<const double> h) {
  ScalarField u(box.size(), 0.0);
  for (std::size_t i = 0; i < box.size(); ++i)
    if (s.position[i] < 0) u[i] = h[i];
  for (std::size_t i = 0; i < s.interior.size(); ++i) u[s.interior[i]] = x[static_cast<Eigen::Index>(i)];
  return u;
}

// Factorized interior Laplacian of one centered cube, shared between callers.
struct CachedCube {
  InteriorSystem system;
  Eigen::SimplicialLLT<SpMat> llt;
};

std::shared_ptr<const CachedCube> cube_factorization(const CubeProblem& p) {
  static std::shared_mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const CachedCube>> cache;
  const std::pair<int, int> key{p.dim(), p.radius()};
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto entry = std::make_shared<CachedCube>();
  entry->system = build_system(p.box(), {});
  entry->llt.compute(entry->system.matrix);
  if (entry->llt.info() != Eigen::Success) fail(ErrorCode::SingularOperator, "cube Laplacian factorization failed");
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(entry));
  return it->second;
}

}  // namespace

ScalarField solve_box_dirichlet(const Box& box, std::span<const double> v, std::span<const double> f,
                                std::span<const double> h) {
  require_size(box, f, "source");
  require_size(box, h, "boundary data");
  if (!v.empty()) require_size(box, v, "potential");
  const InteriorSystem s = build_system(box, v);
  if (s.interior.empty()) return ScalarField(h.begin(), h.end());
  Eigen::SimplicialLDLT<SpMat> ldlt(s.matrix);
  if (ldlt.info() != Eigen::Success) fail(ErrorCode::SingularOperator, "Dirichlet factorization failed");
  const Eigen::VectorXd x = ldlt.solve(interior_rhs(box, s, f, h));
  return assemble_solution(box, s, x, h);
}

int kernel_radius_cap(int dim) noexcept {
  switch (dim) {
    case 1: return 4096;
    case 2: return 24;
    case 3: return 8;
    default: return 3;
  }
}

CubeProblem::CubeProblem(int dim, int radius)
    : radius_(radius), box_(Box::cube(dim, 2 * std::max(radius, 0) + 1)) {
  if (radius < 0) fail(ErrorCode::InvalidArgument, "cube radius must be >= 0");
  if (radius > kernel_radius_cap(dim)) {
    std::ostringstream os;
    os << "radius " << radius << " exceeds the cap " << kernel_radius_cap(dim) << " for d=" << dim;
    fail(ErrorCode::Scale, os.str());
  }
  center_ = box_.index(Coord(static_cast<std::size_t>(dim), radius));
}

int CubeProblem::shell(std::size_t idx) const {
  int rho = 0;
  for (int c : box_.coords(idx)) rho = std::max(rho, std::abs(c - radius_));
  return rho;
}

std::size_t CubeProblem::embed(std::size_t idx, int from_radius) const {
  if (from_radius > radius_) fail(ErrorCode::InvalidArgument, "cannot embed a larger cube");
  Coord c = Box::cube(dim(), 2 * from_radius + 1).coords(idx);
  for (int& x : c) x += radius_ - from_radius;
  return box_.index(c);
}

ScalarField dirichlet_solve(const CubeProblem& p, std::span<const double> f, std::span<const double> h) {
  require_size(p.box(), f, "source");
  require_size(p.box(), h, "boundary data");
  if (p.radius() == 0) return ScalarField(h.begin(), h.end());
  const auto cached = cube_factorization(p);
  const Eigen::VectorXd x = cached->llt.solve(interior_rhs(p.box(), cached->system, f, h));
  return assemble_solution(p.box(), cached->system, x, h);
}

ScalarField green_column(const CubeProblem& p, std::size_t pole) {
  if (pole >= p.size() || p.box().on_boundary(pole)) fail(ErrorCode::InvalidArgument, "pole must be interior");
  ScalarField f(p.size(), 0.0);
  f[pole] = 1.0;
  const ScalarField zero(p.size(), 0.0);
  return dirichlet_solve(p, f, zero);
}

Eigen::MatrixXd green_matrix(const CubeProblem& p) {
  const auto interior = p.box().interior();
  if (interior.size() > 4096) fail(ErrorCode::Scale, "green_matrix is limited to 4096 interior sites");
  Eigen::MatrixXd g(static_cast<Eigen::Index>(interior.size()), static_cast<Eigen::Index>(interior.size()));
  for (std::size_t j = 0; j < interior.size(); ++j) {
    const ScalarField col = green_column(p, interior[j]);
    for (std::size_t i = 0; i < interior.size(); ++i)
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[interior[i]];
  }
  return g;
}

namespace {

// P_r(xi, .) on the full cube.
ScalarField poisson_kernel(const CubeProblem& p, const ScalarField& green, PoissonPath path) {
  const Box& box = p.box();
  ScalarField P(p.size(), 0.0);
  if (p.radius() == 0) {
    P[p.center()] = 1.0;
    return P;
  }
  if (path == PoissonPath::FromGreen) {
    for (std::size_t m : box.flat_boundary()) {
      // The unique interior neighbor lies one step inward along the face axis.
      const Coord c = box.coords(m);
      for (std::size_t a = 0; a < c.size(); ++a) {
        if (c[a] == 0) P[m] = green[*box.neighbor(m, static_cast<int>(a), +1)];
        if (c[a] == box.lengths()[a] - 1) P[m] = green[*box.neighbor(m, static_cast<int>(a), -1)];
      }
    }
    return P;
  }
  const ScalarField zero(p.size(), 0.0);
  ScalarField h(p.size(), 0.0);
  for (std::size_t m : box.boundary()) {
    h[m] = 1.0;
    P[m] = dirichlet_solve(p, zero, h)[p.center()];
    h[m] = 0.0;
  }
  return P;
}

std::size_t shell_size(int dim, int rho) {
  if (rho == 0) return 1;
  const double outer = std::pow(2.0 * rho + 1.0, dim);
  const double inner = std::pow(2.0 * rho - 1.0, dim);
  return static_cast<std::size_t>(std::llround(outer - inner));
}

}  // namespace

DirichletKernels kernels(const CubeProblem& p, PoissonPath path) {
  DirichletKernels k;
  k.dim = p.dim();
  k.radius = p.radius();
  if (p.radius() == 0) {
    k.green.assign(p.size(), 0.0);
  } else {
    k.green = green_column(p, p.center());
  }
  k.poisson = poisson_kernel(p, k.green, path);
  k.weights.assign(p.size(), 0.0);
  for (int rho = 0; rho <= p.radius(); ++rho) {
    const CubeProblem inner(p.dim(), rho);
    const ScalarField g = rho == 0 ? ScalarField(inner.size(), 0.0) : green_column(inner, inner.center());
    const ScalarField P = rho == p.radius() ? k.poisson : poisson_kernel(inner, g, PoissonPath::FromGreen);
    const auto count = static_cast<double>(shell_size(p.dim(), rho));
    for (std::size_t m : rho == 0 ? std::vector<std::size_t>{inner.center()} : inner.box().boundary())
      k.weights[p.embed(m, rho)] = count * P[m];
  }
  return k;
}

double ibp_residual(const CubeProblem& p, const DirichletKernels& k, std::span<const double> u) {
  require_size(p.box(), u, "field");
  if (k.dim != p.dim() || k.radius != p.radius()) fail(ErrorCode::DimensionMismatch, "kernels belong to another cube");
  if (p.radius() == 0) return 0.0;
  double acc = u[p.center()];
  for (std::size_t m : p.box().boundary()) acc -= k.poisson[m] * u[m];
  for (std::size_t m : p.box().interior()) acc -= k.green[m] * neg_laplacian(p.box(), u, m);
  return std::abs(acc);
}

SurfaceAverages surface_averages(const CubeProblem& p, const DirichletKernels& k, std::span<const double> u) {
  require_size(p.box(), u, "field");
  if (k.dim != p.dim() || k.radius != p.radius()) fail(ErrorCode::DimensionMismatch, "kernels belong to another cube");
  const int R = p.radius();
  const auto shells = static_cast<std::size_t>(R) + 1;
  SurfaceAverages s;
  s.a.assign(shells, 0.0);
  s.big_a.assign(shells, 0.0);
  s.margin.assign(shells, 0.0);
  std::vector<double> sums(shells, 0.0);
  for (std::size_t m = 0; m < p.size(); ++m) sums[static_cast<std::size_t>(p.shell(m))] += k.weights[m] * u[m];
  const double xi = u[p.center()];
  double running = 0.0;
  double cells = 0.0;
  for (std::size_t i = 0; i < shells; ++i) {
    const auto n = static_cast<double>(shell_size(p.dim(), static_cast<int>(i)));
    s.a[i] = sums[i] / n;
    running += sums[i];
    cells += n;
    s.big_a[i] = running / cells;
    s.margin[i] = s.a[i] - xi + static_cast<double>(i * i);
    s.min_margin = i == 0 ? s.margin[i] : std::min(s.min_margin, s.margin[i]);
  }
  return s;
}

MaxPrincipleResult max_principle_check(const Box& box, std::span<const double> v, std::span<const double> f) {
  require_size(box, f, "field");
  if (!v.empty()) require_size(box, v, "potential");
  const auto interior = box.interior();
  for (std::size_t n : interior) {
    const double vn = v.empty() ? 0.0 : v[n];
    if (vn < 0.0) fail(ErrorCode::Precondition, "potential is negative at " + coord_string(box.coords(n)));
    if (neg_laplacian(box, f, n) + vn * f[n] < -kSiteTolerance)
      fail(ErrorCode::Precondition, "not a super-solution at " + coord_string(box.coords(n)));
  }
  MaxPrincipleResult r;
  const auto flat = box.flat_boundary();
  if (interior.empty() || flat.empty()) return r;
  r.flat_boundary_min = f[flat.front()];
  for (std::size_t m : flat) r.flat_boundary_min = std::min(r.flat_boundary_min, f[m]);
  std::size_t arg = interior.front();
  for (std::size_t n : interior)
    if (f[n] < f[arg]) arg = n;
  r.interior_min = f[arg];
  // With v > 0 somewhere only nonnegativity propagates inward, so the bound is min(flat min, 0).
  const bool free = v.empty() || std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
  r.bound = free ? r.flat_boundary_min : std::min(r.flat_boundary_min, 0.0);
  r.pass = r.interior_min >= r.bound - 1e-12;
  if (!r.pass) r.witness = arg;
  return r;
}

PoincareResult poincare_check(const Box& box, std::span<const double> f) {
  require_size(box, f, "field");
  double mean = 0.0;
  for (double x : f) mean += x;
  mean /= static_cast<double>(f.size());
  PoincareResult r;
  for (double x : f) r.lhs += (x - mean) * (x - mean);
  double edges = 0.0;
  for (std::size_t n = 0; n < box.size(); ++n) {
    for (int a = 0; a < box.dim(); ++a) {
      if (const auto m = box.neighbor(n, a, +1)) edges += (f[*m] - f[n]) * (f[*m] - f[n]);
    }
  }
  const double l = box.max_length();
  r.rhs = 0.5 * box.dim() * l * l * edges;
  r.pass = r.lhs <= r.rhs * (1.0 + 1e-12) + 1e-300;
  return r;
}

double submean_ratio(const CubeProblem& p, std::span<const double> f) {
  require_size(p.box(), f, "field");
  for (std::size_t m = 0; m < p.size(); ++m)
    if (f[m] < 0.0) fail(ErrorCode::Precondition, "negative value at " + coord_string(p.box().coords(m)));
  for (std::size_t m : p.box().interior())
    if (neg_laplacian(p.box(), f, m) > kSiteTolerance)
      fail(ErrorCode::Precondition, "not subharmonic at " + coord_string(p.box().coords(m)));
  if (p.radius() == 0) return 1.0;
  double surface = 0.0;
  for (std::size_t m : p.box().boundary()) surface += f[m];
  const double denom = std::pow(static_cast<double>(p.radius()), 1 - p.dim()) * surface;
  if (denom == 0.0) return f[p.center()] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return f[p.center()] / denom;
}

double moser_harnack_ratio(int dim, int ell, std::span<const double> g) {
  if (ell < 1) fail(ErrorCode::InvalidArgument, "ell must be >= 1");
  const Box box = Box::cube(dim, 3 * ell);
  require_size(box, g, "field");
  double total = 0.0;
  for (std::size_t n = 0; n < box.size(); ++n) {
    if (g[n] < 0.0) fail(ErrorCode::Precondition, "negative value at " + coord_string(box.coords(n)));
    total += g[n] * g[n];
  }
  for (std::size_t n : box.interior())
    if (neg_laplacian(box, g, n) > 1.0 + kSiteTolerance)
      fail(ErrorCode::Precondition, "-Delta g exceeds 1 at " + coord_string(box.coords(n)));
  double sup = 0.0;
  for (std::size_t n = 0; n < box.size(); ++n) {
    const Coord c = box.coords(n);
    if (std::all_of(c.begin(), c.end(), [ell](int x) { return x >= ell && x < 2 * ell; }))
      sup = std::max(sup, g[n] * g[n]);
  }
  const double l2 = static_cast<double>(ell) * ell;
  const double num = total / std::pow(static_cast<double>(ell), dim) + l2 * l2;
  if (sup == 0.0) return std::numeric_limits<double>::infinity();
  return num / sup;
}

HarnackResult harnack_check(const Box& omega, std::span<const double> v, double vmax, std::span<const double> f,
                            const Cube& q) {
  require_size(omega, f, "field");
  if (!v.empty()) require_size(omega, v, "potential");
  if (q.dim() != omega.dim()) fail(ErrorCode::DimensionMismatch, "cube and box dimensions differ");
  for (std::size_t n = 0; n < omega.size(); ++n) {
    if (f[n] < 0.0) fail(ErrorCode::Precondition, "negative value at " + coord_string(omega.coords(n)));
    const double vn = v.empty() ? 0.0 : v[n];
    if (vn < 0.0 || vn > vmax) fail(ErrorCode::Precondition, "potential outside [0, V_max] at " + coord_string(omega.coords(n)));
  }
  for (std::size_t n : omega.interior()) {
    const double vn = v.empty() ? 0.0 : v[n];
    if (neg_laplacian(omega, f, n) + vn * f[n] < -kSiteTolerance)
      fail(ErrorCode::Precondition, "not a super-solution at " + coord_string(omega.coords(n)));
  }
  HarnackResult r;
  r.sup = -1.0;
  r.inf = std::numeric_limits<double>::infinity();
  for (std::size_t pos = 0; pos < q.cardinality(); ++pos) {
    Coord c = q.local(pos);
    for (std::size_t a = 0; a < c.size(); ++a) c[a] += q.anchor[a];
    if (!omega.contains(c) || omega.on_boundary(omega.index(c)))
      fail(ErrorCode::Precondition, "Q leaves the interior of the box at " + coord_string(c));
    const double x = f[omega.index(c)];
    r.sup = std::max(r.sup, x);
    r.inf = std::min(r.inf, x);
  }
  r.log_constant = omega.dim() * q.side() * std::log(2.0 * omega.dim() + vmax);
  if (r.inf <= 0.0) {
    r.pass = r.sup <= 0.0;
    return r;
  }
  r.pass = std::log(r.sup) - std::log(r.inf) <= r.log_constant + std::log1p(1e-9);
  return r;
}

double kl_divergence(double x, double y) {
  if (!(x > 0.0 && x < 1.0) || !(y > 0.0 && y < 1.0))
    fail(ErrorCode::InvalidArgument, "KL divergence needs x, y in (0, 1)");
  return x * std::log(x / y) + (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
}

double chernoff_bound(std::size_t block, double p, double lambda) {
  if (block == 0) fail(ErrorCode::InvalidArgument, "block must be nonempty");
  if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::InvalidArgument, "p must lie in (0, 1)");
  if (!(lambda > 0.0 && lambda < 1.0 - p)) fail(ErrorCode::InvalidArgument, "lambda must lie in (0, 1 - p)");
  return std::exp(-kl_divergence(1.0 - lambda, p) * static_cast<double>(block));
}

double chernoff_frequency(std::size_t block, double p, double lambda, std::size_t trials, std::uint64_t seed) {
  chernoff_bound(block, p, lambda);
  if (trials == 0) fail(ErrorCode::InvalidArgument, "trials must be >= 1");
  const double threshold = (1.0 - lambda) * static_cast<double>(block);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const CounterStream stream(seed, t);
    std::size_t ones = 0;
    for (std::size_t i = 0; i < block; ++i)
      if (stream.uniform(i) < p) ++ones;
    if (static_cast<double>(ones) >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace landlaw
