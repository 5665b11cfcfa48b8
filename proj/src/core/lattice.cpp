#include "landlaw/lattice.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "landlaw/error.hpp"

namespace landlaw {

namespace {

// Desk-scale cap on K^d; keeps every index computation inside 64 bits with room.
constexpr std::size_t kMaxVolume = std::size_t{1} << 32;

int wrap(long long c, int side) {
  long long m = c % side;
  return static_cast<int>(m < 0 ? m + side : m);
}

}  // namespace

Torus::Torus(int dim, int side) : dim_(dim), side_(side), volume_(1) {
  if (dim < 1) fail(ErrorCode::InvalidDomain, "torus dimension must be >= 1, got " + std::to_string(dim));
  if (side < 3) fail(ErrorCode::InvalidDomain, "torus side K must be >= 3, got " + std::to_string(side));
  strides_.assign(static_cast<std::size_t>(dim), 1);
  for (int i = 0; i < dim; ++i) {
    if (volume_ > kMaxVolume / static_cast<std::size_t>(side))
      fail(ErrorCode::InvalidDomain, "torus volume K^d too large");
    volume_ *= static_cast<std::size_t>(side);
  }
  for (int i = dim - 2; i >= 0; --i)
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i) + 1] * static_cast<std::size_t>(side);
}

Torus make_torus(int dim, int side) { return Torus(dim, side); }

std::size_t Torus::index(std::span<const int> c) const {
  if (static_cast<int>(c.size()) != dim_)
    fail(ErrorCode::DimensionMismatch, "coordinate has wrong dimension");
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i)
    idx += static_cast<std::size_t>(wrap(c[static_cast<std::size_t>(i)], side_)) * strides_[static_cast<std::size_t>(i)];
  return idx;
}

Coord Torus::coords(std::size_t site) const {
  Coord c(static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) c[static_cast<std::size_t>(i)] = coord(site, i);
  return c;
}

std::size_t Torus::step(std::size_t site, int axis, int step) const {
  const int c = coord(site, axis);
  const int n = wrap(static_cast<long long>(c) + step, side_);
  const auto s = strides_[static_cast<std::size_t>(axis)];
  return site - static_cast<std::size_t>(c) * s + static_cast<std::size_t>(n) * s;
}

std::vector<std::size_t> Torus::neighbors(std::size_t site) const {
  std::vector<std::size_t> out;
  out.reserve(2 * static_cast<std::size_t>(dim_));
  for (int i = 0; i < dim_; ++i) {
    out.push_back(step(site, i, +1));
    out.push_back(step(site, i, -1));
  }
  return out;
}

Cube::Cube(Coord a, std::vector<int> l) : anchor(std::move(a)), lengths(std::move(l)) {
  if (anchor.size() != lengths.size())
    fail(ErrorCode::DimensionMismatch, "cube anchor and lengths differ in dimension");
  for (int len : lengths)
    if (len < 1) fail(ErrorCode::InvalidArgument, "cube extents must be >= 1");
}

Cube Cube::regular(Coord a, int side) {
  const auto d = a.size();
  return Cube(std::move(a), std::vector<int>(d, side));
}

bool Cube::is_regular() const noexcept {
  return std::adjacent_find(lengths.begin(), lengths.end(), std::not_equal_to<>()) == lengths.end();
}

int Cube::side() const noexcept {
  return lengths.empty() ? 0 : *std::max_element(lengths.begin(), lengths.end());
}

std::size_t Cube::cardinality() const noexcept {
  std::size_t n = 1;
  for (int len : lengths) n *= static_cast<std::size_t>(len);
  return n;
}

Coord Cube::local(std::size_t position) const {
  Coord c(lengths.size());
  for (std::size_t i = lengths.size(); i-- > 0;) {
    const auto len = static_cast<std::size_t>(lengths[i]);
    c[i] = static_cast<int>(position % len);
    position /= len;
  }
  return c;
}

std::vector<std::size_t> Cube::sites(const Torus& t) const {
  if (dim() != t.dim()) fail(ErrorCode::DimensionMismatch, "cube and torus differ in dimension");
  for (int len : lengths)
    if (len > t.side()) fail(ErrorCode::InvalidArgument, "cube wider than the torus overlaps itself");
  std::vector<std::size_t> out;
  out.reserve(cardinality());
  Coord c(anchor.size());
  const auto n = cardinality();
  for (std::size_t p = 0; p < n; ++p) {
    const Coord l = local(p);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = anchor[i] + l[i];
    out.push_back(t.index(c));
  }
  return out;
}

std::vector<int> interval_lengths(int side, int s) {
  if (s < 1 || s > side)
    fail(ErrorCode::InvalidPartition,
         "partition side s must satisfy 1 <= s <= K (s=" + std::to_string(s) + ", K=" + std::to_string(side) + ")");
  std::vector<int> out(static_cast<std::size_t>(side / s), s);
  if (side % s != 0) out.push_back(side % s);
  return out;
}

Partition partition(const Torus& t, int s, std::span<const int> shift) {
  const auto d = static_cast<std::size_t>(t.dim());
  Partition p;
  p.side = s;
  p.shift.assign(d, 0);
  const auto lens = interval_lengths(t.side(), s);
  if (!shift.empty()) {
    if (shift.size() != d) fail(ErrorCode::InvalidPartition, "shift has wrong dimension");
    for (std::size_t i = 0; i < d; ++i) {
      if (shift[i] < 0 || shift[i] > s - 1)
        fail(ErrorCode::InvalidPartition, "shift components must lie in [0, s-1]");
      p.shift[i] = shift[i];
    }
  }
  std::vector<int> starts;
  for (int acc = 0; int len : lens) {
    starts.push_back(acc);
    acc += len;
  }
  const std::size_t per_axis = lens.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < d; ++i) total *= per_axis;
  p.boxes.reserve(total);
  std::vector<std::size_t> pick(d, 0);
  for (std::size_t b = 0; b < total; ++b) {
    std::size_t rest = b;
    for (std::size_t i = d; i-- > 0;) {
      pick[i] = rest % per_axis;
      rest /= per_axis;
    }
    Coord anchor(d);
    std::vector<int> l(d);
    for (std::size_t i = 0; i < d; ++i) {
      anchor[i] = starts[pick[i]] + p.shift[i];
      l[i] = lens[pick[i]];
    }
    p.boxes.emplace_back(std::move(anchor), std::move(l));
  }
  return p;
}

std::pair<int, int> middle_third(int start, int length) {
  if (length < 3) fail(ErrorCode::DegenerateCube, "middle third needs side length >= 3");
  return {start + (length + 2) / 3, length / 3};
}

Cube tripled(const Torus& t, const Cube& q) {
  if (q.dim() != t.dim()) fail(ErrorCode::DimensionMismatch, "cube and torus differ in dimension");
  Coord a(q.anchor);
  std::vector<int> l(q.lengths);
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (3 * l[i] > t.side())
      fail(ErrorCode::Scale, "3Q on the torus requires 3*l(Q) <= K");
    a[i] -= l[i];
    l[i] *= 3;
  }
  return Cube(std::move(a), std::move(l));
}

Cube middle_third(const Cube& q) {
  Coord a(q.anchor);
  std::vector<int> l(q.lengths);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto [s, len] = middle_third(q.anchor[i], q.lengths[i]);
    a[i] = s;
    l[i] = len;
  }
  return Cube(std::move(a), std::move(l));
}

namespace {

int boundary_axes(const Cube& q, const Coord& local) {
  int count = 0;
  for (std::size_t i = 0; i < local.size(); ++i)
    if (local[i] == 0 || local[i] == q.lengths[i] - 1) ++count;
  return count;
}

std::vector<std::size_t> collect_boundary(const Torus& t, const Cube& q, bool flat) {
  const auto all = q.sites(t);
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < all.size(); ++p) {
    const int k = boundary_axes(q, q.local(p));
    if (flat ? k == 1 : k >= 1) out.push_back(all[p]);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> boundary(const Torus& t, const Cube& q) { return collect_boundary(t, q, false); }

std::vector<std::size_t> flat_boundary(const Torus& t, const Cube& q) { return collect_boundary(t, q, true); }

CubeSets cube_sets(const Torus& t, const Cube& q) {
  return CubeSets{tripled(t, q), middle_third(q), boundary(t, q), flat_boundary(t, q)};
}

ScalarField cutoff(const Torus& t, const Cube& q) {
  if (!q.is_regular()) fail(ErrorCode::InvalidArgument, "cut-off needs a regular cube");
  const int r = q.side();
  if (r < 3) fail(ErrorCode::DegenerateCube, "cut-off needs side length >= 3");
  const Cube mid = middle_third(q);
  const int jmax = r / 3;
  ScalarField chi(t.volume(), 0.0);
  const auto sites = q.sites(t);
  for (std::size_t p = 0; p < sites.size(); ++p) {
    const Coord l = q.local(p);
    int dist = 0;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const int lo = mid.anchor[i] - q.anchor[i];
      const int hi = lo + mid.lengths[i] - 1;
      dist = std::max({dist, lo - l[i], l[i] - hi});
    }
    if (dist <= jmax) chi[sites[p]] = 1.0 - 3.0 * dist / r;
  }
  return chi;
}

double VectorField::squared_norm(std::size_t site) const {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double g = component(site, i);
    s += g * g;
  }
  return s;
}

VectorField gradient(const Torus& t, std::span<const double> f) {
  if (f.size() != t.volume()) fail(ErrorCode::DimensionMismatch, "field size differs from torus volume");
  VectorField g{t.dim(), std::vector<double>(t.volume() * static_cast<std::size_t>(t.dim()))};
  for (std::size_t n = 0; n < t.volume(); ++n)
    for (int i = 0; i < t.dim(); ++i)
      g.data[n * static_cast<std::size_t>(t.dim()) + static_cast<std::size_t>(i)] = f[t.step(n, i, 1)] - f[n];
  return g;
}

}  // namespace landlaw
