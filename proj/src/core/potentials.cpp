#include "landlaw/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "landlaw/error.hpp"
#include "landlaw/rng.hpp"

namespace landlaw {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

Distribution Distribution::uniform(double lo, double hi) {
  if (!finite_nonneg(lo) || !std::isfinite(hi) || hi < lo)
    fail(ErrorCode::InvalidPotential, "uniform(a,b) needs 0 <= a <= b < inf");
  return Distribution(UniformLaw{lo, hi});
}

Distribution Distribution::bernoulli(double p, double height) {
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidPotential, "bernoulli p must lie in [0,1]");
  if (!finite_nonneg(height)) fail(ErrorCode::InvalidPotential, "bernoulli height must be finite and >= 0");
  return Distribution(BernoulliLaw{p, height});
}

Distribution Distribution::discrete(std::vector<double> values, std::vector<double> probs) {
  if (values.empty() || values.size() != probs.size())
    fail(ErrorCode::InvalidPotential, "discrete law needs matching non-empty value and probability lists");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!finite_nonneg(values[i])) fail(ErrorCode::InvalidPotential, "discrete values must be finite and >= 0");
    if (!(probs[i] >= 0.0)) fail(ErrorCode::InvalidPotential, "discrete probabilities must be >= 0");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) fail(ErrorCode::InvalidPotential, "discrete probabilities must sum to 1");
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  DiscreteLaw law;
  for (auto i : order) {
    law.values.push_back(values[i]);
    law.probs.push_back(probs[i]);
  }
  return Distribution(std::move(law));
}

double Distribution::cdf(double delta) const {
  if (delta < 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const UniformLaw& u) {
            if (delta >= u.hi) return 1.0;
            if (delta < u.lo) return 0.0;
            return (delta - u.lo) / (u.hi - u.lo);
          },
          [&](const BernoulliLaw& b) {
            if (delta >= b.height) return 1.0;
            return 1.0 - b.p;
          },
          [&](const DiscreteLaw& d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d.values.size() && d.values[i] <= delta; ++i) acc += d.probs[i];
            return std::min(acc, 1.0);
          },
      },
      law_);
}

double Distribution::quantile(double unit) const {
  return std::visit(
      overloaded{
          [&](const UniformLaw& u) { return u.lo + (u.hi - u.lo) * unit; },
          [&](const BernoulliLaw& b) { return unit < b.p ? b.height : 0.0; },
          [&](const DiscreteLaw& d) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d.values.size(); ++i) {
              acc += d.probs[i];
              if (unit < acc && d.probs[i] > 0.0) return d.values[i];
            }
            for (std::size_t i = d.values.size(); i-- > 0;)
              if (d.probs[i] > 0.0) return d.values[i];
            return d.values.back();
          },
      },
      law_);
}

double Distribution::sup() const {
  return std::visit(overloaded{
                        [](const UniformLaw& u) { return u.hi; },
                        [](const BernoulliLaw& b) { return b.p > 0.0 ? b.height : 0.0; },
                        [](const DiscreteLaw& d) {
                          for (std::size_t i = d.values.size(); i-- > 0;)
                            if (d.probs[i] > 0.0) return d.values[i];
                          return 0.0;
                        },
                    },
                    law_);
}

double Distribution::inf() const {
  return std::visit(overloaded{
                        [](const UniformLaw& u) { return u.lo; },
                        [](const BernoulliLaw& b) { return b.p < 1.0 ? 0.0 : b.height; },
                        [](const DiscreteLaw& d) {
                          for (std::size_t i = 0; i < d.values.size(); ++i)
                            if (d.probs[i] > 0.0) return d.values[i];
                          return 0.0;
                        },
                    },
                    law_);
}

bool Distribution::anchored_at_zero() const { return inf() == 0.0 && sup() > 0.0; }

bool Distribution::is_point_mass() const { return inf() == sup(); }

std::string Distribution::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const UniformLaw& u) { os << "uniform(" << u.lo << "," << u.hi << ")"; },
                 [&](const BernoulliLaw& b) { os << "bernoulli(p=" << b.p << ",h=" << b.height << ")"; },
                 [&](const DiscreteLaw& d) {
                   os << "discrete(";
                   for (std::size_t i = 0; i < d.values.size(); ++i)
                     os << (i ? ";" : "") << d.values[i] << ":" << d.probs[i];
                   os << ")";
                 },
             },
             law_);
  return os.str();
}

double cdf_eval(const Distribution& dist, double delta) { return dist.cdf(delta); }

PotentialField::PotentialField(Torus torus, std::vector<double> values, std::optional<double> bound)
    : torus_(torus), values_(std::move(values)), bound_(bound) {
  if (values_.size() != torus_.volume())
    fail(ErrorCode::DimensionMismatch, "potential has " + std::to_string(values_.size()) +
                                           " values, torus needs " + std::to_string(torus_.volume()));
  for (double v : values_)
    if (!finite_nonneg(v)) fail(ErrorCode::InvalidPotential, "potential values must be finite and >= 0");
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  vmin_ = *lo;
  vmax_ = *hi;
  if (bound_ && !(*bound_ >= vmax_))
    fail(ErrorCode::InvalidPotential, "declared V_max bound is below the realized maximum");
}

PotentialField periodic_potential(const Torus& t, std::span<const int> cell_dims, std::span<const double> cell) {
  if (static_cast<int>(cell_dims.size()) != t.dim())
    fail(ErrorCode::DimensionMismatch, "cell dimensions do not match the torus");
  std::size_t cell_size = 1;
  for (int p : cell_dims) {
    if (p < 1) fail(ErrorCode::IncompatiblePeriod, "cell extents must be >= 1");
    if (t.side() % p != 0)
      fail(ErrorCode::IncompatiblePeriod,
           "period " + std::to_string(p) + " does not divide K=" + std::to_string(t.side()));
    cell_size *= static_cast<std::size_t>(p);
  }
  if (cell.size() != cell_size) fail(ErrorCode::DimensionMismatch, "cell value count does not match its extents");
  for (double v : cell)
    if (!finite_nonneg(v)) fail(ErrorCode::InvalidPotential, "cell values must be finite and >= 0");
  std::vector<double> v(t.volume());
  for (std::size_t n = 0; n < t.volume(); ++n) {
    std::size_t idx = 0;
    for (int i = 0; i < t.dim(); ++i) {
      const auto p = static_cast<std::size_t>(cell_dims[static_cast<std::size_t>(i)]);
      idx = idx * p + static_cast<std::size_t>(t.coord(n, i)) % p;
    }
    v[n] = cell[idx];
  }
  return PotentialField(t, std::move(v));
}

PotentialField sample_anderson(const Torus& t, const Distribution& dist, std::uint64_t seed,
                               std::uint64_t realization) {
  const CounterStream stream(seed, realization);
  std::vector<double> v(t.volume());
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = dist.quantile(stream.uniform(n));
  return PotentialField(t, std::move(v), dist.sup());
}

PotentialField dual_potential(const PotentialField& v) {
  const double top = v.reference_max();
  std::vector<double> out(v.size());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = top - v[n];
  return PotentialField(v.torus(), std::move(out), v.bound());
}

}  // namespace landlaw
