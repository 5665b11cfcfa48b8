#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "landlaw/lattice.hpp"

namespace landlaw {

struct UniformLaw {
  double lo = 0.0;
  double hi = 1.0;
};

/// Value `height` with probability p, 0 otherwise.
struct BernoulliLaw {
  double p = 0.5;
  double height = 1.0;
};

struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

/// Common single-site law P0 of an i.i.d. potential.
class Distribution {
 public:
  static Distribution uniform(double lo, double hi);
  static Distribution bernoulli(double p, double height);
  static Distribution discrete(std::vector<double> values, std::vector<double> probs);

  /// F(delta) = P0(v <= delta); right-continuous.
  double cdf(double delta) const;
  /// Inverse-CDF transform of a uniform draw in [0, 1).
  double quantile(double unit) const;
  /// Essential supremum and infimum of the support.
  double sup() const;
  double inf() const;
  /// inf supp = 0 and sup supp > 0.
  bool anchored_at_zero() const;
  bool is_point_mass() const;
  std::string describe() const;

  const std::variant<UniformLaw, BernoulliLaw, DiscreteLaw>& law() const noexcept { return law_; }

 private:
  explicit Distribution(std::variant<UniformLaw, BernoulliLaw, DiscreteLaw> law) : law_(std::move(law)) {}
  std::variant<UniformLaw, BernoulliLaw, DiscreteLaw> law_;
};

double cdf_eval(const Distribution& dist, double delta);

/// Nonnegative potential on a torus. `vmax` is the realized maximum; `bound`,
/// when present, is the ensemble's deterministic V_max (the law's essential
/// sup) and takes precedence in dual constructions.
class PotentialField {
 public:
  PotentialField(Torus torus, std::vector<double> values, std::optional<double> bound = std::nullopt);

  const Torus& torus() const noexcept { return torus_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  double vmax() const noexcept { return vmax_; }
  double vmin() const noexcept { return vmin_; }
  std::optional<double> bound() const noexcept { return bound_; }
  /// V_max used by dual transforms and default grids.
  double reference_max() const noexcept { return bound_.value_or(vmax_); }
  bool is_constant() const noexcept { return vmin_ == vmax_; }
  bool is_zero() const noexcept { return vmax_ == 0.0; }

 private:
  Torus torus_;
  std::vector<double> values_;
  double vmax_ = 0.0;
  double vmin_ = 0.0;
  std::optional<double> bound_;
};

/// Tiles a cell of extents `cell_dims` (row-major values) across the torus.
PotentialField periodic_potential(const Torus& t, std::span<const int> cell_dims, std::span<const double> cell);

/// One realization of the i.i.d. field; site n uses counter n of the stream
/// (seed, realization).
PotentialField sample_anderson(const Torus& t, const Distribution& dist, std::uint64_t seed,
                               std::uint64_t realization = 0);

/// V_max - v_n with V_max = reference_max(); the result keeps the same bound.
PotentialField dual_potential(const PotentialField& v);

}  // namespace landlaw
