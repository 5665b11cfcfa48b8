#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "landlaw/operator.hpp"

namespace landlaw {

enum class CountMethod { Automatic, Dense, Inertia };

struct CountOptions {
  CountMethod method = CountMethod::Automatic;
  /// Largest K^d counted through a full eigendecomposition under Automatic.
  std::size_t dense_limit = 4096;
};

/// Tie guard added to (count_leq) or subtracted from (count_lt) the shift.
inline double tie_guard(double mu) noexcept { return 1e-12 * (1.0 + (mu < 0 ? -mu : mu)); }

/// Sorted eigenvalues of a Hamiltonian.
struct Spectrum {
  std::vector<double> eigenvalues;

  std::size_t count_leq(double mu) const;
  std::size_t count_lt(double mu) const;
};

Spectrum full_spectrum(const Hamiltonian& h);

struct InertiaResult {
  std::size_t negatives = 0;
  /// Bound on how far the factorization's backward error moves eigenvalues.
  double error_bound = 0.0;
};

/// Sylvester inertia of a symmetric LDL^T of H - shift I. Throws
/// ShiftDegeneracy when a pivot vanishes to working precision.
InertiaResult shifted_inertia(const Hamiltonian& h, double shift);
std::size_t inertia_negative_count(const Hamiltonian& h, double shift);

/// Inertia counts that cannot be certified after the tie-guard retries fall
/// back to a full eigendecomposition up to this size.
inline constexpr std::size_t kDenseFallbackLimit = 4096;

/// Exact number of eigenvalues <= mu.
std::size_t count_leq(const Hamiltonian& h, double mu, const CountOptions& options = {});
/// Exact number of eigenvalues < mu.
std::size_t count_lt(const Hamiltonian& h, double mu, const CountOptions& options = {});

enum class CurveKind { N, NStrict, Nu, NuDual, MeanN, MeanNu, MeanNuDual };

const char* curve_kind_name(CurveKind kind) noexcept;
CurveKind parse_curve_kind(const std::string& name);

struct CountingCurve {
  std::vector<double> grid;
  std::vector<double> values;
  CurveKind kind = CurveKind::N;
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return grid.size(); }
  bool nondecreasing() const noexcept;
};

/// N(mu) = K^{-d} count_leq(mu) on a sorted grid.
CountingCurve ids_curve(const Hamiltonian& h, std::span<const double> grid, const CountOptions& options = {});

/// max over the grid of |count_leq(H, mu) + count_lt(H~, 4d + V_max - mu) - K^d|.
/// Requires K even.
std::int64_t dual_identity_check(const Hamiltonian& h, std::span<const double> grid,
                                 const CountOptions& options = {});

}  // namespace landlaw
