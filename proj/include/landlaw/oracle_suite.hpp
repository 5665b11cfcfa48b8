#pragma once

// Seeded randomized battery over the elliptic estimates. Hard rows check
// statements with explicit constants; empirical rows measure constants the
// theory leaves unspecified.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace landlaw {

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 500;
  std::size_t chernoff_trials = 100000;
};

enum class OracleKind { Hard, Empirical };

struct OracleRow {
  std::string name;
  OracleKind kind = OracleKind::Hard;
  std::size_t trials = 0;
  std::size_t passed = 0;
  /// Worst observed slack for hard rows (negative means a failure); the
  /// measured constant for empirical rows.
  double value = 0.0;
  std::string detail;

  bool pass() const noexcept { return kind == OracleKind::Empirical || passed == trials; }
};

OracleRow oracle_max_principle(const SuiteOptions& o);
OracleRow oracle_poincare(const SuiteOptions& o);
OracleRow oracle_poisson_normalization(const SuiteOptions& o);
OracleRow oracle_poisson_paths(const SuiteOptions& o);
OracleRow oracle_green_symmetry(const SuiteOptions& o);
OracleRow oracle_ibp(const SuiteOptions& o);
OracleRow oracle_surface_average(const SuiteOptions& o);
OracleRow oracle_harnack(const SuiteOptions& o);
OracleRow oracle_landscape_floor(const SuiteOptions& o);
OracleRow oracle_chernoff(const SuiteOptions& o);
/// min over random sub-solutions of the Moser-Harnack ratio at d = 2.
OracleRow oracle_moser_harnack(const SuiteOptions& o, int ell);
/// max over random nonnegative harmonic functions of the sub-mean ratio.
OracleRow oracle_submean(const SuiteOptions& o, int dim);

struct SuiteResult {
  std::vector<OracleRow> rows;

  bool hard_pass() const noexcept;
};

SuiteResult run_oracle_suite(const SuiteOptions& o);

void write_suite_text(std::ostream& os, const SuiteResult& r);
/// name,kind,trials,passed,value,status
void write_suite_csv(std::ostream& os, const SuiteResult& r);

}  // namespace landlaw
