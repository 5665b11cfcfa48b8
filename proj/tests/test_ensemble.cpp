#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "landlaw/boxcount.hpp"
#include "landlaw/ensemble.hpp"
#include "landlaw/error.hpp"
#include "landlaw/io.hpp"

using namespace landlaw;

namespace {

EnsembleConfig base(int k, std::size_t r) {
  EnsembleConfig cfg;
  cfg.dim = 1;
  cfg.side = k;
  cfg.distribution = Distribution::uniform(0.0, 4.0);
  cfg.realizations = r;
  cfg.master_seed = 21;
  cfg.grid = default_grid(1, k, 4.0, 40);
  cfg.want_upper = true;
  return cfg;
}

}  // namespace

TEST_CASE("single realization equals its own curves") {
  auto cfg = base(40, 1);
  const auto r = run_ensemble(cfg);
  const Torus t(1, 40);
  const Hamiltonian h(t, sample_anderson(t, cfg.distribution, cfg.master_seed, 0));
  CHECK(r.mean_n == ids_curve(h, cfg.grid).values);
  CHECK(r.mean_nu == nu_curve(solve_landscape(h), cfg.grid).values);
  for (double s : r.se_n) CHECK(s == 0.0);
}

TEST_CASE("thread count does not change results") {
  auto cfg = base(60, 12);
  cfg.want_dual = true;
  const auto a = run_ensemble(cfg);
  cfg.threads = 4;
  const auto b = run_ensemble(cfg);
  CHECK(a.mean_n == b.mean_n);
  CHECK(a.se_nu == b.se_nu);
  // Dual means carry NaN below the box-counting domain; compare bit patterns.
  REQUIRE(a.mean_nu_dual.size() == b.mean_nu_dual.size());
  CHECK(std::memcmp(a.mean_nu_dual.data(), b.mean_nu_dual.data(), a.mean_nu_dual.size() * sizeof(double)) == 0);
  CHECK(upper_violations(a).empty());
  for (std::size_t i = 1; i < a.grid.size(); ++i) CHECK(a.mean_n[i] >= a.mean_n[i - 1]);
}

TEST_CASE("point mass ensembles have zero variance") {
  auto cfg = base(30, 5);
  cfg.distribution = Distribution::bernoulli(1.0, 2.0);
  cfg.solve.allow_constant = true;
  const auto r = run_ensemble(cfg);
  for (double s : r.se_n) CHECK(s == 0.0);
  for (double s : r.se_nu) CHECK(s == 0.0);
}

TEST_CASE("failures name the realization") {
  auto cfg = base(30, 3);
  cfg.distribution = Distribution::bernoulli(1.0, 2.0);
  try {
    run_ensemble(cfg);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Realization);
    CHECK(std::string(e.what()).find("realization 0") != std::string::npos);
  }
}

TEST_CASE("default grid") {
  const auto g = default_grid(1, 10, 4.0, 200);
  CHECK(g.back() == 8.0);
  CHECK(g.front() >= 0.01);
  CHECK(g.size() < 200);
  CHECK(default_grid(2, 100, 4.0, 200).size() == 200);
}

TEST_CASE("tail window") {
  EnsembleConfig cfg;
  cfg.side = 2000;
  cfg.grid = {1e-7, 2.5e-7, 1e-3, 0.01, 0.1, 1.0};
  const std::vector<double> mean{0, 0, 0, 1e-6, 1e-3, 0.1};
  const auto w = tail_window(cfg, mean, 50.0);
  CHECK(w.lo == doctest::Approx(2.5e-7));
  CHECK(w.hi == 1.0);
  CHECK(w.points == std::vector{0.01, 0.1, 1.0});
  CHECK(w.excluded == std::vector{2.5e-7, 1e-3});
  CHECK_THROWS_AS(tail_window(cfg, std::vector<double>(6, 0.0), 1.0), Error);
}

TEST_CASE("ensemble csv columns") {
  auto cfg = base(20, 2);
  cfg.want_dual = true;
  std::ostringstream os;
  write_ensemble(os, run_ensemble(cfg));
  CHECK(os.str().rfind("mu,mean_N,se_N,mean_Nu,se_Nu,mean_Nu_dual,se_Nu_dual\n", 0) == 0);
}
