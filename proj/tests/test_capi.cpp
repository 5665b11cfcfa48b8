// Exercises the shared library through the C header only.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "landlaw/landlaw.h"

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / (std::string("landlaw_capi_") + name)).string();
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(ll_version()).size() > 0);
  CHECK(std::string(ll_status_name(LL_OK)) == "ok");
  CHECK(std::string(ll_status_name(LL_ERR_PARITY)).size() > 0);
}

TEST_CASE("potential, operator, landscape") {
  const double v[] = {1.0, 0.0, 0.0};
  ll_potential* p = nullptr;
  REQUIRE(ll_potential_create(1, 3, v, 3, NAN, &p) == LL_OK);
  ll_hamiltonian* h = nullptr;
  REQUIRE(ll_hamiltonian_create(p, &h) == LL_OK);
  const double phi[] = {3.0, 4.0, 4.0};
  double out[3];
  REQUIRE(ll_hamiltonian_apply(h, phi, out, 3) == LL_OK);
  CHECK(out[0] == 1.0);
  CHECK(out[2] == 1.0);

  ll_solve_options so;
  ll_solve_options_default(&so);
  ll_landscape* l = nullptr;
  REQUIRE(ll_landscape_solve(h, &so, &l) == LL_OK);
  double u[3];
  REQUIRE(ll_landscape_values(l, u, 3) == LL_OK);
  CHECK(u[1] == doctest::Approx(4.0));
  CHECK(ll_landscape_values(l, u, 2) == LL_ERR_DIMENSION_MISMATCH);

  size_t count = 0;
  ll_count_options co;
  ll_count_options_default(&co);
  REQUIRE(ll_count(h, 100.0, 0, &co, &count) == LL_OK);
  CHECK(count == 3);

  const std::string path = temp_path("landscape.txt");
  REQUIRE(ll_landscape_save(l, path.c_str()) == LL_OK);
  ll_landscape* back = nullptr;
  REQUIRE(ll_landscape_load(path.c_str(), &back) == LL_OK);
  double w[3];
  REQUIRE(ll_landscape_values(back, w, 3) == LL_OK);
  CHECK(std::memcmp(u, w, sizeof u) == 0);
  std::remove(path.c_str());

  ll_landscape_free(back);
  ll_landscape_free(l);
  ll_hamiltonian_free(h);
  ll_potential_free(p);
}

TEST_CASE("errors carry a status and a message") {
  const double bad[] = {1.0, -1.0, 0.0};
  ll_potential* p = nullptr;
  CHECK(ll_potential_create(1, 3, bad, 3, NAN, &p) == LL_ERR_INVALID_POTENTIAL);
  CHECK(p == nullptr);
  CHECK(std::strlen(ll_last_error()) > 0);
  CHECK(ll_potential_create(1, 2, bad, 2, NAN, &p) == LL_ERR_INVALID_DOMAIN);
  CHECK(ll_hamiltonian_create(nullptr, nullptr) == LL_ERR_INVALID_ARGUMENT);
  ll_landscape* l = nullptr;
  CHECK(ll_landscape_load("/nonexistent/landscape.txt", &l) == LL_ERR_IO);

  ll_distribution d{LL_LAW_UNIFORM, 0.0, 2.0, 0, 0, nullptr, nullptr, 0};
  REQUIRE(ll_potential_sample(1, 5, &d, 1, 0, &p) == LL_OK);
  ll_hamiltonian* h = nullptr;
  REQUIRE(ll_hamiltonian_create(p, &h) == LL_OK);
  const double grid[] = {1.0, 2.0};
  ll_count_options co;
  ll_count_options_default(&co);
  int64_t deviation = 0;
  CHECK(ll_dual_identity(h, grid, 2, &co, &deviation) == LL_ERR_PARITY);
  ll_hamiltonian_free(h);
  ll_potential_free(p);
  ll_potential_free(nullptr);
}

TEST_CASE("curves and reports") {
  const double grid[] = {0.5, 1.0, 2.0};
  const double n[] = {0.5, 0.5, 0.5};
  const std::string path = temp_path("curve.csv");
  REQUIRE(ll_curve_write(path.c_str(), grid, n, 3, "N") == LL_OK);
  ll_curve* c = nullptr;
  REQUIRE(ll_curve_read(path.c_str(), &c) == LL_OK);
  size_t size = 0;
  REQUIRE(ll_curve_size(c, &size) == LL_OK);
  CHECK(size == 3);
  CHECK(std::string(ll_curve_kind(c)) == "N");
  ll_curve_free(c);
  std::remove(path.c_str());

  std::vector<double> vals(20, 0.01);
  ll_potential* p = nullptr;
  REQUIRE(ll_potential_create(1, 20, vals.data(), 20, NAN, &p) == LL_OK);
  ll_hamiltonian* h = nullptr;
  REQUIRE(ll_hamiltonian_create(p, &h) == LL_OK);
  ll_solve_options so;
  ll_solve_options_default(&so);
  so.allow_constant = 1;
  ll_landscape* l = nullptr;
  REQUIRE(ll_landscape_solve(h, &so, &l) == LL_OK);
  ll_report* r = nullptr;
  REQUIRE(ll_upper_bound_check(grid, n, 3, l, &r) == LL_OK);
  size_t points = 0, violations = 0, truncated = 0;
  double margin = 0;
  REQUIRE(ll_report_summary(r, &points, &violations, &truncated, &margin) == LL_OK);
  CHECK(violations == 0);  // u = 100 here, so every box qualifies at mu >= 0.01.
  ll_report_free(r);
  ll_landscape_free(l);
  ll_hamiltonian_free(h);
  ll_potential_free(p);
}

TEST_CASE("ensemble and suite") {
  double grid[30];
  size_t ng = 0;
  REQUIRE(ll_default_grid(1, 40, 3.0, 30, grid, 30, &ng) == LL_OK);
  ll_ensemble_config cfg{};
  cfg.d = 1;
  cfg.k = 40;
  cfg.dist = ll_distribution{LL_LAW_UNIFORM, 0.0, 3.0, 0, 0, nullptr, nullptr, 0};
  cfg.realizations = 4;
  cfg.seed = 5;
  cfg.grid = grid;
  cfg.grid_size = ng;
  cfg.want_n = cfg.want_nu = cfg.want_upper = 1;
  cfg.threads = 2;
  ll_count_options_default(&cfg.count);
  ll_solve_options_default(&cfg.solve);
  ll_ensemble* e = nullptr;
  REQUIRE(ll_ensemble_run(&cfg, &e) == LL_OK);
  std::vector<double> mean(ng), se(ng);
  REQUIRE(ll_ensemble_curve(e, LL_MEAN_N, mean.data(), se.data(), ng) == LL_OK);
  CHECK(mean.back() == 1.0);
  CHECK(ll_ensemble_curve(e, LL_MEAN_NU_DUAL, mean.data(), se.data(), ng) != LL_OK);
  size_t violations = 1;
  REQUIRE(ll_ensemble_upper_violations(e, &violations) == LL_OK);
  CHECK(violations == 0);
  ll_ensemble_free(e);

  ll_suite* s = nullptr;
  REQUIRE(ll_suite_run(3, 10, 2000, &s) == LL_OK);
  int pass = 0;
  REQUIRE(ll_suite_hard_pass(s, &pass) == LL_OK);
  CHECK(pass == 1);
  size_t rows = 0;
  REQUIRE(ll_suite_rows(s, &rows) == LL_OK);
  CHECK(rows > 10);
  ll_suite_free(s);
}
