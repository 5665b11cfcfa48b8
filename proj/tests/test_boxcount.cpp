#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "landlaw/boxcount.hpp"
#include "landlaw/error.hpp"

using namespace landlaw;

TEST_CASE("box side") {
  CHECK(s_of_mu(1.0 / 9.0) == 3);
  CHECK(s_of_mu(0.25) == 2);
  CHECK(s_of_mu(1.0) == 1);
  CHECK(s_of_mu(7.0) == 1);
  CHECK(s_of_mu(0.5) == 2);
  CHECK_THROWS_AS(s_of_mu(0.0), Error);
  CHECK_THROWS_AS(s_of_mu(-1.0), Error);
}

TEST_CASE("eleven-site example") {
  // Boxes {0,1,2}, {3,4,5}, {6,7,8}, {9,10}; only the first has min W above 1/9.
  Torus t(1, 11);
  std::vector<double> w{0.5, 0.3, 0.4, 0.2, 0.1, 0.3, 0.05, 0.6, 0.7, 0.9, 0.11};
  std::vector<double> u;
  for (double x : w) u.push_back(1.0 / x);
  const auto l = LandscapeField::from_values(t, u);
  CHECK(box_counting(l, 1.0 / 9.0) == doctest::Approx(3.0 / 11.0));
  CHECK_THROWS_AS(box_counting(l, 1.0 / 200.0), Error);
}

TEST_CASE("step curve for constant landscapes") {
  Torus t(2, 10);
  const auto l = LandscapeField::from_values(t, std::vector<double>(100, 0.5));
  const auto c = nu_curve(l, std::vector{0.05, 1.0, 1.99, 2.0, 5.0});
  CHECK(c.values == std::vector{0.0, 0.0, 0.0, 1.0, 1.0});
}

TEST_CASE("everything qualifies above max(1, V_max)") {
  Torus t(2, 16);
  const Hamiltonian h(t, sample_anderson(t, Distribution::uniform(0.0, 3.0), 4));
  const auto l = solve_landscape(h);
  CHECK(box_counting(l, std::max(1.0, h.potential().vmax())) == 1.0);
}

TEST_CASE("shifted partitions change counts by at most 3^d") {
  Torus t(2, 24);
  const Hamiltonian h(t, sample_anderson(t, Distribution::uniform(0.0, 4.0), 8));
  const auto l = solve_landscape(h);
  for (double mu : {0.02, 0.05, 0.1, 0.3}) {
    const double base = box_counting(l, mu);
    const int s = s_of_mu(mu);
    for (int a = 0; a < s; ++a) {
      const std::vector<int> shift{a, (2 * a) % s};
      const double moved = box_counting(l, mu, shift);
      if (base > 0.0 && moved > 0.0) {
        CHECK(moved / base <= 9.0 + 1e-12);
        CHECK(moved / base >= 1.0 / 9.0 - 1e-12);
      }
    }
  }
}

TEST_CASE("upper law holds on random fields") {
  Torus t(1, 80);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Hamiltonian h(t, sample_anderson(t, Distribution::uniform(0.0, 8.0), seed));
    const auto l = solve_landscape(h);
    std::vector<double> grid;
    for (int i = 0; i < 60; ++i) grid.push_back(0.01 * std::pow(1.1, i));
    const auto r = upper_bound_check(ids_curve(h, grid), l);
    CHECK(r.holds());
    CHECK(r.margin.size() == grid.size());
  }
}

TEST_CASE("forged curves violate the upper law") {
  Torus t(1, 20);
  const auto l = LandscapeField::from_values(t, std::vector<double>(20, 0.01));
  CountingCurve n;
  n.grid = {0.5, 1.0, 2.0};
  n.values = {0.5, 0.5, 0.5};
  const auto r = upper_bound_check(n, l);
  CHECK(r.violations.size() == 3);
  CHECK(r.violations[0].lhs == 0.5);
  CHECK(r.violations[0].rhs == 0.0);
}

TEST_CASE("lower bound check") {
  Torus t(1, 60);
  const Hamiltonian h(t, sample_anderson(t, Distribution::uniform(0.0, 8.0), 2));
  const auto l = solve_landscape(h);
  std::vector<double> grid{0.05, 0.1, 0.5, 1.0, 4.0};
  const auto n = ids_curve(h, grid);
  CHECK(lower_bound_check(n, l, 0.5, {}).holds());
  const auto tiny = lower_bound_check(n, l, 1e-4, {0.1, 0.1, 1.0});
  CHECK_FALSE(tiny.truncated.empty());
}

TEST_CASE("scaling fits") {
  const auto grid = [] {
    std::vector<double> g;
    for (int i = 1; i <= 100; ++i) g.push_back(0.1 * i);
    return g;
  }();
  CountingCurve n;
  n.grid = grid;
  for (double mu : grid) n.values.push_back(1.0 - std::exp(-mu));
  auto self = [](double mu) -> std::optional<double> { return 1.0 - std::exp(-mu); };
  const auto f = fit_scaling(n, self);
  CHECK(f.c1 == doctest::Approx(1.0));
  CHECK(f.c2 == doctest::Approx(1.0));
  CHECK(f.sup_distance == doctest::Approx(0.0));

  CountingCurve step;
  step.grid = grid;
  for (double mu : grid) step.values.push_back(mu >= 3.0 ? 1.0 : 0.0);
  auto shifted = [](double mu) -> std::optional<double> { return mu >= 6.0 ? 1.0 : 0.0; };
  const auto g = fit_scaling(step, shifted);
  CHECK(g.c2 == doctest::Approx(2.0).epsilon(0.08));

  CountingCurve flat;
  flat.grid = grid;
  flat.values.assign(grid.size(), 0.0);
  CHECK_THROWS_AS(fit_scaling(flat, self), Error);
}

TEST_CASE("tail slope fits") {
  CountingCurve one, two;
  for (int i = 0; i < 50; ++i) {
    const double mu = 0.02 * std::pow(1.05, i);
    one.grid.push_back(mu);
    two.grid.push_back(mu);
    one.values.push_back(std::exp(-1.0 / std::sqrt(mu)));
    two.values.push_back(std::exp(-1.0 / mu));
  }
  CHECK(lifschitz_fit(one, 1, 0.02, 0.2) == doctest::Approx(-0.5).epsilon(1e-6));
  CHECK(lifschitz_fit(two, 2, 0.02, 0.2) == doctest::Approx(-1.0).epsilon(1e-6));
  one.values[3] = 0.0;
  CHECK_THROWS_AS(lifschitz_fit(one, 1, 0.02, 0.2), Error);
}
