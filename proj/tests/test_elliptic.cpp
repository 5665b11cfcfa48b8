#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "landlaw/elliptic.hpp"
#include "landlaw/error.hpp"

using namespace landlaw;

TEST_CASE("box geometry") {
  const Box b = Box::cube(2, 3);
  CHECK(b.size() == 9);
  CHECK(b.interior().size() == 1);
  CHECK(b.boundary().size() == 8);
  CHECK(b.flat_boundary().size() == 4);
  CHECK_FALSE(b.neighbor(0, 0, -1).has_value());
  CHECK(b.neighbor(0, 1, 1) == 1);
}

TEST_CASE("dirichlet solves") {
  const CubeProblem p(1, 6);
  const std::size_t n = p.size();
  std::vector<double> one(n, 1.0), zero(n, 0.0);
  const auto u = dirichlet_solve(p, one, zero);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = static_cast<double>(i) - 6.0;
    CHECK(u[i] == doctest::Approx((36.0 - m * m) / 2.0).epsilon(1e-12));
  }
  const auto c = dirichlet_solve(CubeProblem(2, 4), std::vector<double>(81, 0.0), std::vector<double>(81, 2.5));
  for (double x : c) CHECK(x == doctest::Approx(2.5).epsilon(1e-12));

  const CubeProblem q(3, 3);
  std::vector<double> lin(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto x = q.box().coords(i);
    lin[i] = 1.0 + 2.0 * x[0] - x[1] + 0.5 * x[2];
  }
  const auto v = dirichlet_solve(q, std::vector<double>(q.size(), 0.0), lin);
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(v[i] == doctest::Approx(lin[i]).epsilon(1e-11));

  const CubeProblem single(2, 0);
  CHECK(dirichlet_solve(single, std::vector{0.0}, std::vector{7.0}) == std::vector{7.0});
}

TEST_CASE("one-dimensional kernels") {
  const int r = 5;
  const CubeProblem p(1, r);
  const auto k = kernels(p);
  CHECK(k.poisson.front() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(k.poisson.back() == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = std::abs(static_cast<double>(i) - r);
    CHECK(k.green[i] == doctest::Approx((r - m) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("kernel invariants") {
  for (auto [d, r] : {std::pair{2, 1}, {2, 4}, {2, 8}, {3, 3}, {3, 5}}) {
    const CubeProblem p(d, r);
    const auto a = kernels(p, PoissonPath::FromGreen);
    const auto b = kernels(p, PoissonPath::BoundaryDeltas);
    double sum = 0.0, gap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      sum += a.poisson[i];
      gap = std::max(gap, std::abs(a.poisson[i] - b.poisson[i]));
      CHECK(a.poisson[i] >= 0.0);
      CHECK(a.green[i] >= 0.0);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(gap <= 1e-11);
    if (p.size() <= 1000) {
      const auto g = green_matrix(p);
      CHECK((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    CHECK_THROWS_AS(CubeProblem(d, kernel_radius_cap(d) + 1), Error);
  }
}

TEST_CASE("integration by parts") {
  const CubeProblem p(2, 5);
  const auto k = kernels(p);
  CHECK(ibp_residual(p, k, std::vector<double>(p.size(), 1.0)) <= 1e-12);
  std::vector<double> u(p.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = p.box().coords(i);
    u[i] = std::sin(0.3 * x[0]) + x[1] * x[1] * 0.1;
  }
  double norm = 0.0;
  for (double x : u) norm = std::max(norm, std::abs(x));
  CHECK(ibp_residual(p, k, u) <= 1e-10 * (1.0 + norm));
}

TEST_CASE("surface averages") {
  const CubeProblem p(1, 4);
  const auto k = kernels(p);
  std::vector<double> u(p.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(0.2 * static_cast<double>(i));
  const auto s = surface_averages(p, k, u);
  for (int rho = 1; rho <= 4; ++rho) CHECK(s.a[rho] == doctest::Approx((u[4 - rho] + u[4 + rho]) / 2.0));

  const CubeProblem q(2, 3);
  const auto kq = kernels(q);
  const auto c = surface_averages(q, kq, std::vector<double>(q.size(), 3.0));
  for (std::size_t rho = 0; rho < c.a.size(); ++rho) {
    CHECK(c.a[rho] == doctest::Approx(3.0));
    CHECK(c.big_a[rho] == doctest::Approx(3.0));
  }
}

TEST_CASE("maximum principle") {
  const Box b({7});
  std::vector<double> lin{0, 1, 2, 3, 4, 5, 6};
  const auto r = max_principle_check(b, {}, lin);
  CHECK(r.pass);
  std::vector<double> cap;
  for (int n = 0; n < 7; ++n) cap.push_back(n * (6 - n) - 3.0);
  try {
    max_principle_check(b, {}, std::vector<double>{0, 0, 0, -1, 0, 0, 0});
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Precondition);
  }
  const auto c = max_principle_check(b, {}, cap);
  CHECK(c.pass);
  CHECK(c.interior_min == 2.0);
}

TEST_CASE("poincare") {
  const Box b({2});
  const auto r = poincare_check(b, std::vector{0.0, 1.0});
  CHECK(r.lhs == doctest::Approx(0.5));
  CHECK(r.rhs == doctest::Approx(2.0));
  CHECK(r.pass);
  const auto c = poincare_check(Box({4, 5}), std::vector<double>(20, 1.5));
  CHECK(c.lhs == doctest::Approx(0.0));
  CHECK(c.pass);
}

TEST_CASE("sub-mean and Moser-Harnack ratios") {
  const int r = 4;
  const CubeProblem p(1, r);
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = static_cast<double>(i);  // n + r on Q(r; 0)
  CHECK(submean_ratio(p, g) == doctest::Approx(0.5));

  const int ell = 3;
  const std::size_t side = 3 * ell;
  const double c = 2.0;
  const double ratio = moser_harnack_ratio(2, ell, std::vector<double>(side * side, c));
  CHECK(ratio == doctest::Approx(9.0 + std::pow(ell, 4.0) / (c * c)));
  CHECK(ratio >= 9.0);
}

TEST_CASE("harnack") {
  const Box omega = Box::cube(2, 9);
  const auto h = harnack_check(omega, {}, 0.0, std::vector<double>(81, 2.0), Cube::regular({3, 3}, 3));
  CHECK(h.pass);
  CHECK(h.sup == h.inf);
  CHECK_THROWS_AS(harnack_check(omega, {}, 0.0, std::vector<double>(81, 2.0), Cube::regular({0, 0}, 3)), Error);
}

TEST_CASE("chernoff") {
  CHECK(kl_divergence(0.5, 0.5) == doctest::Approx(0.0));
  CHECK(kl_divergence(0.9, 0.5) == doctest::Approx(0.368064).epsilon(1e-6));
  const double bound = chernoff_bound(100, 0.5, 0.3);
  const double freq = chernoff_frequency(100, 0.5, 0.3, 100000, 3);
  const double se = std::sqrt(std::max(freq * (1 - freq), 1e-12) / 100000.0);
  CHECK(freq <= bound + 3 * se);
  CHECK_THROWS_AS(chernoff_bound(100, 0.5, 0.6), Error);
  CHECK_THROWS_AS(kl_divergence(0.0, 0.5), Error);
}
