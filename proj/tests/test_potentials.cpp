#include <doctest.h>

#include <algorithm>

#include "landlaw/error.hpp"
#include "landlaw/potentials.hpp"

using namespace landlaw;

TEST_CASE("periodic tiling") {
  Torus t(1, 6);
  const std::vector<int> two{2}, three{3};
  auto v = periodic_potential(t, two, std::vector{0.0, 1.0});
  CHECK(std::vector<double>(v.values().begin(), v.values().end()) == std::vector{0.0, 1.0, 0.0, 1.0, 0.0, 1.0});
  v = periodic_potential(t, three, std::vector{0.0, 1.0, 2.0});
  CHECK(std::vector<double>(v.values().begin(), v.values().end()) == std::vector{0.0, 1.0, 2.0, 0.0, 1.0, 2.0});

  CHECK_THROWS_AS(periodic_potential(Torus(1, 7), two, std::vector{0.0, 1.0}), Error);
  try {
    periodic_potential(Torus(1, 7), two, std::vector{0.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompatiblePeriod);
  }
  try {
    periodic_potential(t, two, std::vector{0.0, -1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidPotential);
  }
}

TEST_CASE("2d periodic tiling uses row-major cells") {
  Torus t(2, 4);
  const std::vector<int> dims{2, 1};
  const auto v = periodic_potential(t, dims, std::vector{3.0, 5.0});
  for (std::size_t n = 0; n < t.volume(); ++n) CHECK(v[n] == (t.coord(n, 0) % 2 == 0 ? 3.0 : 5.0));
}

TEST_CASE("anderson sampling") {
  Torus t(2, 20);
  const auto dist = Distribution::uniform(0.0, 10.0);
  const auto a = sample_anderson(t, dist, 42);
  const auto b = sample_anderson(t, dist, 42);
  const auto c = sample_anderson(t, dist, 42, 1);
  CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  CHECK_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
  CHECK(a.vmax() <= 10.0);
  CHECK(a.vmin() >= 0.0);
  CHECK(a.bound() == 10.0);

  const auto point = sample_anderson(t, Distribution::bernoulli(1.0, 5.0), 3);
  CHECK(point.is_constant());
  CHECK(point.vmax() == 5.0);
}

TEST_CASE("sampled means follow the law") {
  Torus t(1, 20000);
  const auto v = sample_anderson(t, Distribution::bernoulli(0.3, 2.0), 9);
  const double ones = static_cast<double>(std::count(v.values().begin(), v.values().end(), 2.0));
  CHECK(ones / 20000.0 == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("cdf") {
  const auto u = Distribution::uniform(0.0, 10.0);
  CHECK(cdf_eval(u, 2.5) == doctest::Approx(0.25));
  CHECK(cdf_eval(u, -1.0) == 0.0);
  CHECK(cdf_eval(u, 11.0) == 1.0);
  const auto b = Distribution::bernoulli(0.25, 4.0);
  CHECK(b.cdf(-1.0) == 0.0);
  CHECK(b.cdf(0.0) == doctest::Approx(0.75));
  CHECK(b.cdf(4.0) == 1.0);
  const auto d = Distribution::discrete({0.0, 1.0, 3.0}, {0.5, 0.25, 0.25});
  CHECK(d.cdf(1.0) == doctest::Approx(0.75));
  CHECK(d.quantile(0.6) == 1.0);
  CHECK(d.anchored_at_zero());
  CHECK_FALSE(Distribution::uniform(1.0, 2.0).anchored_at_zero());
}

TEST_CASE("dual potential") {
  Torus t(1, 4);
  const PotentialField v(t, {0.0, 10.0, 0.0, 10.0});
  const auto d = dual_potential(v);
  CHECK(std::vector<double>(d.values().begin(), d.values().end()) == std::vector{10.0, 0.0, 10.0, 0.0});
  const PotentialField c(t, {3.0, 3.0, 3.0, 3.0});
  CHECK(dual_potential(c).is_zero());
}

TEST_CASE("negative potentials are refused") {
  CHECK_THROWS_AS(PotentialField(Torus(1, 3), {0.0, -0.5, 1.0}), Error);
  CHECK_THROWS_AS(PotentialField(Torus(1, 3), {0.0, 1.0}), Error);
}
