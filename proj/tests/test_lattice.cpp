#include <doctest.h>

#include <algorithm>
#include <set>

#include "landlaw/error.hpp"
#include "landlaw/lattice.hpp"

using namespace landlaw;

namespace {

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("torus construction") {
  Torus t(1, 3);
  CHECK(t.volume() == 3);
  CHECK(Torus(2, 7).volume() == 49);
  CHECK(code_of([] { Torus(1, 2); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { Torus(0, 5); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("neighbors wrap") {
  Torus t1(1, 3);
  // 1-based site 1 is index 0; neighbors are sites 2 and 3.
  CHECK(as_set(t1.neighbors(0)) == std::set<std::size_t>{1, 2});

  Torus t2(2, 5);
  const std::vector<int> c{0, 0};
  const std::set<std::size_t> want{t2.index(std::vector{1, 0}), t2.index(std::vector{4, 0}),
                                   t2.index(std::vector{0, 1}), t2.index(std::vector{0, 4})};
  CHECK(as_set(t2.neighbors(t2.index(c))) == want);

  Torus t3(3, 4);
  for (std::size_t n = 0; n < t3.volume(); ++n) CHECK(t3.neighbors(n).size() == 6);
}

TEST_CASE("index and coords are inverse") {
  Torus t(3, 5);
  for (std::size_t n = 0; n < t.volume(); ++n) CHECK(t.index(t.coords(n)) == n);
  CHECK(t.index(std::vector{-1, 5, 7}) == t.index(std::vector{4, 0, 2}));
  CHECK(t.step(0, 2, -1) == t.index(std::vector{0, 0, 4}));
}

TEST_CASE("partition examples") {
  CHECK(interval_lengths(7, 2) == std::vector<int>{2, 2, 2, 1});
  CHECK(interval_lengths(11, 3) == std::vector<int>{3, 3, 3, 2});

  Torus t(2, 7);
  CHECK(partition(t, 2).boxes.size() == 16);

  const Partition p1 = partition(Torus(1, 11), 3);
  REQUIRE(p1.boxes.size() == 4);
  std::vector<std::size_t> sizes;
  for (const auto& b : p1.boxes) sizes.push_back(b.cardinality());
  CHECK(sizes == std::vector<std::size_t>{3, 3, 3, 2});

  const Partition p2 = partition(Torus(2, 15), 6);
  REQUIRE(p2.boxes.size() == 9);
  // Per-axis lengths [6, 6, 3]: four full 6x6 boxes, the rest cut by the remainder.
  CHECK(std::count_if(p2.boxes.begin(), p2.boxes.end(),
                      [](const Cube& q) { return q.lengths == std::vector<int>{6, 6}; }) == 4);

  CHECK(code_of([] { partition(Torus(1, 5), 6); }) == ErrorCode::InvalidPartition);
  CHECK(code_of([] { partition(Torus(1, 5), 0); }) == ErrorCode::InvalidPartition);
}

TEST_CASE("partition covers every site exactly once") {
  for (int s : {1, 2, 3, 4, 5}) {
    Torus t(2, 9);
    for (int a = 0; a < s; ++a) {
      const std::vector<int> shift{a, (a + 1) % s};
      const Partition p = partition(t, s, shift);
      std::vector<int> hits(t.volume(), 0);
      for (const auto& q : p.boxes)
        for (auto n : q.sites(t)) ++hits[n];
      CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    }
  }
}

TEST_CASE("cube sets") {
  CHECK(middle_third(0, 9) == std::pair{3, 3});
  CHECK(middle_third(0, 7) == std::pair{3, 2});

  Torus t(2, 12);
  const Cube q = Cube::regular({3, 3}, 3);
  const CubeSets s = cube_sets(t, q);
  CHECK(s.tripled.anchor == Coord{0, 0});
  CHECK(s.tripled.lengths == std::vector<int>{9, 9});
  CHECK(s.middle.cardinality() == 1);
  CHECK(s.boundary.size() == 8);
  CHECK(s.flat_boundary.size() == 4);

  CHECK(code_of([&] { middle_third(Cube::regular({0, 0}, 2)); }) == ErrorCode::DegenerateCube);
}

TEST_CASE("cutoff shells") {
  Torus t(1, 12);
  const ScalarField chi = cutoff(t, Cube::regular({0}, 9));
  // Q/3 = {3,4,5}; shells at distance 1,2,3 on either side.
  for (int n : {3, 4, 5}) CHECK(chi[n] == doctest::Approx(1.0));
  CHECK(chi[6] == doctest::Approx(2.0 / 3.0));
  CHECK(chi[7] == doctest::Approx(1.0 / 3.0));
  CHECK(chi[8] == doctest::Approx(0.0));
  CHECK(chi[2] == doctest::Approx(2.0 / 3.0));
  CHECK(chi[0] == doctest::Approx(0.0));
  CHECK(chi[10] == 0.0);

  const ScalarField one = cutoff(t, Cube::regular({4}, 3));
  for (std::size_t n = 0; n < one.size(); ++n) CHECK(one[n] == (n == 5 ? 1.0 : 0.0));
  CHECK(code_of([&] { cutoff(t, Cube::regular({0}, 2)); }) == ErrorCode::DegenerateCube);
}

TEST_CASE("gradient") {
  Torus t(1, 3);
  const VectorField g = gradient(t, std::vector{0.0, 1.0, 0.0});
  CHECK(g.data == std::vector{1.0, -1.0, 0.0});
  const VectorField z = gradient(Torus(2, 4), std::vector<double>(16, 2.5));
  CHECK(std::all_of(z.data.begin(), z.data.end(), [](double x) { return x == 0.0; }));
}
