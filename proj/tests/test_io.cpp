#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "landlaw/error.hpp"
#include "landlaw/io.hpp"

using namespace landlaw;

TEST_CASE("real formatting") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("field round trip is bit exact") {
  Torus t(2, 4);
  std::vector<double> v(16);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sqrt(static_cast<double>(i)) / 3.0;
  std::stringstream ss;
  write_field(ss, t, v);
  const auto f = read_field(ss);
  CHECK(f.torus == t);
  CHECK(f.values == v);

  std::istringstream short_file("2 4\n1\n2\n");
  CHECK_THROWS_AS(read_field(short_file), Error);
  std::istringstream junk("1 3\n1\nabc\n2\n");
  CHECK_THROWS_AS(read_field(junk), Error);
}

TEST_CASE("curve round trip") {
  CountingCurve c;
  c.kind = CurveKind::Nu;
  c.grid = {0.1, 0.2, 0.7};
  c.values = {0.0, 1.0 / 3.0, 1.0};
  std::stringstream ss;
  write_curve(ss, c);
  const auto back = read_curve(ss);
  CHECK(back.kind == CurveKind::Nu);
  CHECK(back.grid == c.grid);
  CHECK(back.values == c.values);

  std::istringstream mixed("mu,value,kind\n0.1,0,N\n0.2,0,N_u\n");
  CHECK_THROWS_AS(read_curve(mixed), Error);
  std::istringstream unsorted("mu,value,kind\n0.2,0,N\n0.1,0,N\n");
  CHECK_THROWS_AS(read_curve(unsorted), Error);
}

TEST_CASE("report summary line") {
  Torus t(1, 10);
  const auto l = LandscapeField::from_values(t, std::vector<double>(10, 0.01));
  CountingCurve n;
  n.grid = {1.0};
  n.values = {0.5};
  std::ostringstream os;
  write_report(os, upper_bound_check(n, l));
  CHECK(os.str().find("violations=1") != std::string::npos);
  CHECK(os.str().find("status=fail") != std::string::npos);
}
