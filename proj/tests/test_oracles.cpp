#include <doctest.h>

#include <sstream>

#include "landlaw/oracle_suite.hpp"

using namespace landlaw;

TEST_CASE("suite passes on a short battery") {
  SuiteOptions o;
  o.seed = 11;
  o.trials = 40;
  o.chernoff_trials = 5000;
  const auto r = run_oracle_suite(o);
  for (const auto& row : r.rows) {
    INFO(row.name << ": " << row.detail);
    CHECK(row.pass());
  }
  CHECK(r.hard_pass());
  std::ostringstream csv;
  write_suite_csv(csv, r);
  CHECK(csv.str().rfind("name,kind,trials,passed,value,status\n", 0) == 0);
}

TEST_CASE("suite is deterministic in the seed") {
  SuiteOptions o;
  o.trials = 10;
  const auto a = oracle_moser_harnack(o, 3);
  const auto b = oracle_moser_harnack(o, 3);
  CHECK(a.value == b.value);
}
