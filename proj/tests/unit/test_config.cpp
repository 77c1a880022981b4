#include "doctest.h"
#include "qbl/config.hpp"
#include "qbl/error.hpp"

using namespace qbl;

TEST_CASE("defaults round-trip through JSON") {
  RunConfig a = RunConfig::from_json("{}");
  std::string s = a.to_json();
  RunConfig b = RunConfig::from_json(s);
  CHECK(b.to_json() == s);
  CHECK(a.grid.n == 16);
  CHECK(a.kernel.eps == 0.5);
}

TEST_CASE("overrides survive a round trip") {
  RunConfig a = RunConfig::from_json(
      R"({"kernel":{"statistics":"bose_einstein","eps":0.2},"grid":{"n":12,"L":5},"norm":{"p":"inf"}})");
  RunConfig b = RunConfig::from_json(a.to_json());
  CHECK(b.kernel.statistics == "bose_einstein");
  CHECK(b.grid.n == 12);
  CHECK(b.grid.L == 5);
  CHECK(std::isinf(b.norm_spec().p));
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(RunConfig::from_json(R"({"grid":{"n":16,"size":3}})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"gird":{}})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"grid":{"n":15}})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"kernel":{"eps":1.5}})"), ValidationError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"grid":{"n":"16"}})"), ValidationError);
}
