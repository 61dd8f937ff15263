#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "bary/io.hpp"
#include "bary/measure.hpp"

using namespace bary;

namespace {
Json J(const char* text) { return Json::parse(text); }
}  // namespace

TEST_CASE("minimal measure document loads, dim inferred") {
  auto m = measure_from_json<double>(J(R"({"points":[[0],[2]],"masses":[0.5,0.5]})"));
  REQUIRE(m.dim == 1);
  REQUIRE(m.size() == 2);
  REQUIRE(m.masses[0] == 0.5);
  double sum = m.masses[0] + m.masses[1];
  REQUIRE(sum == 1.0);
}

TEST_CASE("duplicate support points merge their masses") {
  auto m = measure_from_json<double>(
      J(R"({"points":[[1,1],[1,1],[0,0]],"masses":[0.25,0.25,0.5]})"));
  REQUIRE(m.size() == 2);
  REQUIRE(m.masses[0] == 0.5);
  REQUIRE(m.points[0] == Point<double>({1.0, 1.0}));
}

TEST_CASE("near-duplicate points merge under the relative tolerance") {
  // scale is 1 + max|coord| = 2, so the merge radius is 2e-9
  auto m = measure_from_json<double>(
      J(R"({"points":[[1.0],[1.0000000001],[0.5]],"masses":[0.25,0.25,0.5]})"));
  REQUIRE(m.size() == 2);

  auto far = measure_from_json<double>(
      J(R"({"points":[[1.0],[1.00001],[0.5]],"masses":[0.25,0.25,0.5]})"));
  REQUIRE(far.size() == 3);
}

TEST_CASE("zero-mass points are dropped with a warning") {
  std::ostringstream warn;
  auto m = measure_from_json<double>(
      J(R"({"points":[[0],[1],[2]],"masses":[0.5,0.0,0.5]})"), &warn);
  REQUIRE(m.size() == 2);
  REQUIRE(warn.str().find("zero-mass") != std::string::npos);
  REQUIRE(m.points[1] == Point<double>({2.0}));
}

TEST_CASE("mass validation") {
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"points":[[0],[1]],"masses":[0.5,-0.5]})")),
      ValidationError);
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"points":[[0],[1]],"masses":[0.5,0.6]})")),
      ValidationError);
  // inside the 1e-9 acceptance band, renormalizes to an exact unit sum
  auto m = measure_from_json<double>(
      J(R"({"points":[[0],[1]],"masses":[0.5,0.5000000001]})"));
  double sum = 0;
  for (double w : m.masses) sum += w;
  REQUIRE(sum == 1.0);
}

TEST_CASE("dimension validation") {
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"points":[[0,1],[1]],"masses":[0.5,0.5]})")),
      ValidationError);
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"dim":2,"points":[[0],[1]],"masses":[0.5,0.5]})")),
      ValidationError);
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"points":[],"masses":[]})")), ValidationError);
}

TEST_CASE("parse failures are ParseError") {
  std::istringstream bad("{nope");
  REQUIRE_THROWS_AS(parse_json(bad), ParseError);
  REQUIRE_THROWS_AS(
      measure_from_json<double>(J(R"({"points":[[0]],"masses":["x"]})")), ParseError);
  REQUIRE_THROWS_AS(measure_from_json<double>(J(R"({"masses":[1.0]})")), ParseError);
}

TEST_CASE("exact masses load from fraction strings") {
  auto m = measure_from_json<Rational>(J(
      R"({"points":[[0],[1],[2]],"masses":[0.33,0.33,0.34],
          "masses_exact":["1/3","1/3","1/3"]})"));
  REQUIRE(m.masses[0] == Rational(1, 3));
  Rational sum = m.masses[0] + m.masses[1] + m.masses[2];
  REQUIRE(sum == 1);
  REQUIRE(second_moment(m) == Rational(5, 3));
}

TEST_CASE("exact mode without masses_exact converts doubles exactly") {
  auto m = measure_from_json<Rational>(J(R"({"points":[[0],[2]],"masses":[0.5,0.5]})"));
  REQUIRE(m.masses[0] == Rational(1, 2));
  REQUIRE(second_moment(m) == 2);
}

TEST_CASE("fraction parsing") {
  REQUIRE(parse_fraction("3/4") == Rational(3, 4));
  REQUIRE(parse_fraction("2") == 2);
  REQUIRE(parse_fraction("-1/3") == Rational(-1, 3));
  REQUIRE_THROWS_AS(parse_fraction("1/0"), ParseError);
  REQUIRE_THROWS_AS(parse_fraction("a/b"), ParseError);
  REQUIRE_THROWS_AS(parse_fraction(""), ParseError);
}

TEST_CASE("second moment, float") {
  auto m = measure_from_json<double>(
      J(R"({"points":[[1,2],[3,4]],"masses":[0.5,0.5]})"));
  REQUIRE(second_moment(m) == Catch::Approx(0.5 * 5 + 0.5 * 25));
}

TEST_CASE("measure json round trip") {
  auto m = measure_from_json<double>(
      J(R"({"points":[[0.5,1.5],[2.0,3.0]],"masses":[0.25,0.75]})"));
  auto m2 = measure_from_json<double>(measure_to_json(m));
  REQUIRE(m2.points == m.points);
  REQUIRE(m2.masses == m.masses);

  auto e = measure_from_json<Rational>(J(
      R"({"points":[[0],[1]],"masses":[0.5,0.5],"masses_exact":["2/3","1/3"]})"));
  auto e2 = measure_from_json<Rational>(measure_to_json(e));
  REQUIRE(e2.masses[0] == Rational(2, 3));
}

TEST_CASE("measure set loads and validates shared dimension") {
  auto ms = measure_set_from_json<double>(J(
      R"({"measures":[{"points":[[0],[1]],"masses":[0.5,0.5]},
                      {"points":[[2]],"masses":[1.0]}]})"));
  REQUIRE(ms.size() == 2);
  REQUIRE(ms.dim() == 1);
  REQUIRE_THROWS_AS(measure_set_from_json<double>(J(
                        R"({"measures":[{"points":[[0]],"masses":[1.0]},
                            {"points":[[0,1]],"masses":[1.0]}]})")),
                    ValidationError);
}
