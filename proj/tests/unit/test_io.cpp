#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ramulus/errors.hpp"
#include "ramulus/io.hpp"
#include "ramulus/svg.hpp"

using namespace ramulus;
using testing::pt;

TEST_CASE("measure round trip") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Boundary b = testing::random_boundary(rng, 5);
    const std::string text = dump(to_json(b.measure()));
    const AtomicMeasure back = measure_from_json(parse_json(text));
    CHECK(back == b.measure());
    CHECK(dump(to_json(back)) == text);
  }
}

TEST_CASE("measure output is sorted by position") {
  const Json j = parse_json(R"({"atoms": [{"x": [1, 0], "w": 1}, {"x": [0, 2], "w": -1}]})");
  const std::string text = dump(to_json(measure_from_json(j)));
  const Json back = parse_json(text);
  CHECK(back["atoms"][0]["x"][0].get<double>() == 0.0);
}

TEST_CASE("chain round trip") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const PolyChain c = testing::random_tree_chain(rng, 6);
    const std::string text = dump(to_json(c));
    const PolyChain back = chain_from_json(parse_json(text));
    CHECK(dump(to_json(back)) == text);
    CHECK(mass(back) == mass(c));
  }
}

TEST_CASE("malformed input") {
  try {
    parse_json("{\"atoms\": [1, 2");
    FAIL("expected a DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("byte") != std::string::npos);
  }
  CHECK_THROWS_AS(measure_from_json(parse_json("{}")), DomainError);
  CHECK_THROWS_AS(measure_from_json(parse_json(R"({"atoms": [{"x": [0], "w": "a"}]})")), DomainError);
  CHECK_THROWS_AS(measure_from_json(parse_json(R"({"atoms": [{"x": [0], "w": 1}, {"x": [0, 1], "w": -1}]})")),
                  DomainError);
  CHECK_THROWS_AS(boundary_from_json(parse_json(R"({"atoms": [{"x": [0], "w": 1}]})")), DomainError);
  CHECK_THROWS_AS(chain_from_json(parse_json(R"({"vertices": [[0]], "edges": [{"tail": 0, "head": 3, "w": 1}]})")),
                  DomainError);
}

TEST_CASE("four point reader") {
  const auto inst = four_point_from_json(
      parse_json(R"({"A": [0, 0], "B": [1, 0], "C": [2, 0], "D": [3, 0], "theta": 1.5, "k": 4})"), 0.7);
  CHECK(inst.k == 4);
  CHECK(inst.theta == 1.5);
  CHECK(inst.alpha == 0.7);
}

TEST_CASE("non-finite values are written as null") {
  DyadicReport r;
  r.series_bound = std::numeric_limits<double>::infinity();
  r.center = pt(0.5, 0.5);
  r.jitter = pt(0, 0);
  const Json j = to_json(r);
  CHECK(j["series_bound"].is_null());
  CHECK_NOTHROW(parse_json(dump(j)));
}

TEST_CASE("solve result json carries the documented fields") {
  const Boundary b(AtomicMeasure({{pt(0, 0), -1.0}, {pt(1, 0), -1.0}, {pt(0.5, 1), 2.0}}));
  const Json j = to_json(solve_gilbert(b, 0.5));
  for (const char* key : {"best", "value", "gap", "ranking", "certificates"}) CHECK(j.contains(key));
  CHECK(chain_from_json(j["best"]).edge_count() == 3);
}

TEST_CASE("svg export") {
  const PolyChain c({pt(0, 0), pt(1, 0), pt(0.5, 1)}, {{0, 2, 1.0}, {1, 2, 1.0}});
  const SvgImage img = chain_svg(c);
  CHECK_FALSE(img.projected);
  CHECK(img.text.rfind("<svg", 0) == 0);
  CHECK(img.text.find("</svg>") != std::string::npos);
  Eigen::VectorXd a(3), b(3);
  a << 0, 0, 0;
  b << 1, 1, 1;
  CHECK(chain_svg(PolyChain({a, b}, {{0, 1, 1.0}})).projected);
  const SvgImage sheet = contact_sheet({{"one", c}, {"two", c}});
  CHECK(sheet.text.find("two") != std::string::npos);
}
