#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/commands.hpp"
#include "support.hpp"

using namespace subdiff;
using namespace testsupport;
using io::json;

namespace {

const char* kNames[] = {"marco", "marco_modified", "minmax", "sliced", "paraboloids",
                        "disks", "disks_modified", "abs",    "max_x_2x"};

}  // namespace

TEST_CASE("fixtures round-trip through JSON") {
  for (const char* name : kNames) {
    const auto p = fixture(name);
    const json once = io::problem_to_json(p);
    const auto again = io::parse_problem(once.dump());
    CHECK(io::problem_to_json(again) == once);
  }
}

TEST_CASE("rationals serialize losslessly") {
  for (const char* s : {"0", "-7", "1/3", "-22/7", "1/3000000000000000000000000000001"}) {
    const Rational x = q(s);
    const json j = io::scalar_to_json(x);
    CHECK(j.get<std::string>() == s);
    CHECK(io::scalar_from_json<Rational>(j, "x") == x);
  }
  CHECK(io::scalar_from_json<Rational>(json(0.1), "x") == q("1/10"));
  CHECK(io::scalar_from_json<Rational>(json("2.5e-3"), "x") == q("1/400"));
}

TEST_CASE("face unions round-trip, including open arcs") {
  const auto p = fixture("minmax");
  const auto u = outer_limit_exact(*p.exact, *p.basepoint_exact, true).set;
  CHECK(faces_equal(io::union_from_json<Rational>(io::union_to_json(u), "u"), u));
  const auto d = fixture("disks");
  const auto arcs = outer_limit_exact(d.function, d.basepoint, false).set;
  const json j = io::union_to_json(arcs);
  CHECK(io::union_to_json(io::union_from_json<double>(j, "u")) == j);
  CHECK(j[0]["closed"] == false);
  CHECK(j[0]["excluded"].size() == 2);
}

TEST_CASE("malformed input is reported with its location") {
  try {
    io::parse_problem("{\n  \"dim\": 2,\n  \"basepoint\": [0, 0]\n  \"components\": []\n}");
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  try {
    io::parse_problem(R"({"dim": 2, "basepoint": [0, 0], "components": [{"type": "max_affine", "pieces": [{"a": [1], "b": 0}]}]})");
    FAIL("expected a parse error");
  } catch (const io::ParseError& e) {
    CHECK(e.where().find("components[0]") != std::string::npos);
  }
  CHECK_THROWS_AS(io::parse_problem(R"({"dim": 2, "basepoint": [0, 0], "components": [{"type": "cubic"}]})"),
                  io::ParseError);
}

TEST_CASE("mode selection") {
  CHECK(fixture("minmax").mode == io::Mode::Exact);
  CHECK(fixture("disks").mode == io::Mode::Float);
  CHECK_FALSE(fixture("disks").exact.has_value());
  const std::string text = io::read_file(fixtures_dir() / "disks.json");
  CHECK_THROWS_AS(io::parse_problem(text, io::Mode::Exact), io::UnsupportedMode);
  const auto forced = io::parse_problem(io::read_file(fixtures_dir() / "minmax.json"), io::Mode::Float);
  CHECK_FALSE(forced.exact.has_value());
}

TEST_CASE("D family JSON is one-based and carries certificates") {
  const json out = commands::dfamily(fixture("sliced"));
  REQUIRE(out["d_family"].size() == 1);
  CHECK(out["d_family"][0]["D"] == json::array({2}));
  CHECK(out["d_family"][0].contains("certificate"));
  const json g = commands::dfamily_from_gradients(json::parse(R"({"gradients": [["1/2","1/2"],[1,1]]})"));
  CHECK(g["d_family"] == out["d_family"]);
}

TEST_CASE("json_diff reports numeric and structural differences") {
  const json a = json::parse(R"({"x": [1, 2.0, "1/3"], "y": {"z": true}})");
  CHECK(io::json_diff(a, a).empty());
  json b = a;
  b["x"][1] = 2.0 + 1e-12;
  CHECK(io::json_diff(a, b).empty());
  b["x"][1] = 2.5;
  b["y"]["z"] = false;
  CHECK(io::json_diff(a, b).size() == 2);
  b.erase("y");
  CHECK_FALSE(io::json_diff(a, b).empty());
}

TEST_CASE("SVG rendering leaves the result untouched") {
  commands::OuterRequest req;
  req.closure = true;
  const json result = commands::outer(fixture("minmax"), req);
  const json copy = result;
  const std::string svg = io::render_svg(result);
  CHECK(result == copy);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(io::render_svg(result) == svg);
}

TEST_CASE("erbound reports the infinite marker for an empty outer limit") {
  const json r = commands::erbound(fixture("paraboloids"), {});
  CHECK(r["lower_bound"]["infinite"] == true);
  const json e = commands::erbound(fixture("abs"), {true, std::nullopt});
  CHECK(e["empirical"]["er_estimate"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(e["inequality"]["satisfied"] == true);
}
