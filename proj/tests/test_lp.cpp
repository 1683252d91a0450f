#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/lp.hpp"
#include "support.hpp"

#include <random>

using namespace subdiff;
using namespace testsupport;

TEST_CASE("standard-form maximum matches vertex enumeration") {
  // maximize 3x + 2y  s.t.  x + y <= 4,  x + 3y <= 6,  x, y >= 0 (slacks s1, s2).
  const linalg::Matrix<Rational> a{{1, 1, 1, 0}, {1, 3, 0, 1}};
  const auto res = lp::maximize_standard<Rational>(a, {4, 6}, {3, 2, 0, 0});
  REQUIRE(res.status == lp::LpStatus::Optimal);

  // Reference: best feasible intersection of two constraint boundary lines.
  const std::vector<std::array<Rational, 3>> lines{{1, 1, 4}, {1, 3, 6}, {1, 0, 0}, {0, 1, 0}};
  Rational best = -1;
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& l = lines[i];
      const auto& m = lines[j];
      const Rational det = l[0] * m[1] - l[1] * m[0];
      if (det == 0) continue;
      const Rational x = (l[2] * m[1] - l[1] * m[2]) / det;
      const Rational y = (l[0] * m[2] - l[2] * m[0]) / det;
      if (x < 0 || y < 0 || x + y > 4 || x + 3 * y > 6) continue;
      best = std::max(best, Rational(3 * x + 2 * y));
    }
  CHECK(res.objective == best);
}

TEST_CASE("unbounded and infeasible programs are reported") {
  const linalg::Matrix<Rational> a{{1, -1}};
  CHECK(lp::maximize_standard<Rational>(a, {1}, {1, 0}).status == lp::LpStatus::Unbounded);
  const linalg::Matrix<Rational> b{{1, 1}};
  CHECK(lp::maximize_standard<Rational>(b, {-1}, {1, 0}).status == lp::LpStatus::Infeasible);
}

TEST_CASE("strict feasibility certificates replay") {
  lp::StrictSystem<Rational> feasible;
  feasible.equalities = {rv({"2", "1"})};
  feasible.strict = {rv({"-1", "1"}), rv({"0", "-1"})};
  const auto r = lp::strict_feasible(feasible);
  REQUIRE(r.feasible);
  CHECK(dot(r.certificate, feasible.equalities[0]) == 1);
  CHECK(lp::replay_certificate(feasible, r.certificate));

  // <(1,1), d> = 1 forces <(2,2), d> = 2, contradicting < 1.
  lp::StrictSystem<Rational> infeasible;
  infeasible.equalities = {rv({"1", "1"})};
  infeasible.strict = {rv({"2", "2"})};
  const auto s = lp::strict_feasible(infeasible);
  CHECK_FALSE(s.feasible);
  REQUIRE(s.farkas.has_value());
  CHECK(lp::verify_farkas(infeasible, *s.farkas));
}

TEST_CASE("float strict feasibility agrees with exact on random systems") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    lp::StrictSystem<Rational> ex;
    lp::StrictSystem<double> fl;
    for (int k = 0; k < 4; ++k) {
      Vector<Rational> g{Rational(c(rng)), Rational(c(rng))};
      (k == 0 ? ex.equalities : ex.strict).push_back(g);
      (k == 0 ? fl.equalities : fl.strict).push_back(to_double(g));
    }
    const auto a = lp::strict_feasible(ex);
    const auto b = lp::strict_feasible(fl);
    // A float verdict may only differ when the exact slack is tiny.
    if (a.feasible != b.feasible) CHECK(to_double(a.slack) < 1e-6);
    if (b.feasible) CHECK(lp::replay_certificate(fl, b.certificate));
  }
}

TEST_CASE("convex weights reproduce the point") {
  const std::vector<Vector<Rational>> tri{rv({"0", "0"}), rv({"4", "0"}), rv({"0", "4"})};
  const auto x = rv({"1", "2"});
  const auto w = lp::convex_weights(tri, x);
  REQUIRE(w.has_value());
  Vector<Rational> sum(2);
  Rational total = 0;
  for (std::size_t i = 0; i < tri.size(); ++i) {
    CHECK((*w)[i] >= 0);
    sum += tri[i] * (*w)[i];
    total += (*w)[i];
  }
  CHECK(sum == x);
  CHECK(total == 1);
  CHECK_FALSE(lp::convex_weights(tri, rv({"3", "3"})).has_value());
}

TEST_CASE("min-norm point of a segment matches the closed-form projection") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const Vector<Rational> a{Rational(c(rng)), Rational(c(rng))};
    const Vector<Rational> b{Rational(c(rng)), Rational(c(rng))};
    const auto m = lp::min_norm_point(std::vector<Vector<Rational>>{a, b});
    const double ref = segment_distance(Vector<double>{0.0, 0.0}, to_double(a), to_double(b));
    CHECK(m.norm == doctest::Approx(ref).epsilon(1e-12));
    const auto w = lp::min_norm_point_wolfe({to_double(a), to_double(b)});
    CHECK(w.norm == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("min-norm point of a triangle satisfies the optimality certificate") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vector<Rational>> tri;
    for (int k = 0; k < 3; ++k) tri.push_back(Vector<Rational>{Rational(c(rng)), Rational(c(rng))});
    const auto m = lp::min_norm_point(tri);
    for (const auto& v : tri) CHECK(dot(m.point, v - m.point) >= 0);
    REQUIRE(lp::convex_weights(tri, m.point).has_value());
    // Reference: origin inside gives 0, otherwise the nearest edge.
    const auto d0 = std::min({segment_distance({0.0, 0.0}, to_double(tri[0]), to_double(tri[1])),
                              segment_distance({0.0, 0.0}, to_double(tri[1]), to_double(tri[2])),
                              segment_distance({0.0, 0.0}, to_double(tri[0]), to_double(tri[2]))});
    const bool inside = lp::convex_weights(tri, Vector<Rational>(2)).has_value();
    CHECK(m.norm == doctest::Approx(inside ? 0.0 : d0).epsilon(1e-12));
  }
}
