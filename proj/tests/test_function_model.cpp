#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/function_model.hpp"
#include "support.hpp"

#include <random>

using namespace subdiff;
using namespace testsupport;

namespace {

/// Point-in-convex-polygon test against a counter-clockwise hull.
bool in_hull(const std::vector<Vector<Rational>>& h, const Vector<Rational>& x) {
  if (h.size() == 1) return h.front() == x;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    if ((b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) < 0) return false;
  }
  return true;
}

std::vector<Vector<Rational>> minmax_a() { return {rv({"2", "1"}), rv({"-1", "1"}), rv({"-1", "-1"}), rv({"0", "-1"})}; }
std::vector<Vector<Rational>> minmax_b() { return {rv({"3", "1"}), rv({"0", "1"}), rv({"2", "-1"}), rv({"3", "-1"})}; }

Rational max_dot(const std::vector<Vector<Rational>>& g, const Vector<Rational>& p) {
  Rational m = dot(g.front(), p);
  for (const auto& v : g) m = std::max(m, dot(v, p));
  return m;
}

}  // namespace

TEST_CASE("evaluation of the sliced function matches the formula") {
  const auto p = fixture("sliced");
  REQUIRE(p.exact.has_value());
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-8, 8);
  for (int t = 0; t < 100; ++t) {
    const Vector<Rational> x{Rational(c(rng), 4), Rational(c(rng), 4)};
    const Rational quad = x[0] * x[0] + x[1] * x[1] + (x[0] + x[1]) / 2;
    const Rational lin = x[0] + x[1];
    CHECK(evaluate(*p.exact, x) == std::max(quad, lin));
  }
}

TEST_CASE("directional derivative of the min-max fixture is the min of max support values") {
  const auto p = fixture("minmax");
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> c(-9, 9);
  for (int t = 0; t < 200; ++t) {
    const Vector<Rational> d{Rational(c(rng)), Rational(c(rng))};
    const Rational ref = std::min(max_dot(minmax_a(), d), max_dot(minmax_b(), d));
    CHECK(directional_derivative(*p.exact, *p.basepoint_exact, d) == ref);
  }
}

TEST_CASE("directional derivative of the disks fixture") {
  const auto p = fixture("disks");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vector<double> d{u(rng), u(rng)};
    const double r = std::hypot(d[0], d[1]);
    const double ref = std::min(0.5 * d[0] + r, -0.5 * d[0] + r);
    CHECK(directional_derivative(p.function, p.basepoint, d) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("active sets respect the tolerance band") {
  Component<double> c{ComponentKind::MaxAffine,
                      {AffinePiece<double>{Vector<double>{1.0}, 0.0}, AffinePiece<double>{Vector<double>{-1.0}, -1e-12}}};
  const Vector<double> zero{0.0};
  CHECK(active_pieces(c, zero, 0.0) == std::vector<std::size_t>{0});
  CHECK(active_pieces(c, zero, 1e-9) == std::vector<std::size_t>{0, 1});
  const auto p = fixture("minmax");
  CHECK(active_components(*p.exact, *p.basepoint_exact).size() == 2);
  CHECK(active_components(*p.exact, rv({"1", "0"})) == std::vector<std::size_t>{0});
  CHECK(min_active_set(*p.exact, *p.basepoint_exact, rv({"0", "1"})) == std::vector<std::size_t>{0, 1});
  CHECK(min_active_set(*p.exact, *p.basepoint_exact, rv({"1", "0"})) == std::vector<std::size_t>{0});
}

TEST_CASE("component subdifferentials at the basepoint") {
  const auto p = fixture("sliced");
  const auto s = component_subdifferential(p.exact->components.front(), *p.basepoint_exact);
  REQUIRE(s.is_polytope());
  auto v = s.as_polytope().vertices;
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<Vector<Rational>>{rv({"1/2", "1/2"}), rv({"1", "1"})});
  const auto d = fixture("disks");
  const auto b = component_subdifferential(d.function.components.front(), d.basepoint);
  REQUIRE(b.is_ball());
  CHECK(b.as_ball().radius == 1.0);
  const auto g = piece_gradient(p.exact->components.front().pieces.front(), rv({"1", "2"}));
  CHECK(g == rv({"5/2", "9/2"}));
}

TEST_CASE("Frechet subdifferential of the min-max fixture is the polygon intersection") {
  const auto p = fixture("minmax");
  const auto fr = frechet_subdifferential(*p.exact, *p.basepoint_exact);
  REQUIRE(fr.has_value());
  const auto ha = hull2d(minmax_a()), hb = hull2d(minmax_b());
  for (int i = -12; i <= 12; ++i)
    for (int j = -8; j <= 8; ++j) {
      const Vector<Rational> x{Rational(i, 4), Rational(j, 4)};
      CHECK(contains(*fr, x) == (in_hull(ha, x) && in_hull(hb, x)));
    }
  const auto abs = fixture("abs");
  const auto s = frechet_subdifferential(*abs.exact, *abs.basepoint_exact);
  REQUIRE(s.has_value());
  CHECK(support_value(*s, rv({"1"})) == 1);
  CHECK(support_value(*s, rv({"-1"})) == 1);
}

TEST_CASE("validation rejects malformed models") {
  MinMaxFunction<double> empty{2, {}};
  CHECK_THROWS_AS(empty.validate(), ModelError);
  MinMaxFunction<double> mismatch{2, {{ComponentKind::MaxAffine, {AffinePiece<double>{Vector<double>{1.0}, 0.0}}}}};
  CHECK_THROWS_AS(mismatch.validate(), ModelError);
  QuadraticPiece<double> asym{{{1.0, 2.0}, {0.0, 1.0}}, Vector<double>{0.0, 0.0}, 0.0};
  MinMaxFunction<double> bad_q{2, {{ComponentKind::MaxQuadratic, {asym}}}};
  CHECK_THROWS_AS(bad_q.validate(), ModelError);
  MinMaxFunction<double> neg{2, {{ComponentKind::BallSupport, {BallSupportPiece<double>{Vector<double>{0.0, 0.0}, -1.0}}}}};
  CHECK_THROWS_AS(neg.validate(), ModelError);
}

TEST_CASE("classification flags and float conversion") {
  CHECK(fixture("marco").function.piecewise_affine());
  CHECK_FALSE(fixture("sliced").function.piecewise_affine());
  CHECK(fixture("disks").function.has_ball_support());
  const auto p = fixture("paraboloids");
  const auto f = to_double(*p.exact);
  const Vector<double> x{0.3, -0.7};
  CHECK(evaluate(f, x) == doctest::Approx(to_double(evaluate(*p.exact, from_double<Rational>(x)))));
}
