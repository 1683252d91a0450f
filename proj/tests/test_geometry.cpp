#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/geometry.hpp"
#include "support.hpp"

#include <numbers>
#include <random>

using namespace subdiff;
using namespace testsupport;

namespace {

ConvexPiece<Rational> square() {
  return ConvexPiece<Rational>::polytope({rv({"0", "0"}), rv({"1", "0"}), rv({"1", "1"}), rv({"0", "1"})});
}

}  // namespace

TEST_CASE("support value equals the vertex maximum") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> c(-9, 9);
  const auto s = square();
  for (int t = 0; t < 100; ++t) {
    const Vector<Rational> p{Rational(c(rng)), Rational(c(rng))};
    Rational best = dot(s.as_polytope().vertices[0], p);
    for (const auto& v : s.as_polytope().vertices) best = std::max(best, dot(v, p));
    CHECK(support_value(s, p) == best);
  }
  const auto b = ConvexPiece<double>::ball(Vector<double>{1.0, 2.0}, 3.0);
  CHECK(support_value(b, Vector<double>{3.0, 4.0}) == doctest::Approx(11.0 + 15.0));
}

TEST_CASE("argmax face picks the exposed edge or vertex") {
  const auto s = square();
  const auto edge = argmax_face(s, rv({"1", "0"}));
  CHECK(canonicalize(edge.as_polytope()).vertices == std::vector<Vector<Rational>>{rv({"1", "0"}), rv({"1", "1"})});
  const auto vert = argmax_face(s, rv({"1", "1"}));
  CHECK(vert.is_point());
  CHECK(vert.as_polytope().vertices.front() == rv({"1", "1"}));
  CHECK(argmax_face(s, rv({"0", "0"})).as_polytope().vertices.size() == 4);
  const auto b = argmax_face(ConvexPiece<double>::ball(Vector<double>{0.0, 0.0}, 2.0), Vector<double>{0.0, 5.0});
  REQUIRE(b.is_point());
  CHECK(b.as_polytope().vertices.front()[1] == doctest::Approx(2.0));
}

TEST_CASE("canonicalize keeps exactly the hull vertices") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<Vector<Rational>> pts;
    for (int k = 0; k < 8; ++k) pts.push_back(Vector<Rational>{Rational(c(rng)), Rational(c(rng))});
    auto ref = hull2d(pts);
    std::sort(ref.begin(), ref.end());
    CHECK(canonicalize(Polytope<Rational>{pts}).vertices == ref);
  }
}

TEST_CASE("affine dimension and halfspaces") {
  CHECK(affine_dimension(square().as_polytope()) == 2);
  CHECK(affine_dimension(Polytope<Rational>{{rv({"0", "0"}), rv({"1", "1"}), rv({"2", "2"})}}) == 1);
  CHECK(affine_dimension(Polytope<Rational>{{rv({"3", "1"})}}) == 0);
  const auto sq = square();
  for (const auto& h : halfspaces(sq.as_polytope()))
    for (const auto& v : sq.as_polytope().vertices) CHECK(dot(h.normal, v) <= h.offset);
}

TEST_CASE("containment and subset tests") {
  const auto s = square();
  CHECK(contains(s, rv({"1/2", "1/3"})));
  CHECK(contains(s, rv({"1", "1"})));
  CHECK_FALSE(contains(s, rv({"1", "11/10"})));
  const auto seg = ConvexPiece<Rational>::polytope({rv({"0", "0"}), rv({"1", "1"})});
  CHECK(piece_subset(seg, s));
  CHECK_FALSE(piece_subset(s, seg));
  const auto ball = ConvexPiece<double>::ball(Vector<double>{0.0, 0.0}, 1.0);
  CHECK(contains(ball, Vector<double>{0.6, 0.8}));
  CHECK_FALSE(contains(ball, Vector<double>{0.8, 0.8}));
}

TEST_CASE("polytope intersection matches the clipped square") {
  const auto a = square();
  const auto b = ConvexPiece<Rational>::polytope(
      {rv({"1/2", "1/2"}), rv({"3/2", "1/2"}), rv({"3/2", "3/2"}), rv({"1/2", "3/2"})});
  const auto i = intersect(a, b);
  REQUIRE(i.has_value());
  const std::vector<Vector<Rational>> ref{rv({"1/2", "1/2"}), rv({"1/2", "1"}), rv({"1", "1/2"}), rv({"1", "1"})};
  CHECK(canonicalize(i->as_polytope()).vertices == ref);
  const auto far = ConvexPiece<Rational>::point(rv({"5", "5"}));
  CHECK_FALSE(intersect(a, far).has_value());
  const auto seg = ConvexPiece<Rational>::polytope({rv({"-1", "1/2"}), rv({"3", "1/2"})});
  const auto cut = intersect(seg, a);
  REQUIRE(cut.has_value());
  CHECK(canonicalize(cut->as_polytope()).vertices == std::vector<Vector<Rational>>{rv({"0", "1/2"}), rv({"1", "1/2"})});
  CHECK_THROWS_AS(intersect(ConvexPiece<double>::ball(Vector<double>{0.0, 0.0}, 1.0),
                            ConvexPiece<double>::ball(Vector<double>{1.0, 0.0}, 1.0)),
                  UnsupportedPair);
}

TEST_CASE("projection onto segments and balls") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    const Vector<double> a{u(rng), u(rng)}, b{u(rng), u(rng)}, x{u(rng), u(rng)};
    const auto p = project(ConvexPiece<double>::polytope({a, b}), x);
    CHECK(p.distance == doctest::Approx(segment_distance(x, a, b)).epsilon(1e-9));
  }
  const auto p = project(ConvexPiece<double>::ball(Vector<double>{3.0, 4.0}, 2.0), Vector<double>{0.0, 0.0});
  CHECK(p.distance == doctest::Approx(3.0));
  const auto e = project(ConvexPiece<Rational>::polytope({rv({"2", "1"}), rv({"0", "-1"})}), rv({"0", "0"}));
  CHECK(e.distance_squared == q("1/2"));
}

TEST_CASE("discretization respects the spacing and Hausdorff sees it") {
  const auto seg = ConvexPiece<double>::polytope({Vector<double>{0.0, 0.0}, Vector<double>{1.0, 0.0}});
  const auto pts = discretize(seg, 0.1);
  CHECK(pts.size() >= 11);
  FaceUnion<double> u{{seg}};
  const auto h = hausdorff_cloud(u, pts);
  REQUIRE(std::holds_alternative<DirectedHausdorff>(h));
  CHECK(std::get<DirectedHausdorff>(h).union_to_cloud <= 0.05 + 1e-12);
  CHECK(std::get<DirectedHausdorff>(h).cloud_to_union <= 1e-12);
  const auto shifted = hausdorff_cloud(u, {Vector<double>{0.5, 2.0}});
  CHECK(std::get<DirectedHausdorff>(shifted).cloud_to_union == doctest::Approx(2.0));
  CHECK(std::holds_alternative<EmptySet>(hausdorff_cloud(FaceUnion<double>{}, pts)));
}

TEST_CASE("arcs: points, discretization and closure") {
  const double pi = std::numbers::pi;
  Arc arc{Vector<double>{0.5, 0.0}, 1.0, -pi / 2, pi / 2};
  const auto top = arc.point_at(pi / 2);
  CHECK(top[0] == doctest::Approx(0.5));
  CHECK(top[1] == doctest::Approx(1.0));
  ConvexPiece<double> open{arc, false, {arc.point_at(-pi / 2), arc.point_at(pi / 2)}};
  for (const auto& v : discretize(open, 0.05)) CHECK(std::hypot(v[0] - 0.5, v[1]) == doctest::Approx(1.0));
  const auto closed = closure(FaceUnion<double>{{open}});
  CHECK(closed.pieces.front().closed);
  CHECK(closed.pieces.front().excluded.empty());
}

TEST_CASE("normalize merges touching collinear segments and drops contained pieces") {
  FaceUnion<Rational> u;
  u.pieces.push_back(ConvexPiece<Rational>::polytope({rv({"0", "0"}), rv({"1", "1"})}));
  u.pieces.push_back(ConvexPiece<Rational>::polytope({rv({"1", "1"}), rv({"2", "2"})}));
  u.pieces.push_back(ConvexPiece<Rational>::point(rv({"1/2", "1/2"})));
  const auto n = normalize(u);
  REQUIRE(n.pieces.size() == 1);
  CHECK(n.pieces.front().as_polytope().vertices == std::vector<Vector<Rational>>{rv({"0", "0"}), rv({"2", "2"})});
  FaceUnion<Rational> single{{ConvexPiece<Rational>::polytope({rv({"0", "0"}), rv({"2", "2"})})}};
  CHECK(faces_equal(u, single));
  CHECK(union_hausdorff(u, single) == doctest::Approx(0.0));
}

TEST_CASE("angle order agrees with atan2") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-7, 7);
  for (int t = 0; t < 300; ++t) {
    const Vector<Rational> a{Rational(c(rng)), Rational(c(rng))}, b{Rational(c(rng)), Rational(c(rng))};
    if (a.is_zero() || b.is_zero()) continue;
    auto ang = [](const Vector<Rational>& v) {
      double t = std::atan2(to_double(v[1]), to_double(v[0]));
      return t < 0 ? t + 2 * std::numbers::pi : t;
    };
    if (std::abs(ang(a) - ang(b)) < 1e-12) continue;
    CHECK(angle_less(a, b) == (ang(a) < ang(b)));
  }
}

TEST_CASE("point index nearest distance matches brute force") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vector<double>> pts;
  for (int k = 0; k < 500; ++k) pts.push_back(Vector<double>{u(rng), u(rng)});
  PointIndex idx(pts);
  for (int t = 0; t < 200; ++t) {
    const Vector<double> x{u(rng), u(rng)};
    double best = 1e300;
    for (const auto& p : pts) best = std::min(best, norm(p - x));
    CHECK(idx.nearest_distance(x) == doctest::Approx(best));
  }
  CHECK(std::isinf(PointIndex({}).nearest_distance(Vector<double>{0.0, 0.0})));
}
