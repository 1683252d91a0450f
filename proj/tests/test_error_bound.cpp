#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/error_bound.hpp"
#include "support.hpp"

#include <numbers>

using namespace subdiff;
using namespace testsupport;

TEST_CASE("min-max lower bound is the distance to the nearest segment") {
  const auto p = fixture("minmax");
  const auto u = outer_limit_exact(*p.exact, *p.basepoint_exact, true).set;
  const auto lb = lower_bound_from_outer(u);
  CHECK_FALSE(lb.infinite);
  // Closed-form distances from 0 to the three pieces; the nearest is the
  // segment from (2,1) to (0,-1).
  const Vector<double> o{0.0, 0.0};
  const double ref = std::min({segment_distance(o, {2.0, 1.0}, {0.0, 1.0}), segment_distance(o, {2.0, 1.0}, {0.0, -1.0}),
                               std::hypot(2.0, -1.0)});
  CHECK(lb.distance == doctest::Approx(ref));
  CHECK(lb.distance_squared == q("1/2"));
  CHECK(lb.attaining_point == rv({"1/2", "-1/2"}));
}

TEST_CASE("empty union gives the infinite marker") {
  const auto lb = lower_bound_from_outer(FaceUnion<Rational>{});
  CHECK(lb.infinite);
  const auto p = fixture("paraboloids");
  CHECK(lower_bound_from_outer(outer_limit_exact(*p.exact, *p.basepoint_exact, true).set).infinite);
}

TEST_CASE("open arcs are projected through their closure") {
  const double pi = std::numbers::pi;
  const Arc right{Vector<double>{-0.5, 0.0}, 1.0, -pi / 2, pi / 2};
  ConvexPiece<double> open_right{right, false, {right.point_at(-pi / 2), right.point_at(pi / 2)}};
  // The circle point nearest 0 is (1/2, 0), inside this arc.
  CHECK(lower_bound_from_outer(FaceUnion<double>{{open_right}}).distance == doctest::Approx(0.5));
  const Arc left{Vector<double>{-0.5, 0.0}, 1.0, pi / 2, 3 * pi / 2};
  ConvexPiece<double> open_left{left, false, {left.point_at(pi / 2), left.point_at(3 * pi / 2)}};
  // Here the nearest point is an excluded endpoint (-1/2, +-1).
  const auto lb = lower_bound_from_outer(FaceUnion<double>{{open_left}});
  CHECK(lb.distance == doctest::Approx(std::hypot(0.5, 1.0)));
  CHECK(lb.via_closure);
}

TEST_CASE("cloud lower bound is the smallest norm") {
  CHECK_FALSE(lower_bound_from_cloud({}).has_value());
  const auto d = lower_bound_from_cloud({Vector<double>{3.0, 4.0}, Vector<double>{0.0, -2.0}});
  REQUIRE(d.has_value());
  CHECK(*d == doctest::Approx(2.0));
}

TEST_CASE("inequality verdict chooses its reference by function class") {
  const auto pa = check_error_bound_inequality(1.0, 0.5, true, 0.99);
  CHECK(pa.reference_kind == "outer_limit");
  CHECK(*pa.reference == 1.0);
  CHECK(pa.satisfied);
  CHECK_FALSE(check_error_bound_inequality(1.0, 0.5, true, 0.9).satisfied);
  const auto sm = check_error_bound_inequality(1.0, 0.5, false, 0.6);
  CHECK(sm.reference_kind == "sampled_limsup");
  CHECK(*sm.reference == 0.5);
  CHECK(sm.satisfied);
  CHECK_FALSE(check_error_bound_inequality(std::nullopt, std::nullopt, false, 1.0).reference.has_value());
}
