#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/oracle.hpp"
#include "support.hpp"

#include <random>

using namespace subdiff;
using namespace testsupport;

TEST_CASE("a linear function gives a single-point cloud") {
  MinMaxFunction<double> f{2, {{ComponentKind::MaxAffine, {AffinePiece<double>{Vector<double>{1.0, 2.0}, 0.0}}}}};
  const auto cloud = sample_limsup(f, Vector<double>{0.0, 0.0});
  REQUIRE_FALSE(cloud.points.empty());
  for (const auto& s : cloud.points) CHECK(s.subgradient == Vector<double>{1.0, 2.0});
}

TEST_CASE("clouds are reproducible for a seed and record it") {
  const auto p = fixture("minmax");
  OracleOptions o;
  o.dirs_per_radius = 300;
  o.seed = 9;
  const auto a = sample_limsup(p.function, p.basepoint, o);
  const auto b = sample_limsup(p.function, p.basepoint, o);
  CHECK(a.seed == 9);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].subgradient == b.points[i].subgradient);
  CHECK(a.evaluated >= a.increasing);
}

TEST_CASE("option validation") {
  OracleOptions o;
  o.radii = {1e-2, 1e-1};
  CHECK_THROWS(o.validate());
  o.radii = {1e-1};
  o.dirs_per_radius = 0;
  CHECK_THROWS(o.validate());
}

TEST_CASE("paraboloids cloud clusters at the two gradients") {
  const auto p = fixture("paraboloids");
  const auto pts = sample_limsup(p.function, p.basepoint).limit_points();
  REQUIRE_FALSE(pts.empty());
  for (const auto& v : pts) {
    const double d = std::min(std::hypot(v[0] - 1.0, v[1]), std::hypot(v[0] + 2.0, v[1]));
    CHECK(d < 1e-2);
  }
}

TEST_CASE("sublevel distance for max(x,-x) is |x|") {
  const auto p = fixture("abs");
  for (double x : {0.3, -0.05, 1e-4}) {
    const auto d = sublevel_distance(p.function, p.basepoint, Vector<double>{x});
    CHECK(d.exact);
    CHECK(d.distance == doctest::Approx(std::abs(x)));
  }
}

TEST_CASE("sublevel distance for the sliced fixture matches the disk formula") {
  // S = { |y|^2 + (y1 + y2)/2 <= 0 }, a disk about (-1/4,-1/4) of radius
  // sqrt(1/8) tangent to the line y1 + y2 = 0, so S lies in its half-plane.
  const auto p = fixture("sliced");
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.2, 0.2);
  for (int t = 0; t < 40; ++t) {
    const Vector<double> x{u(rng), u(rng)};
    const double ref = std::max(0.0, std::hypot(x[0] + 0.25, x[1] + 0.25) - std::sqrt(0.125));
    const auto d = sublevel_distance(p.function, p.basepoint, x);
    CHECK(d.distance >= ref - 1e-12);
    CHECK(d.distance <= ref + 1e-3 * std::max(ref, 1e-3));
  }
}

TEST_CASE("empirical modulus of the convex examples") {
  const auto a = empirical_error_bound_modulus(fixture("abs").function, fixture("abs").basepoint);
  REQUIRE(a.estimate.has_value());
  CHECK(*a.estimate == doctest::Approx(1.0).epsilon(1e-3));
  const auto b = empirical_error_bound_modulus(fixture("max_x_2x").function, fixture("max_x_2x").basepoint);
  REQUIRE(b.estimate.has_value());
  CHECK(*b.estimate == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(b.exact_distances);
}

TEST_CASE("empirical modulus of the min-max fixture sits above the outer-limit distance") {
  const auto p = fixture("minmax");
  const auto e = empirical_error_bound_modulus(p.function, p.basepoint);
  REQUIRE(e.estimate.has_value());
  CHECK(*e.estimate >= std::sqrt(0.5) - 0.02);
  CHECK(e.per_radius_min.size() == e.radii.size());
}
