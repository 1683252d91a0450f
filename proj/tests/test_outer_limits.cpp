#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subdiff/outer_limits.hpp"
#include "support.hpp"

#include <numbers>
#include <random>
#include <set>

using namespace subdiff;
using namespace testsupport;

namespace {

using Subsets = std::set<std::vector<std::size_t>>;

Subsets subsets_of(const IndexFamily<Rational>& f) {
  Subsets out;
  for (const auto& s : f.subsets) out.insert(s.indices);
  return out;
}

/// Planar consistency of  <g_j, d> = 1 (j in D), <g_j, d> < 1 (otherwise),
/// decided in closed form: the equalities pin d to a point or a line, and the
/// strict rows then cut an open interval of the line parameter.
bool consistent_2d(const std::vector<Vector<Rational>>& g, const std::vector<std::size_t>& d) {
  std::vector<bool> in(g.size(), false);
  for (auto j : d) in[j] = true;
  const auto& g0 = g[d.front()];
  std::optional<Vector<Rational>> point;
  for (auto j : d) {
    const Rational det = g0[0] * g[j][1] - g0[1] * g[j][0];
    if (det == 0) continue;
    point = Vector<Rational>{(g[j][1] - g0[1]) / det, (g0[0] - g[j][0]) / det};
    break;
  }
  auto strict_ok = [&](const Vector<Rational>& x) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (in[j] && dot(g[j], x) != 1) return false;
      if (!in[j] && dot(g[j], x) >= 1) return false;
    }
    return true;
  };
  if (point) return strict_ok(*point);
  if (g0.is_zero()) return false;
  // Line { x0 + s n }: x0 = g0 / |g0|^2, n = rot90(g0).
  const Vector<Rational> x0 = g0 * (Rational(1) / norm_squared(g0));
  const Vector<Rational> n{-g0[1], g0[0]};
  for (auto j : d)
    if (dot(g[j], x0) != 1 || dot(g[j], n) != 0) return false;
  std::optional<Rational> lo, hi;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (in[j]) continue;
    const Rational a = dot(g[j], n), b = 1 - dot(g[j], x0);
    if (a == 0) {
      if (b <= 0) return false;
    } else if (a > 0) {
      hi = hi ? std::min(*hi, Rational(b / a)) : Rational(b / a);
    } else {
      lo = lo ? std::max(*lo, Rational(b / a)) : Rational(b / a);
    }
  }
  return !lo || !hi || *lo < *hi;
}

std::vector<Vector<Rational>> random_gradients(std::mt19937_64& rng, int max_count = 7) {
  std::uniform_int_distribution<int> k(1, max_count), num(-5, 5), den(1, 3);
  std::vector<Vector<Rational>> g;
  const int n = k(rng);
  for (int i = 0; i < n; ++i) g.push_back(Vector<Rational>{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
  return g;
}

}  // namespace

TEST_CASE("marco family and its modification") {
  const auto p = fixture("marco");
  const auto g = basepoint_gradients(*p.exact, *p.basepoint_exact);
  REQUIRE(g.size() == 6);
  CHECK(subsets_of(enumerate_D(g)) == Subsets{{0}, {1}, {3}, {4}, {0, 1}, {0, 4}, {3, 4}});
  const auto m = fixture("marco_modified");
  const auto gm = basepoint_gradients(*m.exact, *m.basepoint_exact);
  CHECK(subsets_of(enumerate_D(gm)) == Subsets{{0}, {1}, {4}, {0, 1}, {0, 4}});
}

TEST_CASE("enumerated families agree with the closed-form planar test") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 150; ++t) {
    const auto g = random_gradients(rng);
    const auto fam = enumerate_D(g);
    Subsets ref;
    for (std::uint32_t mask = 1; mask < (1u << g.size()); ++mask) {
      std::vector<std::size_t> d;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (mask >> j & 1) d.push_back(j);
      if (consistent_2d(g, d)) ref.insert(d);
    }
    CHECK(subsets_of(fam) == ref);
    for (const auto& s : fam.subsets) {
      std::vector<bool> in(g.size(), false);
      for (auto j : s.indices) in[j] = true;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (in[j]) CHECK(dot(g[j], s.certificate) == 1);
        else CHECK(dot(g[j], s.certificate) < 1);
      }
    }
  }
}

TEST_CASE("family is ordered by size then lexicographically") {
  const auto p = fixture("marco");
  const auto fam = enumerate_D(basepoint_gradients(*p.exact, *p.basepoint_exact));
  for (std::size_t i = 1; i < fam.subsets.size(); ++i) {
    const auto& a = fam.subsets[i - 1].indices;
    const auto& b = fam.subsets[i].indices;
    CHECK((a.size() < b.size() || (a.size() == b.size() && a < b)));
  }
}

TEST_CASE("enumeration cap and unsupported dimension") {
  std::vector<Vector<Rational>> g;
  for (int i = 0; i < 21; ++i) g.push_back(Vector<Rational>{Rational(i), Rational(1)});
  CHECK_THROWS_AS(enumerate_D(g), EnumerationCap);
  MinMaxFunction<Rational> f3{3, {{ComponentKind::MaxAffine, {AffinePiece<Rational>{rv({"1", "0", "0"}), 0}}}}};
  CHECK_THROWS_AS(outer_limit_exact(f3, Vector<Rational>(3), false), UnsupportedDimension);
}

TEST_CASE("min-max sweep gives the two segments and the isolated point") {
  const auto p = fixture("minmax");
  const auto res = outer_limit_exact(*p.exact, *p.basepoint_exact, true);
  FaceUnion<Rational> want;
  want.pieces.push_back(ConvexPiece<Rational>::polytope({rv({"2", "1"}), rv({"0", "1"})}));
  want.pieces.push_back(ConvexPiece<Rational>::polytope({rv({"2", "1"}), rv({"0", "-1"})}));
  want.pieces.push_back(ConvexPiece<Rational>::point(rv({"2", "-1"})));
  CHECK(faces_equal(res.set, want));
  CHECK(res.closure_applied);
  for (const auto& c : res.cells) CHECK(c.stable);
}

TEST_CASE("sweep of a max-affine function matches dense direction sampling") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    const auto g = random_gradients(rng, 6);
    MinMaxFunction<Rational> f{2, {{ComponentKind::MaxAffine, {}}}};
    for (const auto& v : g) f.components[0].pieces.push_back(AffinePiece<Rational>{v, 0});
    const auto set = outer_limit_exact(f, Vector<Rational>(2), true).set;
    // Every gradient exposed with a positive support value in some generic
    // direction must belong to the union, and the union lies in conv(g).
    for (int k = 0; k < 720; ++k) {
      const double a = (k + 0.5) * std::numbers::pi / 360;
      const Vector<double> d{std::cos(a), std::sin(a)};
      double best = -1e300;
      std::size_t arg = 0;
      for (std::size_t j = 0; j < g.size(); ++j)
        if (to_double(dot(g[j], from_double<Rational>(d))) > best) {
          best = to_double(dot(g[j], from_double<Rational>(d)));
          arg = j;
        }
      if (best <= 1e-9) continue;
      bool found = false;
      for (const auto& c : set.pieces) found = found || contains(c, g[arg]);
      CHECK(found);
    }
    for (const auto& c : set.pieces)
      for (const auto& v : c.as_polytope().vertices)
        CHECK(std::find(g.begin(), g.end(), v) != g.end());
  }
}

TEST_CASE("identity between the D union and the sweep") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 40; ++t) CHECK(check_identity_affine(random_gradients(rng)).equal);
  const auto p = fixture("marco");
  const auto id = check_identity_affine(basepoint_gradients(*p.exact, *p.basepoint_exact));
  CHECK(id.equal);
  CHECK(id.discrepancy < 1e-12);
}

TEST_CASE("disks: two open semicircles, closure closes them") {
  const double pi = std::numbers::pi;
  const auto p = fixture("disks");
  const auto open = outer_limit_exact(p.function, p.basepoint, false).set;
  REQUIRE(open.pieces.size() == 2);
  for (const auto& c : open.pieces) {
    REQUIRE(c.is_arc());
    CHECK_FALSE(c.closed);
    const auto& a = c.as_arc();
    CHECK(a.theta_end - a.theta_begin == doctest::Approx(pi).epsilon(1e-12));
    // The arc about (-1/2,0) is its right half and vice versa.
    const double mid = 0.5 * (a.theta_begin + a.theta_end);
    CHECK(std::cos(mid) * a.center[0] < 0);
  }
  const auto closed = outer_limit_exact(p.function, p.basepoint, true).set;
  for (const auto& c : closed.pieces) CHECK(c.closed);
}

TEST_CASE("modified disks: arc endpoints where the two support values tie") {
  const auto p = fixture("disks_modified");
  const auto set = outer_limit_exact(p.function, p.basepoint, false).set;
  for (const auto& c : set.pieces) {
    REQUIRE(c.is_arc());
    const auto& a = c.as_arc();
    if (a.center[0] != doctest::Approx(1.5)) continue;
    // This ball attains the minimum for cos t < 0 and the arc ends where
    // f'(0; p) = 3/2 cos t + 1 vanishes, at cos t = -2/3.
    const double x0 = a.point_at(a.theta_begin)[0], x1 = a.point_at(a.theta_end)[0];
    const double ref = 1.5 - 2.0 / 3.0;
    CHECK((std::abs(x0 - ref) < 1e-9 || std::abs(x1 - ref) < 1e-9));
  }
}

TEST_CASE("sampled outer limit approaches the exact set") {
  const auto p = fixture("minmax");
  const auto s = outer_limit_sampled(p.function, p.basepoint, 4000, 1);
  const auto exact = outer_limit_exact(p.function, p.basepoint, true).set;
  const auto h = std::get<DirectedHausdorff>(hausdorff_cloud(exact, s.cloud));
  CHECK(h.union_to_cloud < 0.05);
  CHECK(h.cloud_to_union < 1e-9);
  const auto again = outer_limit_sampled(p.function, p.basepoint, 4000, 1);
  CHECK(again.cloud == s.cloud);
}

TEST_CASE("direction samples are unit and reproducible") {
  const auto a = sample_directions(2, 100, 5);
  CHECK(a == sample_directions(2, 100, 5));
  for (const auto& d : sample_directions(4, 100, 5)) CHECK(norm(d) == doctest::Approx(1.0));
  CHECK(sample_directions(1, 10, 0).size() == 2);
}
