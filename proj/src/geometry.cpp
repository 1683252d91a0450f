#include "subdiff/geometry.hpp"

#include "subdiff/linalg.hpp"
#include "subdiff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

namespace subdiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kAngleTol = 1e-10;
constexpr double kPointTol = 1e-10;

template <class T>
bool approx_equal(const Vector<T>& a, const Vector<T>& b) {
  if (a.size() != b.size()) return false;
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max({1.0, norm(a), norm(b)});
    return norm(a - b) <= kPointTol * scale;
  }
}

template <class T>
bool approx_equal_scalar(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    return std::abs(a - b) <= kPointTol * std::max({1.0, std::abs(a), std::abs(b)});
  }
}

bool approx_equal_d(const Vector<double>& a, const Vector<double>& b) { return approx_equal(a, b); }

// Angle t reduced into [base, base + 2 pi).
double wrap_from(double t, double base) {
  double d = std::fmod(t - base, kTwoPi);
  if (d < 0) d += kTwoPi;
  return base + d;
}

bool angle_in_arc(const Arc& arc, double t) {
  if (arc.full_circle()) return true;
  const double w = wrap_from(t, arc.theta_begin - kAngleTol);
  return w <= arc.theta_end + kAngleTol;
}

template <class T>
bool is_excluded(const ConvexPiece<T>& c, const Vector<double>& x) {
  if (c.closed) return false;
  return std::any_of(c.excluded.begin(), c.excluded.end(), [&](const Vector<double>& e) { return approx_equal_d(e, x); });
}

template <class T>
void check_dim(std::size_t expected, const Vector<T>& v) {
  if (v.size() != expected) throw DimensionMismatch(expected, v.size());
}

template <class T>
std::vector<Vector<T>> dedupe(std::vector<Vector<T>> vs) {
  if constexpr (is_exact_v<T>) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  } else {
    std::vector<Vector<T>> out;
    for (auto& v : vs)
      if (std::none_of(out.begin(), out.end(), [&](const Vector<T>& w) { return approx_equal(v, w); }))
        out.push_back(std::move(v));
    std::sort(out.begin(), out.end());
    return out;
  }
}

template <class T>
T ball_support(const Ball<T>& b, const Vector<T>& p) {
  if (p.is_zero() || b.radius == 0) return dot(b.center, p);
  return dot(b.center, p) + b.radius * ScalarTraits<T>::sqrt(norm_squared(p));
}

double arc_support(const Arc& a, const Vector<double>& p) {
  const double np = norm(p);
  if (np == 0.0) return 0.0;
  const double phi = std::atan2(p[1], p[0]);
  double best;
  if (angle_in_arc(a, phi)) {
    best = 1.0;
  } else {
    best = std::max(std::cos(a.theta_begin - phi), std::cos(a.theta_end - phi));
  }
  return dot(a.center, p) + a.radius * np * best;
}

template <class T>
Vector<double> as_double(const Vector<T>& v) {
  return to_double(v);
}

template <class T>
ConvexPiece<double> piece_to_double(const ConvexPiece<T>& c) {
  ConvexPiece<double> out;
  out.closed = c.closed;
  out.excluded = c.excluded;
  if (c.is_polytope()) {
    Polytope<double> p;
    for (const auto& v : c.as_polytope().vertices) p.vertices.push_back(to_double(v));
    out.shape = std::move(p);
  } else if (c.is_ball()) {
    out.shape = Ball<double>{to_double(c.as_ball().center), to_double(c.as_ball().radius)};
  } else {
    out.shape = c.as_arc();
  }
  return out;
}

// Segment [v0, v1] intersected with conv(points) via two LPs over the
// segment parameter.
template <class T>
std::optional<Polytope<T>> segment_cut(const Vector<T>& v0, const Vector<T>& v1, const std::vector<Vector<T>>& pts) {
  const std::size_t n = v0.size();
  const std::size_t m = pts.size();
  const Vector<T> e = v1 - v0;
  // Variables: t, s, lambda_1..m.
  const std::size_t nv = 2 + m;
  linalg::Matrix<T> a;
  std::vector<T> b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<T> row(nv, T(0));
    row[0] = e[i];
    for (std::size_t k = 0; k < m; ++k) row[2 + k] = -pts[k][i];
    a.push_back(std::move(row));
    b.push_back(-v0[i]);
  }
  {
    std::vector<T> row(nv, T(0));
    for (std::size_t k = 0; k < m; ++k) row[2 + k] = T(1);
    a.push_back(std::move(row));
    b.push_back(T(1));
  }
  {
    std::vector<T> row(nv, T(0));
    row[0] = T(1);
    row[1] = T(1);
    a.push_back(std::move(row));
    b.push_back(T(1));
  }
  std::vector<T> c(nv, T(0));
  c[0] = T(1);
  const auto hi = lp::maximize_standard(a, b, c);
  if (hi.status != lp::LpStatus::Optimal) return std::nullopt;
  c[0] = T(-1);
  const auto lo = lp::maximize_standard(a, b, c);
  const T t_hi = hi.x[0];
  const T t_lo = lo.status == lp::LpStatus::Optimal ? lo.x[0] : t_hi;
  Polytope<T> out;
  out.vertices.push_back(v0 + e * t_lo);
  if (!approx_equal_scalar(t_lo, t_hi)) out.vertices.push_back(v0 + e * t_hi);
  if constexpr (!is_exact_v<T>) {
    // LP acceptance is tolerance based; confirm the endpoints really lie in conv(pts).
    for (const auto& v : out.vertices)
      if (!lp::convex_weights(pts, v)) return std::nullopt;
  }
  return canonicalize(out);
}

template <class T>
bool satisfies(const std::vector<Halfspace<T>>& hs, const Vector<T>& x) {
  for (const auto& h : hs) {
    const T lhs = dot(h.normal, x);
    if constexpr (is_exact_v<T>) {
      if (lhs > h.offset) return false;
    } else {
      const double scale = std::max({1.0, std::abs(h.offset), norm(h.normal) * norm(x)});
      if (lhs > h.offset + 1e-9 * scale) return false;
    }
  }
  return true;
}

template <class T>
std::optional<Polytope<T>> polytope_intersection_hrep(const Polytope<T>& a, const Polytope<T>& b) {
  const std::size_t n = a.dimension();
  auto hs = halfspaces(a);
  const auto hb = halfspaces(b);
  hs.insert(hs.end(), hb.begin(), hb.end());
  std::vector<Vector<T>> verts;
  const std::size_t m = hs.size();
  if (m < n) return std::nullopt;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    linalg::Matrix<T> mat;
    std::vector<T> rhs;
    for (auto i : idx) {
      mat.push_back(hs[i].normal.coords());
      rhs.push_back(hs[i].offset);
    }
    if (auto sol = linalg::solve(mat, rhs)) {
      Vector<T> x(std::move(*sol));
      if (satisfies(hs, x)) verts.push_back(std::move(x));
    }
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (verts.empty()) return std::nullopt;
  return canonicalize(Polytope<T>{std::move(verts)});
}

template <class T>
std::vector<Vector<double>> sample_simplex_cover(const std::vector<Vector<double>>& vs, std::size_t k, double res) {
  std::vector<Vector<double>> out;
  const std::size_t m = vs.size();
  double diam = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) diam = std::max(diam, norm(vs[i] - vs[j]));
  const std::size_t steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(diam / res)));
  std::vector<std::size_t> idx(k + 1);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<Vector<double>> diffs;
    for (std::size_t i = 1; i <= k; ++i) diffs.push_back(vs[idx[i]] - vs[idx[0]]);
    if (linalg::rank(diffs) == k) {
      // Barycentric lattice with denominator `steps`.
      std::vector<std::size_t> c(k + 1, 0);
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos == k) {
          c[k] = left;
          Vector<double> p(vs[0].size());
          for (std::size_t i = 0; i <= k; ++i) p += vs[idx[i]] * (static_cast<double>(c[i]) / steps);
          out.push_back(std::move(p));
          return;
        }
        for (std::size_t v = 0; v <= left; ++v) {
          c[pos] = v;
          rec(pos + 1, left - v);
        }
      };
      rec(0, steps);
    }
    std::size_t i = k + 1;
    while (i > 0 && idx[i - 1] == m - (k + 1) + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j <= k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

template <class T>
int kind_rank(const ConvexPiece<T>& c) {
  return c.is_polytope() ? 0 : (c.is_ball() ? 1 : 2);
}

template <class T>
bool piece_less(const ConvexPiece<T>& a, const ConvexPiece<T>& b) {
  if (kind_rank(a) != kind_rank(b)) return kind_rank(a) < kind_rank(b);
  if (a.is_polytope()) {
    const auto& va = a.as_polytope().vertices;
    const auto& vb = b.as_polytope().vertices;
    if (va.size() != vb.size()) return va.size() < vb.size();
    return va < vb;
  }
  if (a.is_ball()) {
    if (!(a.as_ball().center == b.as_ball().center)) return a.as_ball().center < b.as_ball().center;
    return a.as_ball().radius < b.as_ball().radius;
  }
  const auto& x = a.as_arc();
  const auto& y = b.as_arc();
  if (!(x.center == y.center)) return x.center < y.center;
  if (x.radius != y.radius) return x.radius < y.radius;
  return x.theta_begin < y.theta_begin;
}

template <class T>
bool pieces_identical(const ConvexPiece<T>& a, const ConvexPiece<T>& b) {
  if (kind_rank(a) != kind_rank(b)) return false;
  if (a.closed != b.closed) return false;
  if (a.is_polytope()) {
    const auto& va = a.as_polytope().vertices;
    const auto& vb = b.as_polytope().vertices;
    if (va.size() != vb.size()) return false;
    for (std::size_t i = 0; i < va.size(); ++i)
      if (!approx_equal(va[i], vb[i])) return false;
    return true;
  }
  if (a.is_ball())
    return approx_equal(a.as_ball().center, b.as_ball().center) &&
           approx_equal_scalar(a.as_ball().radius, b.as_ball().radius);
  const auto& x = a.as_arc();
  const auto& y = b.as_arc();
  return approx_equal_d(x.center, y.center) && std::abs(x.radius - y.radius) <= kPointTol &&
         std::abs(x.theta_begin - y.theta_begin) <= kAngleTol && std::abs(x.theta_end - y.theta_end) <= kAngleTol;
}

bool same_circle(const Arc& a, const Arc& b) {
  return approx_equal_d(a.center, b.center) && std::abs(a.radius - b.radius) <= kPointTol * std::max(1.0, a.radius);
}

// Merges co-circular arcs whose angular intervals overlap or touch at an
// included point. Point pieces on arcs are absorbed afterwards by the subset
// pass; points sitting at excluded endpoints re-include those endpoints.
template <class T>
void merge_arcs(std::vector<ConvexPiece<T>>& pieces) {
  // Points at excluded arc endpoints: re-include the endpoint.
  for (auto& pc : pieces) {
    if (!pc.is_arc() || pc.closed) continue;
    auto& ex = pc.excluded;
    ex.erase(std::remove_if(ex.begin(), ex.end(),
                            [&](const Vector<double>& e) {
                              return std::any_of(pieces.begin(), pieces.end(), [&](const ConvexPiece<T>& q) {
                                return q.is_point() && approx_equal_d(to_double(q.as_polytope().vertices[0]), e);
                              });
                            }),
             ex.end());
    if (ex.empty()) pc.closed = true;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < pieces.size() && !changed; ++i) {
      if (!pieces[i].is_arc()) continue;
      for (std::size_t j = 0; j < pieces.size() && !changed; ++j) {
        if (i == j || !pieces[j].is_arc()) continue;
        const Arc& a = pieces[i].as_arc();
        const Arc& b = pieces[j].as_arc();
        if (!same_circle(a, b) || a.full_circle()) continue;
        // Start of b relative to a's start.
        const double bb = wrap_from(b.theta_begin, a.theta_begin - kAngleTol);
        if (bb > a.theta_end + kAngleTol) continue;
        const bool touching = std::abs(bb - a.theta_end) <= kAngleTol;
        if (touching) {
          const Vector<double> junction = a.point_at(a.theta_end);
          if (is_excluded(pieces[i], junction) && is_excluded(pieces[j], junction)) continue;
        }
        Arc merged = a;
        merged.theta_end = std::max(a.theta_end, bb + (b.theta_end - b.theta_begin));
        if (merged.theta_end - merged.theta_begin >= kTwoPi - kAngleTol) merged.theta_end = merged.theta_begin + kTwoPi;
        ConvexPiece<T> out{merged, true, {}};
        const Vector<double> pb = merged.point_at(merged.theta_begin);
        const Vector<double> pe = merged.point_at(merged.theta_end);
        auto keep_excluded = [&](const ConvexPiece<T>& src) {
          for (const auto& e : src.excluded) {
            const bool at_begin = approx_equal_d(e, pb);
            const bool at_end = approx_equal_d(e, pe);
            if (merged.full_circle()) continue;
            // An endpoint stays excluded only if it is an endpoint of the merged arc
            // and is not covered by the other arc's interior.
            if ((at_begin || at_end) &&
                std::none_of(out.excluded.begin(), out.excluded.end(), [&](const Vector<double>& q) { return approx_equal_d(q, e); }))
              out.excluded.push_back(e);
          }
        };
        keep_excluded(pieces[i]);
        keep_excluded(pieces[j]);
        // Endpoints of one arc lying strictly inside the other are covered.
        auto covered = [&](const Vector<double>& e, const ConvexPiece<T>& by) {
          const Arc& arc = by.as_arc();
          const double t = std::atan2(e[1] - arc.center[1], e[0] - arc.center[0]);
          if (!angle_in_arc(arc, t)) return false;
          return !is_excluded(by, e);
        };
        out.excluded.erase(std::remove_if(out.excluded.begin(), out.excluded.end(),
                                          [&](const Vector<double>& e) { return covered(e, pieces[i]) || covered(e, pieces[j]); }),
                           out.excluded.end());
        out.closed = out.excluded.empty();
        pieces[i] = std::move(out);
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
  // Canonical angle range: theta_begin in (-pi, pi].
  for (auto& pc : pieces) {
    if (!pc.is_arc()) continue;
    Arc a = pc.as_arc();
    const double span = a.theta_end - a.theta_begin;
    a.theta_begin = std::atan2(std::sin(a.theta_begin), std::cos(a.theta_begin));
    if (a.full_circle() || span >= kTwoPi - kAngleTol) {
      a.theta_begin = -std::numbers::pi;
      a.theta_end = std::numbers::pi;
      pc.closed = true;
      pc.excluded.clear();
    } else {
      a.theta_end = a.theta_begin + span;
    }
    pc.shape = a;
  }
}

// Merges collinear points/segments that overlap or touch.
template <class T>
void merge_segments(std::vector<ConvexPiece<T>>& pieces) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < pieces.size() && !changed; ++i) {
      if (!pieces[i].is_polytope() || !pieces[i].closed || pieces[i].as_polytope().vertices.size() != 2) continue;
      for (std::size_t j = 0; j < pieces.size() && !changed; ++j) {
        if (i == j || !pieces[j].is_polytope() || !pieces[j].closed || pieces[j].as_polytope().vertices.size() != 2) continue;
        std::vector<Vector<T>> all = pieces[i].as_polytope().vertices;
        for (const auto& v : pieces[j].as_polytope().vertices) all.push_back(v);
        if (affine_dimension(Polytope<T>{all}) != 1) continue;
        if (!intersect(pieces[i], pieces[j])) continue;
        pieces[i] = ConvexPiece<T>{canonicalize(Polytope<T>{all}), true, {}};
        pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }
}

}  // namespace

Vector<double> Arc::point_at(double theta) const {
  return Vector<double>{center[0] + radius * std::cos(theta), center[1] + radius * std::sin(theta)};
}

bool Arc::full_circle() const { return theta_end - theta_begin >= kTwoPi - kAngleTol; }

template <class T>
std::size_t ConvexPiece<T>::dimension() const {
  return std::visit([](const auto& s) { return s.dimension(); }, shape);
}

template <class T>
bool angle_less(const Vector<T>& a, const Vector<T>& b) {
  // Half 0: angle in [0, pi); half 1: [pi, 2 pi).
  auto half = [](const Vector<T>& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  const int ha = half(a);
  const int hb = half(b);
  if (ha != hb) return ha < hb;
  return cross2(a, b) > 0;
}

template <class T>
T support_value(const ConvexPiece<T>& c, const Vector<T>& p) {
  check_dim(c.dimension(), p);
  if (c.is_polytope()) {
    const auto& vs = c.as_polytope().vertices;
    if (vs.empty()) throw std::invalid_argument("support_value: empty polytope");
    T best = dot(vs.front(), p);
    for (std::size_t i = 1; i < vs.size(); ++i) best = std::max(best, T(dot(vs[i], p)));
    return best;
  }
  if (c.is_ball()) return ball_support(c.as_ball(), p);
  if constexpr (is_exact_v<T>) {
    throw std::logic_error("arc pieces are float-mode only");
  } else {
    return arc_support(c.as_arc(), p);
  }
}

template <class T>
ConvexPiece<T> argmax_face(const ConvexPiece<T>& c, const Vector<T>& p, double tau) {
  check_dim(c.dimension(), p);
  if (p.is_zero()) return c;
  if (c.is_polytope()) {
    const auto& vs = c.as_polytope().vertices;
    const T h = support_value(c, p);
    const T band = activity_band(h, tau);
    Polytope<T> face;
    for (const auto& v : vs)
      if (dot(v, p) >= h - band) face.vertices.push_back(v);
    return ConvexPiece<T>{std::move(face), true, {}};
  }
  if (c.is_ball()) {
    const auto& b = c.as_ball();
    if (b.radius == 0) return ConvexPiece<T>::point(b.center);
    const T len = ScalarTraits<T>::sqrt(norm_squared(p));
    return ConvexPiece<T>::point(b.center + p * T(b.radius / len));
  }
  if constexpr (is_exact_v<T>) {
    throw std::logic_error("arc pieces are float-mode only");
  } else {
    const Arc& a = c.as_arc();
    const double phi = std::atan2(p[1], p[0]);
    if (angle_in_arc(a, phi)) return ConvexPiece<T>::point(a.point_at(phi));
    const double cb = std::cos(a.theta_begin - phi);
    const double ce = std::cos(a.theta_end - phi);
    const double band = tau * std::max(1.0, std::abs(support_value(c, p)));
    std::vector<Vector<double>> vs;
    if (cb >= ce - band) vs.push_back(a.point_at(a.theta_begin));
    if (ce >= cb - band) vs.push_back(a.point_at(a.theta_end));
    return ConvexPiece<T>{canonicalize(Polytope<double>{vs}), true, {}};
  }
}

template <class T>
Polytope<T> canonicalize(const Polytope<T>& p) {
  auto vs = dedupe(p.vertices);
  if (vs.size() <= 2) return Polytope<T>{std::move(vs)};
  std::vector<bool> keep(vs.size(), true);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::vector<Vector<T>> others;
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (j != i && keep[j]) others.push_back(vs[j]);
    if (lp::convex_weights(others, vs[i])) keep[i] = false;
  }
  std::vector<Vector<T>> out;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (keep[i]) out.push_back(vs[i]);
  return Polytope<T>{std::move(out)};
}

template <class T>
std::size_t affine_dimension(const Polytope<T>& p) {
  if (p.vertices.size() <= 1) return 0;
  std::vector<Vector<T>> diffs;
  for (std::size_t i = 1; i < p.vertices.size(); ++i) diffs.push_back(p.vertices[i] - p.vertices[0]);
  return linalg::rank(diffs);
}

template <class T>
std::vector<Halfspace<T>> halfspaces(const Polytope<T>& poly) {
  const Polytope<T> p = canonicalize(poly);
  const auto& vs = p.vertices;
  if (vs.empty()) throw std::invalid_argument("halfspaces: empty polytope");
  const std::size_t n = vs.front().size();
  std::vector<Halfspace<T>> out;

  linalg::Matrix<T> diffs;
  for (std::size_t i = 1; i < vs.size(); ++i) diffs.push_back((vs[i] - vs[0]).coords());
  const auto normals = linalg::nullspace(diffs, n);
  for (const auto& nv : normals) {
    out.push_back({nv, dot(nv, vs[0])});
    out.push_back({-nv, T(-dot(nv, vs[0]))});
  }
  const std::size_t k = n - normals.size();
  if (k == 0) return out;

  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  const std::size_t m = vs.size();
  std::vector<Halfspace<T>> facets;
  while (true) {
    linalg::Matrix<T> rows;
    for (const auto& nv : normals) rows.push_back(nv.coords());
    for (std::size_t i = 1; i < k; ++i) rows.push_back((vs[idx[i]] - vs[idx[0]]).coords());
    const auto ns = linalg::nullspace(rows, n);
    if (ns.size() == 1) {
      Vector<T> h = ns.front();
      const T off = dot(h, vs[idx[0]]);
      bool le = true, ge = true;
      for (const auto& v : vs) {
        const T val = dot(h, v);
        if constexpr (is_exact_v<T>) {
          if (val > off) le = false;
          if (val < off) ge = false;
        } else {
          const double tol = 1e-10 * std::max({1.0, std::abs(off), norm(h) * norm(v)});
          if (val > off + tol) le = false;
          if (val < off - tol) ge = false;
        }
      }
      if (le != ge) {
        Halfspace<T> f = le ? Halfspace<T>{h, off} : Halfspace<T>{-h, T(-off)};
        // Normalize for de-duplication.
        if constexpr (is_exact_v<T>) {
          T scale(0);
          for (const auto& c : f.normal)
            if (c != 0) {
              scale = abs_value(c);
              break;
            }
          f.normal *= T(1) / scale;
          f.offset /= scale;
          const bool dup = std::any_of(facets.begin(), facets.end(), [&](const Halfspace<T>& g) {
            return g.normal == f.normal && g.offset == f.offset;
          });
          if (!dup) facets.push_back(std::move(f));
        } else {
          const double len = norm(f.normal);
          f.normal *= 1.0 / len;
          f.offset /= len;
          const bool dup = std::any_of(facets.begin(), facets.end(), [&](const Halfspace<T>& g) {
            return approx_equal(g.normal, f.normal) && approx_equal_scalar(g.offset, f.offset);
          });
          if (!dup) facets.push_back(std::move(f));
        }
      }
    }
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  out.insert(out.end(), facets.begin(), facets.end());
  return out;
}

template <class T>
bool contains(const ConvexPiece<T>& c, const Vector<T>& x) {
  check_dim(c.dimension(), x);
  bool inside = false;
  if (c.is_polytope()) {
    const auto& vs = c.as_polytope().vertices;
    if (vs.size() == 1) {
      inside = approx_equal(vs[0], x);
    } else {
      inside = lp::convex_weights(vs, x).has_value();
    }
  } else if (c.is_ball()) {
    const auto& b = c.as_ball();
    const T d2 = norm_squared(x - b.center);
    const T r2 = b.radius * b.radius;
    if constexpr (is_exact_v<T>) {
      inside = d2 <= r2;
    } else {
      inside = d2 <= r2 + kPointTol * std::max(1.0, r2);
    }
  } else {
    if constexpr (is_exact_v<T>) {
      throw std::logic_error("arc pieces are float-mode only");
    } else {
      const Arc& a = c.as_arc();
      const Vector<double> d = x - a.center;
      if (std::abs(norm(d) - a.radius) > kPointTol * std::max(1.0, a.radius)) return false;
      inside = angle_in_arc(a, std::atan2(d[1], d[0]));
    }
  }
  if (inside && !c.closed && is_excluded(c, to_double(x))) return false;
  return inside;
}

template <class T>
bool piece_subset(const ConvexPiece<T>& inner, const ConvexPiece<T>& outer) {
  if (inner.dimension() != outer.dimension()) return false;
  if (!outer.closed) {
    // An excluded point of `outer` inside `inner` breaks containment.
    for (const auto& e : outer.excluded) {
      ConvexPiece<T> in_closed = inner;
      in_closed.closed = true;
      if constexpr (is_exact_v<T>) {
        (void)e;
      } else {
        if (!is_excluded(inner, e) && contains(in_closed, e)) return false;
      }
    }
  }
  if (inner.is_polytope()) {
    for (const auto& v : inner.as_polytope().vertices) {
      ConvexPiece<T> oc = outer;
      oc.closed = true;
      if (!contains(oc, v)) return false;
    }
    if (outer.is_arc() && inner.as_polytope().vertices.size() > 1) return false;
    return true;
  }
  if (inner.is_ball()) {
    const auto& b = inner.as_ball();
    if (outer.is_ball()) {
      const auto& o = outer.as_ball();
      if constexpr (is_exact_v<T>) {
        const T gap = o.radius - b.radius;
        return gap >= 0 && norm_squared(b.center - o.center) <= gap * gap;
      } else {
        return norm(b.center - o.center) + b.radius <= o.radius + kPointTol;
      }
    }
    if (b.radius == 0) return contains(outer, b.center);
    return false;
  }
  if constexpr (is_exact_v<T>) {
    throw std::logic_error("arc pieces are float-mode only");
  } else {
    const Arc& a = inner.as_arc();
    if (outer.is_arc()) {
      const Arc& o = outer.as_arc();
      if (!same_circle(a, o)) return false;
      if (o.full_circle()) return true;
      const double b0 = wrap_from(a.theta_begin, o.theta_begin - kAngleTol);
      return b0 + (a.theta_end - a.theta_begin) <= o.theta_end + kAngleTol;
    }
    if (outer.is_ball()) {
      const auto& o = outer.as_ball();
      // Farthest arc point from the outer center.
      const Vector<double> d = a.center - o.center;
      double far = 0.0;
      const double phi = std::atan2(d[1], d[0]);
      if (norm(d) > 0 && angle_in_arc(a, phi)) far = norm(d) + a.radius;
      far = std::max({far, norm(a.point_at(a.theta_begin) - o.center), norm(a.point_at(a.theta_end) - o.center)});
      return far <= o.radius + kPointTol;
    }
    return false;
  }
}

template <class T>
std::optional<ConvexPiece<T>> intersect(const ConvexPiece<T>& a, const ConvexPiece<T>& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch(a.dimension(), b.dimension());
  const std::size_t n = a.dimension();
  std::optional<ConvexPiece<T>> out;
  if (a.is_point()) {
    if (contains(b, a.as_polytope().vertices[0])) out = a;
    else return std::nullopt;
  } else if (b.is_point()) {
    if (contains(a, b.as_polytope().vertices[0])) out = b;
    else return std::nullopt;
  } else if (a.is_polytope() && b.is_polytope()) {
    const auto& pa = a.as_polytope();
    const auto& pb = b.as_polytope();
    std::optional<Polytope<T>> cut;
    if (pa.vertices.size() == 2) {
      cut = segment_cut(pa.vertices[0], pa.vertices[1], pb.vertices);
    } else if (pb.vertices.size() == 2) {
      cut = segment_cut(pb.vertices[0], pb.vertices[1], pa.vertices);
    } else if (n <= 3) {
      cut = polytope_intersection_hrep(pa, pb);
    } else {
      throw UnsupportedPair("polytope intersection is limited to dimension <= 3");
    }
    if (!cut) return std::nullopt;
    out = ConvexPiece<T>{std::move(*cut), true, {}};
  } else if (a.is_ball() && b.is_ball()) {
    if (approx_equal(a.as_ball().center, b.as_ball().center) &&
        approx_equal_scalar(a.as_ball().radius, b.as_ball().radius)) {
      out = a;
    } else {
      throw UnsupportedPair("ball-ball intersection is not supported");
    }
  } else {
    throw UnsupportedPair("unsupported piece pair for exact intersection");
  }
  // Combine closure information.
  out->closed = a.closed && b.closed;
  out->excluded.clear();
  if (!out->closed) {
    ConvexPiece<T> closed_out = *out;
    closed_out.closed = true;
    for (const auto* src : {&a, &b})
      for (const auto& e : src->excluded) {
        if constexpr (is_exact_v<T>) {
          if (contains(closed_out, from_double<T>(e))) out->excluded.push_back(e);
        } else {
          if (contains(closed_out, e)) out->excluded.push_back(e);
        }
      }
    if (out->excluded.empty()) out->closed = true;
    if (out->is_point() && !out->excluded.empty()) return std::nullopt;
  }
  return out;
}

template <class T>
Projection<T> project(const ConvexPiece<T>& c, const Vector<T>& x) {
  check_dim(c.dimension(), x);
  Projection<T> out;
  out.via_closure = !c.closed;
  if (c.is_polytope()) {
    std::vector<Vector<T>> shifted;
    for (const auto& v : c.as_polytope().vertices) shifted.push_back(v - x);
    lp::MinNormPoint<T> mnp;
    if constexpr (is_exact_v<T>) {
      mnp = lp::min_norm_point(shifted);
    } else {
      if (shifted.size() <= 20 && x.size() <= 3) {
        mnp = lp::min_norm_point(shifted);
      } else {
        mnp = lp::min_norm_point_wolfe(shifted);
      }
    }
    out.point = mnp.point + x;
    out.distance_squared = mnp.norm_squared;
    out.distance = mnp.norm;
    return out;
  }
  if constexpr (is_exact_v<T>) {
    throw std::logic_error("ball and arc projections are float-mode only");
  } else {
    if (c.is_ball()) {
      const auto& b = c.as_ball();
      const Vector<double> d = x - b.center;
      const double len = norm(d);
      if (len <= b.radius) {
        out.point = x;
      } else {
        out.point = b.center + d * (b.radius / len);
      }
    } else {
      const Arc& a = c.as_arc();
      const Vector<double> d = x - a.center;
      const double phi = std::atan2(d[1], d[0]);
      if (norm(d) > 0 && angle_in_arc(a, phi)) {
        out.point = a.point_at(phi);
      } else {
        const auto p0 = a.point_at(a.theta_begin);
        const auto p1 = a.point_at(a.theta_end);
        out.point = norm(p0 - x) <= norm(p1 - x) ? p0 : p1;
      }
    }
    out.distance_squared = norm_squared(out.point - x);
    out.distance = std::sqrt(out.distance_squared);
    return out;
  }
}

template <class T>
std::vector<Vector<double>> discretize(const ConvexPiece<T>& c, double res) {
  if (!(res > 0)) throw std::invalid_argument("discretize: resolution must be positive");
  const ConvexPiece<double> d = piece_to_double(c);
  std::vector<Vector<double>> out;
  if (d.is_polytope()) {
    const auto& vs = d.as_polytope().vertices;
    const std::size_t k = affine_dimension(d.as_polytope());
    if (k == 0) return {vs.front()};
    out = sample_simplex_cover<double>(vs, k, res);
    for (const auto& v : vs) out.push_back(v);
  } else if (d.is_ball()) {
    const auto& b = d.as_ball();
    const std::size_t n = b.center.size();
    if (b.radius == 0) return {b.center};
    const auto steps = static_cast<long>(std::ceil(b.radius / res));
    // Lattice points inside the ball plus a boundary ring (planar case).
    std::vector<long> idx(n, -steps);
    while (true) {
      Vector<double> p = b.center;
      for (std::size_t i = 0; i < n; ++i) p[i] += idx[i] * res;
      if (norm(p - b.center) <= b.radius) out.push_back(p);
      std::size_t i = 0;
      while (i < n && idx[i] == steps) idx[i++] = -steps;
      if (i == n) break;
      ++idx[i];
    }
    if (n == 2) {
      const auto ring = static_cast<std::size_t>(std::ceil(kTwoPi * b.radius / res));
      for (std::size_t k = 0; k < ring; ++k) {
        const double t = kTwoPi * k / ring;
        out.push_back(Vector<double>{b.center[0] + b.radius * std::cos(t), b.center[1] + b.radius * std::sin(t)});
      }
    }
  } else {
    const Arc& a = d.as_arc();
    const double span = a.theta_end - a.theta_begin;
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span * a.radius / res)));
    for (std::size_t k = 0; k <= steps; ++k) out.push_back(a.point_at(a.theta_begin + span * k / steps));
  }
  return out;
}

template <class T>
std::vector<Vector<double>> discretize(const FaceUnion<T>& u, double res) {
  std::vector<Vector<double>> out;
  for (const auto& c : u.pieces) {
    auto pts = discretize(c, res);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  return out;
}

template <class T>
HausdorffResult hausdorff_cloud(const FaceUnion<T>& u, const std::vector<Vector<double>>& cloud, double res) {
  if (u.empty() || cloud.empty()) return EmptySet{};
  std::vector<ConvexPiece<double>> pieces;
  for (const auto& c : u.pieces) pieces.push_back(piece_to_double(c));
  const PointIndex index(cloud);
  DirectedHausdorff out;
  for (const auto& p : discretize(u, res)) out.union_to_cloud = std::max(out.union_to_cloud, index.nearest_distance(p));
  for (const auto& x : cloud) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : pieces) best = std::min(best, project(c, x).distance);
    out.cloud_to_union = std::max(out.cloud_to_union, best);
  }
  return out;
}

template <class T>
FaceUnion<T> normalize(const FaceUnion<T>& u) {
  std::vector<ConvexPiece<T>> pieces;
  for (const auto& c : u.pieces) {
    if (c.is_polytope()) {
      ConvexPiece<T> cc = c;
      cc.shape = canonicalize(c.as_polytope());
      pieces.push_back(std::move(cc));
    } else if (c.is_ball() && c.as_ball().radius == 0) {
      pieces.push_back(ConvexPiece<T>::point(c.as_ball().center));
    } else {
      pieces.push_back(c);
    }
  }
  // Exact duplicates first.
  std::vector<ConvexPiece<T>> unique;
  for (auto& c : pieces)
    if (std::none_of(unique.begin(), unique.end(), [&](const ConvexPiece<T>& q) { return pieces_identical(q, c); }))
      unique.push_back(std::move(c));
  pieces = std::move(unique);

  if constexpr (!is_exact_v<T>) merge_arcs(pieces);
  merge_segments(pieces);

  // Drop pieces contained in another one.
  std::vector<bool> drop(pieces.size(), false);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      if (i == j || drop[j]) continue;
      if (piece_subset(pieces[i], pieces[j])) {
        // Mutual containment keeps the earlier piece.
        if (piece_subset(pieces[j], pieces[i]) && j > i) continue;
        drop[i] = true;
        break;
      }
    }
  }
  FaceUnion<T> out;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (!drop[i]) out.pieces.push_back(std::move(pieces[i]));
  std::sort(out.pieces.begin(), out.pieces.end(), piece_less<T>);
  return out;
}

template <class T>
FaceUnion<T> closure(const FaceUnion<T>& u) {
  FaceUnion<T> out = u;
  for (auto& c : out.pieces) {
    c.closed = true;
    c.excluded.clear();
  }
  return normalize(out);
}

template <class T>
double union_hausdorff(const FaceUnion<T>& a, const FaceUnion<T>& b, double res) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  std::vector<ConvexPiece<double>> pa, pb;
  for (const auto& c : a.pieces) pa.push_back(piece_to_double(c));
  for (const auto& c : b.pieces) pb.push_back(piece_to_double(c));
  auto directed = [&](const FaceUnion<T>& from, const std::vector<ConvexPiece<double>>& to) {
    double worst = 0.0;
    for (const auto& x : discretize(from, res)) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : to) best = std::min(best, project(c, x).distance);
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, pb), directed(b, pa));
}

template <class T>
bool faces_equal(const FaceUnion<T>& a, const FaceUnion<T>& b, double tol, double res) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    (void)res;
    const auto na = normalize(a);
    const auto nb = normalize(b);
    if (na.pieces.size() != nb.pieces.size()) return false;
    for (std::size_t i = 0; i < na.pieces.size(); ++i)
      if (!pieces_identical(na.pieces[i], nb.pieces[i])) return false;
    return true;
  } else {
    return union_hausdorff(a, b, res) <= tol;
  }
}

PointIndex::PointIndex(std::vector<Vector<double>> points) : points_(std::move(points)) {
  std::vector<std::size_t> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, idx.size(), 0);
}

int PointIndex::build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, std::size_t depth) {
  if (lo >= hi) return -1;
  const std::size_t axis = points_[idx[lo]].size() ? depth % points_[idx[lo]].size() : 0;
  const std::size_t mid = (lo + hi) / 2;
  std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(mid),
                   idx.begin() + static_cast<std::ptrdiff_t>(hi),
                   [&](std::size_t a, std::size_t b) { return points_[a][axis] < points_[b][axis]; });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{idx[mid], axis});
  const int l = build(idx, lo, mid, depth + 1);
  const int r = build(idx, mid + 1, hi, depth + 1);
  nodes_[static_cast<std::size_t>(id)].left = l;
  nodes_[static_cast<std::size_t>(id)].right = r;
  return id;
}

void PointIndex::search(int node, const Vector<double>& x, double& best) const {
  if (node < 0) return;
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  const auto& p = points_[nd.point];
  best = std::min(best, norm(p - x));
  const double diff = x[nd.axis] - p[nd.axis];
  const int near = diff < 0 ? nd.left : nd.right;
  const int far = diff < 0 ? nd.right : nd.left;
  search(near, x, best);
  if (std::abs(diff) < best) search(far, x, best);
}

double PointIndex::nearest_distance(const Vector<double>& x) const {
  double best = std::numeric_limits<double>::infinity();
  search(root_, x, best);
  return best;
}

#define SUBDIFF_INSTANTIATE_GEOMETRY(T)                                                               \
  template struct ConvexPiece<T>;                                                                    \
  template bool angle_less(const Vector<T>&, const Vector<T>&);                                      \
  template T support_value(const ConvexPiece<T>&, const Vector<T>&);                                 \
  template ConvexPiece<T> argmax_face(const ConvexPiece<T>&, const Vector<T>&, double);              \
  template Polytope<T> canonicalize(const Polytope<T>&);                                             \
  template std::size_t affine_dimension(const Polytope<T>&);                                         \
  template std::vector<Halfspace<T>> halfspaces(const Polytope<T>&);                                 \
  template bool contains(const ConvexPiece<T>&, const Vector<T>&);                                   \
  template bool piece_subset(const ConvexPiece<T>&, const ConvexPiece<T>&);                          \
  template std::optional<ConvexPiece<T>> intersect(const ConvexPiece<T>&, const ConvexPiece<T>&);    \
  template Projection<T> project(const ConvexPiece<T>&, const Vector<T>&);                           \
  template std::vector<Vector<double>> discretize(const ConvexPiece<T>&, double);                    \
  template std::vector<Vector<double>> discretize(const FaceUnion<T>&, double);                      \
  template HausdorffResult hausdorff_cloud(const FaceUnion<T>&, const std::vector<Vector<double>>&, double); \
  template FaceUnion<T> normalize(const FaceUnion<T>&);                                              \
  template FaceUnion<T> closure(const FaceUnion<T>&);                                                \
  template bool faces_equal(const FaceUnion<T>&, const FaceUnion<T>&, double, double);               \
  template double union_hausdorff(const FaceUnion<T>&, const FaceUnion<T>&, double);

SUBDIFF_INSTANTIATE_GEOMETRY(double)
SUBDIFF_INSTANTIATE_GEOMETRY(Rational)

}  // namespace subdiff
