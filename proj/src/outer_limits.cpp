#include "subdiff/outer_limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace subdiff {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class T>
double effective_tau(double tau) {
  return is_exact_v<T> ? 0.0 : tau;
}

template <class T>
struct DirectionEval {
  T dd{0};
  bool positive = false;
  std::vector<std::size_t> i_min;
  std::optional<ConvexPiece<T>> face;
  /// Every minimizing component is the same nondegenerate ball.
  bool moving_ball = false;
};

template <class T>
bool positive_value(const T& v, double tau) {
  if constexpr (is_exact_v<T>) {
    (void)tau;
    return v > 0;
  } else {
    return v > activity_band(v, tau);
  }
}

template <class T>
DirectionEval<T> evaluate_direction(const std::vector<std::size_t>& active, const std::vector<ConvexPiece<T>>& subs,
                                    const Vector<T>& p, double tau) {
  DirectionEval<T> out;
  std::vector<T> s;
  for (const auto& c : subs) s.push_back(support_value(c, p));
  out.dd = *std::min_element(s.begin(), s.end());
  out.positive = positive_value(out.dd, tau);
  const T band = activity_band(out.dd, tau);
  std::vector<std::size_t> local;
  for (std::size_t k = 0; k < s.size(); ++k)
    if (s[k] <= out.dd + band) {
      local.push_back(k);
      out.i_min.push_back(active[k]);
    }
  if (!out.positive) return out;
  const auto& first = subs[local.front()];
  out.moving_ball = first.is_ball() && first.as_ball().radius > 0 &&
                    std::all_of(local.begin(), local.end(), [&](std::size_t k) {
                      return subs[k].is_ball() && subs[k].as_ball().center == first.as_ball().center &&
                             subs[k].as_ball().radius == first.as_ball().radius;
                    });
  std::optional<ConvexPiece<T>> acc;
  for (auto k : local) {
    auto face = argmax_face(subs[k], p, tau);
    if (!acc) {
      acc = std::move(face);
    } else {
      acc = intersect(*acc, face);
      if (!acc) break;
    }
  }
  out.face = std::move(acc);
  return out;
}

template <class T>
bool same_face(const std::optional<ConvexPiece<T>>& a, const std::optional<ConvexPiece<T>>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return faces_equal(FaceUnion<T>{{*a}}, FaceUnion<T>{{*b}});
}

// Unit-free directions where a cos t + b sin t + c = 0.
std::vector<Vector<double>> trig_roots(double a, double b, double c) {
  std::vector<Vector<double>> out;
  const double r = std::hypot(a, b);
  if (r == 0.0 || std::abs(c) > r) return out;
  const double base = std::atan2(b, a);
  const double delta = std::acos(std::clamp(-c / r, -1.0, 1.0));
  for (double t : {base + delta, base - delta}) out.push_back(Vector<double>{std::cos(t), std::sin(t)});
  return out;
}

double angle_0_2pi(const Vector<double>& v) {
  double t = std::atan2(v[1], v[0]);
  if (t < 0) t += kTwoPi;
  return t;
}

template <class T>
std::vector<Vector<T>> planar_breakpoints(const std::vector<ConvexPiece<T>>& subs) {
  std::vector<Vector<T>> raw{Vector<T>{T(1), T(0)}, Vector<T>{T(0), T(1)}, Vector<T>{T(-1), T(0)},
                             Vector<T>{T(0), T(-1)}};
  std::vector<Vector<T>> pts;
  for (const auto& c : subs) {
    if (c.is_polytope()) {
      for (const auto& v : c.as_polytope().vertices) pts.push_back(v);
    } else {
      pts.push_back(c.as_ball().center);
    }
  }
  auto add_normal = [&](const Vector<T>& v) {
    if (v.is_zero()) return;
    raw.push_back(rot90(v));
    raw.push_back(-rot90(v));
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    add_normal(pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) add_normal(pts[i] - pts[j]);
  }
  if constexpr (!is_exact_v<T>) {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!subs[i].is_ball() || subs[i].as_ball().radius == 0) continue;
      const auto& bi = subs[i].as_ball();
      for (const auto& r : trig_roots(bi.center[0], bi.center[1], bi.radius)) raw.push_back(r);
      for (std::size_t j = 0; j < subs.size(); ++j) {
        if (j == i) continue;
        if (subs[j].is_ball()) {
          const auto& bj = subs[j].as_ball();
          const Vector<double> d = bi.center - bj.center;
          for (const auto& r : trig_roots(d[0], d[1], bi.radius - bj.radius)) raw.push_back(r);
        } else {
          for (const auto& v : subs[j].as_polytope().vertices) {
            const Vector<double> d = bi.center - v;
            for (const auto& r : trig_roots(d[0], d[1], bi.radius)) raw.push_back(r);
          }
        }
      }
    }
  }
  std::vector<Vector<T>> out;
  if constexpr (is_exact_v<T>) {
    std::sort(raw.begin(), raw.end(), [](const Vector<T>& a, const Vector<T>& b) { return angle_less(a, b); });
    for (auto& v : raw)
      if (out.empty() || !(cross2(out.back(), v) == 0 && dot(out.back(), v) > 0)) out.push_back(std::move(v));
  } else {
    for (auto& v : raw) v *= 1.0 / norm(v);
    std::sort(raw.begin(), raw.end(),
              [](const Vector<T>& a, const Vector<T>& b) { return angle_0_2pi(a) < angle_0_2pi(b); });
    for (auto& v : raw)
      if (out.empty() || angle_0_2pi(v) - angle_0_2pi(out.back()) > 1e-12) out.push_back(std::move(v));
    if (out.size() > 1 && angle_0_2pi(out.front()) + kTwoPi - angle_0_2pi(out.back()) <= 1e-12) out.pop_back();
  }
  return out;
}

template <class T>
Vector<T> blend(const Vector<T>& a, const Vector<T>& b, const T& w) {
  if constexpr (is_exact_v<T>) {
    return a * w + b * (T(1) - w);
  } else {
    // Interpolate the angle so interior points are spread along the arc.
    const double ta = std::atan2(a[1], a[0]);
    double tb = std::atan2(b[1], b[0]);
    while (tb <= ta) tb += kTwoPi;
    const double t = w * ta + (1.0 - w) * tb;
    return Vector<double>{std::cos(t), std::sin(t)};
  }
}

}  // namespace

template <class T>
OuterLimit<T> outer_limit_exact(const MinMaxFunction<T>& f, const Vector<T>& xbar, bool with_closure, double tau) {
  f.validate();
  if (f.dim != 1 && f.dim != 2)
    throw UnsupportedDimension("exact sweep needs dimension 1 or 2 (got " + std::to_string(f.dim) +
                               "); use the sampled mode");
  if (xbar.size() != f.dim) throw DimensionMismatch(f.dim, xbar.size());
  const double t = effective_tau<T>(tau);
  const auto active = active_components(f, xbar, t);
  std::vector<ConvexPiece<T>> subs;
  for (auto i : active) subs.push_back(component_subdifferential(f.components[i], xbar, t));

  OuterLimit<T> out;
  auto record = [&](DirectionCell<T> cell) {
    if (cell.face) out.set.pieces.push_back(*cell.face);
    out.cells.push_back(std::move(cell));
  };
  auto point_cell = [&](const Vector<T>& p) {
    const auto e = evaluate_direction(active, subs, p, t);
    DirectionCell<T> cell;
    cell.direction = p;
    cell.theta_begin = cell.theta_end = f.dim == 1 ? (p[0] > 0 ? 0.0 : std::numbers::pi) : polar_angle(p);
    cell.i_min = e.i_min;
    cell.dd_positive = e.positive;
    cell.face = e.face;
    return cell;
  };

  if (f.dim == 1) {
    record(point_cell(Vector<T>{T(1)}));
    record(point_cell(Vector<T>{T(-1)}));
  } else {
    const auto bps = planar_breakpoints(subs);
    for (std::size_t k = 0; k < bps.size(); ++k) {
      const Vector<T>& a = bps[k];
      const Vector<T>& b = bps[(k + 1) % bps.size()];
      record(point_cell(a));

      DirectionCell<T> cell;
      cell.open_interval = true;
      cell.direction = blend(a, b, T(1) / T(2));
      if constexpr (!is_exact_v<T>) cell.direction *= 1.0 / norm(cell.direction);
      cell.theta_begin = polar_angle(a);
      cell.theta_end = polar_angle(b);
      while (cell.theta_end <= cell.theta_begin) cell.theta_end += kTwoPi;
      const auto e = evaluate_direction(active, subs, cell.direction, t);
      cell.i_min = e.i_min;
      cell.dd_positive = e.positive;
      if (e.positive && e.moving_ball) {
        if constexpr (!is_exact_v<T>) {
          const auto& ball = subs[static_cast<std::size_t>(
                                       std::find(active.begin(), active.end(), e.i_min.front()) - active.begin())]
                                 .as_ball();
          Arc arc{ball.center, ball.radius, cell.theta_begin, cell.theta_end};
          ConvexPiece<T> piece{arc, false, {arc.point_at(arc.theta_begin), arc.point_at(arc.theta_end)}};
          cell.face = std::move(piece);
        }
      } else {
        cell.face = e.face;
      }
      for (const T& w : {T(1) / T(4), T(1) / T(2), T(3) / T(4)}) {
        const auto probe = evaluate_direction(active, subs, blend(a, b, w), t);
        if (probe.i_min != e.i_min || probe.positive != e.positive) cell.stable = false;
        if (!e.moving_ball && !same_face(probe.face, e.face)) cell.stable = false;
      }
      record(std::move(cell));
    }
  }
  out.set = normalize(out.set);
  if (with_closure) {
    out.set = closure(out.set);
    out.closure_applied = true;
  }
  return out;
}

std::vector<Vector<double>> sample_directions(std::size_t dim, std::size_t count, std::uint64_t seed) {
  std::vector<Vector<double>> out;
  if (dim == 1) return {Vector<double>{1.0}, Vector<double>{-1.0}};
  std::mt19937_64 rng(seed);
  if (dim == 2) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 0; k < count; ++k) {
      const double t = kTwoPi * (static_cast<double>(k) + u(rng)) / static_cast<double>(count);
      out.push_back(Vector<double>{std::cos(t), std::sin(t)});
    }
    return out;
  }
  std::normal_distribution<double> g(0.0, 1.0);
  while (out.size() < count) {
    Vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = g(rng);
    const double len = norm(v);
    if (len < 1e-12) continue;
    out.push_back(v * (1.0 / len));
  }
  return out;
}

SampledOuterLimit outer_limit_sampled(const MinMaxFunction<double>& f, const Vector<double>& xbar, std::size_t n_dirs,
                                      std::uint64_t seed, double resolution, double tau) {
  f.validate();
  if (n_dirs == 0) throw std::invalid_argument("outer_limit_sampled: need at least one direction");
  const auto active = active_components(f, xbar, tau);
  std::vector<ConvexPiece<double>> subs;
  for (auto i : active) subs.push_back(component_subdifferential(f.components[i], xbar, tau));

  SampledOuterLimit out;
  out.seed = seed;
  std::vector<ConvexPiece<double>> faces;
  auto take = [&](const Vector<double>& p) {
    DirectionEval<double> e;
    try {
      e = evaluate_direction(active, subs, p, tau);
    } catch (const UnsupportedPair&) {
      ++out.skipped_unsupported;
      return;
    }
    if (!e.positive) return;
    ++out.positive_directions;
    if (!e.face) return;
    if (e.face->is_point()) {
      out.cloud.push_back(e.face->as_polytope().vertices.front());
      return;
    }
    const bool seen = std::any_of(faces.begin(), faces.end(),
                                  [&](const ConvexPiece<double>& q) { return same_face<double>(q, e.face); });
    if (!seen) faces.push_back(*e.face);
  };
  const auto dirs = sample_directions(f.dim, n_dirs, seed);
  for (const auto& p : dirs) {
    ++out.directions;
    take(p);
  }
  if (f.dim == 2 && dirs.size() > 1) {
    // Faces that are not points are exposed only on a null set of directions;
    // bisect between neighbours whose zero-tolerance structure differs and
    // evaluate the tolerant face at the located transition.
    auto signature = [&](double t) {
      std::vector<double> key;
      const Vector<double> p{std::cos(t), std::sin(t)};
      std::vector<double> s;
      for (const auto& c : subs) s.push_back(support_value(c, p));
      const double m = *std::min_element(s.begin(), s.end());
      key.push_back(m > 0 ? 1.0 : 0.0);
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] != m) continue;
        key.push_back(static_cast<double>(k));
        if (!subs[k].is_polytope()) continue;
        const auto face = argmax_face(subs[k], p, 0.0);
        for (const auto& v : face.as_polytope().vertices) key.insert(key.end(), v.begin(), v.end());
      }
      return key;
    };
    std::vector<double> angles;
    for (const auto& p : dirs) angles.push_back(std::atan2(p[1], p[0]));
    std::sort(angles.begin(), angles.end());
    for (std::size_t k = 0; k < angles.size(); ++k) {
      double a = angles[k];
      double b = k + 1 < angles.size() ? angles[k + 1] : angles.front() + kTwoPi;
      auto sa = signature(a);
      if (sa == signature(b)) continue;
      for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
        const double m = 0.5 * (a + b);
        auto sm = signature(m);
        if (sm == sa) a = m;
        else b = m;
      }
      const double t = 0.5 * (a + b);
      take(Vector<double>{std::cos(t), std::sin(t)});
    }
  }
  for (const auto& c : faces) {
    auto pts = discretize(c, resolution);
    out.cloud.insert(out.cloud.end(), pts.begin(), pts.end());
  }
  return out;
}

template <class T>
IndexFamily<T> enumerate_D(const std::vector<Vector<T>>& gradients, std::size_t cap, const Tolerances& tol) {
  const std::size_t m = gradients.size();
  if (m > cap)
    throw EnumerationCap("|J| = " + std::to_string(m) + " exceeds the enumeration cap of " + std::to_string(cap) +
                         "; use the sampled mode");
  IndexFamily<T> out;
  if (m == 0) return out;
  for (std::size_t i = 1; i < m; ++i)
    if (gradients[i].size() != gradients[0].size()) throw DimensionMismatch(gradients[0].size(), gradients[i].size());
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    lp::StrictSystem<T> sys;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask & (std::uint64_t{1} << j)) {
        sys.equalities.push_back(gradients[j]);
        idx.push_back(j);
      } else {
        sys.strict.push_back(gradients[j]);
      }
    }
    auto res = lp::strict_feasible(sys, tol);
    if (res.feasible) out.subsets.push_back({std::move(idx), std::move(res.certificate)});
  }
  std::sort(out.subsets.begin(), out.subsets.end(), [](const IndexSubset<T>& a, const IndexSubset<T>& b) {
    if (a.indices.size() != b.indices.size()) return a.indices.size() < b.indices.size();
    return a.indices < b.indices;
  });
  return out;
}

template <class T>
FaceUnion<T> d_union(const std::vector<Vector<T>>& gradients, const IndexFamily<T>& family) {
  FaceUnion<T> u;
  for (const auto& s : family.subsets) {
    std::vector<Vector<T>> vs;
    for (auto j : s.indices) vs.push_back(gradients.at(j));
    u.pieces.push_back(ConvexPiece<T>::polytope(std::move(vs)));
  }
  return normalize(u);
}

template <class T>
IdentityCheck<T> check_identity_affine(const std::vector<Vector<T>>& gradients) {
  if (gradients.empty()) throw std::invalid_argument("check_identity_affine: no gradients");
  MinMaxFunction<T> f;
  f.dim = gradients.front().size();
  Component<T> c;
  c.kind = ComponentKind::MaxAffine;
  for (const auto& g : gradients) c.pieces.push_back(AffinePiece<T>{g, T(0)});
  f.components.push_back(std::move(c));
  IdentityCheck<T> out;
  out.d_side = d_union(gradients, enumerate_D(gradients));
  out.sweep_side = outer_limit_exact(f, Vector<T>(f.dim), false).set;
  out.equal = faces_equal(out.d_side, out.sweep_side);
  out.discrepancy = union_hausdorff(out.d_side, out.sweep_side);
  return out;
}

template <class T>
std::vector<Vector<T>> basepoint_gradients(const MinMaxFunction<T>& f, const Vector<T>& xbar, double tau) {
  f.validate();
  if (f.components.size() != 1) throw ModelError("D enumeration needs a single max component");
  const auto& c = f.components.front();
  if (c.kind == ComponentKind::BallSupport) throw ModelError("D enumeration needs finitely many gradients");
  std::vector<Vector<T>> out;
  for (auto j : active_pieces(c, xbar, effective_tau<T>(tau))) out.push_back(piece_gradient(c.pieces[j], xbar));
  return out;
}

#define SUBDIFF_INSTANTIATE_OUTER(T)                                                                    \
  template OuterLimit<T> outer_limit_exact(const MinMaxFunction<T>&, const Vector<T>&, bool, double); \
  template IndexFamily<T> enumerate_D(const std::vector<Vector<T>>&, std::size_t, const Tolerances&);  \
  template FaceUnion<T> d_union(const std::vector<Vector<T>>&, const IndexFamily<T>&);                 \
  template IdentityCheck<T> check_identity_affine(const std::vector<Vector<T>>&);                      \
  template std::vector<Vector<T>> basepoint_gradients(const MinMaxFunction<T>&, const Vector<T>&, double);

SUBDIFF_INSTANTIATE_OUTER(double)
SUBDIFF_INSTANTIATE_OUTER(Rational)

}  // namespace subdiff
