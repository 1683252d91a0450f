#include "subdiff/function_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace subdiff {

namespace {

template <class T>
Vector<T> mat_vec(const linalg::Matrix<T>& q, const Vector<T>& x) {
  Vector<T> out(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    T s(0);
    for (std::size_t j = 0; j < x.size(); ++j) s += q[i][j] * x[j];
    out[i] = s;
  }
  return out;
}

template <class T>
std::size_t piece_dim(const Piece<T>& g) {
  return std::visit(
      [](const auto& p) -> std::size_t {
        if constexpr (requires { p.center; }) {
          return p.center.size();
        } else {
          return p.a.size();
        }
      },
      g);
}

}  // namespace

template <class T>
void MinMaxFunction<T>::validate() const {
  if (dim == 0) throw ModelError("dimension must be positive");
  if (components.empty()) throw ModelError("at least one component is required");
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    const std::string where = "component " + std::to_string(i);
    if (c.pieces.empty()) throw ModelError(where + ": no pieces");
    for (const auto& g : c.pieces) {
      if (piece_dim(g) != dim)
        throw ModelError(where + ": piece dimension " + std::to_string(piece_dim(g)) + " != " + std::to_string(dim));
      if (const auto* q = std::get_if<QuadraticPiece<T>>(&g)) {
        if (q->q.size() != dim) throw ModelError(where + ": Q must be " + std::to_string(dim) + "x" + std::to_string(dim));
        for (std::size_t r = 0; r < dim; ++r) {
          if (q->q[r].size() != dim) throw ModelError(where + ": Q row length mismatch");
          for (std::size_t s = 0; s < r; ++s)
            if (q->q[r][s] != q->q[s][r]) throw ModelError(where + ": Q is not symmetric");
        }
      }
      if (const auto* b = std::get_if<BallSupportPiece<T>>(&g)) {
        if (b->radius < 0) throw ModelError(where + ": negative radius");
        if (c.pieces.size() != 1) throw ModelError(where + ": a ball-support piece must be alone in its component");
      }
    }
  }
}

template <class T>
bool MinMaxFunction<T>::piecewise_affine() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Component<T>& c) { return c.kind == ComponentKind::MaxAffine; });
}

template <class T>
bool MinMaxFunction<T>::has_ball_support() const {
  return std::any_of(components.begin(), components.end(),
                     [](const Component<T>& c) { return c.kind == ComponentKind::BallSupport; });
}

template <class T>
T piece_value(const Piece<T>& g, const Vector<T>& x) {
  if (const auto* a = std::get_if<AffinePiece<T>>(&g)) return dot(a->a, x) + a->b;
  if (const auto* q = std::get_if<QuadraticPiece<T>>(&g)) return dot(x, mat_vec(q->q, x)) + dot(q->a, x) + q->b;
  const auto& b = std::get<BallSupportPiece<T>>(g);
  if (x.is_zero() || b.radius == 0) return dot(b.center, x);
  return dot(b.center, x) + b.radius * ScalarTraits<T>::sqrt(norm_squared(x));
}

template <class T>
Vector<T> piece_gradient(const Piece<T>& g, const Vector<T>& x) {
  if (const auto* a = std::get_if<AffinePiece<T>>(&g)) {
    if (a->a.size() != x.size()) throw DimensionMismatch(a->a.size(), x.size());
    return a->a;
  }
  if (const auto* q = std::get_if<QuadraticPiece<T>>(&g)) return mat_vec(q->q, x) * T(2) + q->a;
  const auto& b = std::get<BallSupportPiece<T>>(g);
  if (b.radius == 0) return b.center;
  if (x.is_zero()) throw std::domain_error("ball-support piece is not differentiable at 0");
  return b.center + x * T(b.radius / ScalarTraits<T>::sqrt(norm_squared(x)));
}

template <class T>
T component_value(const Component<T>& c, const Vector<T>& x) {
  T best = piece_value(c.pieces.front(), x);
  for (std::size_t j = 1; j < c.pieces.size(); ++j) best = std::max(best, piece_value(c.pieces[j], x));
  return best;
}

template <class T>
T evaluate(const MinMaxFunction<T>& f, const Vector<T>& x) {
  if (x.size() != f.dim) throw DimensionMismatch(f.dim, x.size());
  T best = component_value(f.components.front(), x);
  for (std::size_t i = 1; i < f.components.size(); ++i) best = std::min(best, component_value(f.components[i], x));
  return best;
}

template <class T>
std::vector<std::size_t> active_pieces(const Component<T>& c, const Vector<T>& x, double tau) {
  std::vector<T> vals;
  for (const auto& g : c.pieces) vals.push_back(piece_value(g, x));
  const T top = *std::max_element(vals.begin(), vals.end());
  const T band = activity_band(top, tau);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < vals.size(); ++j)
    if (vals[j] >= top - band) out.push_back(j);
  return out;
}

template <class T>
std::vector<std::size_t> active_components(const MinMaxFunction<T>& f, const Vector<T>& x, double tau) {
  std::vector<std::size_t> out;
  if (std::isinf(tau)) {
    for (std::size_t i = 0; i < f.components.size(); ++i) out.push_back(i);
    return out;
  }
  std::vector<T> vals;
  for (const auto& c : f.components) vals.push_back(component_value(c, x));
  const T low = *std::min_element(vals.begin(), vals.end());
  const T band = activity_band(low, tau);
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] <= low + band) out.push_back(i);
  return out;
}

template <class T>
ConvexPiece<T> component_subdifferential(const Component<T>& c, const Vector<T>& x, double tau) {
  if (c.kind == ComponentKind::BallSupport) {
    const auto& b = std::get<BallSupportPiece<T>>(c.pieces.front());
    if (x.is_zero()) return ConvexPiece<T>::ball(b.center, b.radius);
    return ConvexPiece<T>::point(piece_gradient(c.pieces.front(), x));
  }
  std::vector<Vector<T>> grads;
  for (auto j : active_pieces(c, x, tau)) grads.push_back(piece_gradient(c.pieces[j], x));
  return ConvexPiece<T>{canonicalize(Polytope<T>{std::move(grads)}), true, {}};
}

template <class T>
T directional_derivative(const MinMaxFunction<T>& f, const Vector<T>& x, const Vector<T>& p, double tau) {
  if (p.size() != f.dim) throw DimensionMismatch(f.dim, p.size());
  std::optional<T> best;
  for (auto i : active_components(f, x, tau)) {
    const T s = support_value(component_subdifferential(f.components[i], x, tau), p);
    if (!best || s < *best) best = s;
  }
  return *best;
}

template <class T>
std::vector<std::size_t> min_active_set(const MinMaxFunction<T>& f, const Vector<T>& x, const Vector<T>& p,
                                        double tau) {
  const auto active = active_components(f, x, tau);
  std::vector<T> s;
  for (auto i : active) s.push_back(support_value(component_subdifferential(f.components[i], x, tau), p));
  const T low = *std::min_element(s.begin(), s.end());
  const T band = activity_band(low, tau);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < active.size(); ++k)
    if (s[k] <= low + band) out.push_back(active[k]);
  return out;
}

template <class T>
std::optional<ConvexPiece<T>> frechet_subdifferential(const MinMaxFunction<T>& f, const Vector<T>& x, double tau) {
  std::optional<ConvexPiece<T>> acc;
  for (auto i : active_components(f, x, tau)) {
    auto d = component_subdifferential(f.components[i], x, tau);
    if (!acc) {
      acc = std::move(d);
      continue;
    }
    acc = intersect(*acc, d);
    if (!acc) return std::nullopt;
  }
  return acc;
}

MinMaxFunction<double> to_double(const MinMaxFunction<Rational>& f) {
  MinMaxFunction<double> out;
  out.dim = f.dim;
  for (const auto& c : f.components) {
    Component<double> d;
    d.kind = c.kind;
    for (const auto& g : c.pieces) {
      if (const auto* a = std::get_if<AffinePiece<Rational>>(&g)) {
        d.pieces.push_back(AffinePiece<double>{to_double(a->a), to_double(a->b)});
      } else if (const auto* q = std::get_if<QuadraticPiece<Rational>>(&g)) {
        linalg::Matrix<double> m;
        for (const auto& row : q->q) {
          std::vector<double> r;
          for (const auto& v : row) r.push_back(to_double(v));
          m.push_back(std::move(r));
        }
        d.pieces.push_back(QuadraticPiece<double>{std::move(m), to_double(q->a), to_double(q->b)});
      } else {
        const auto& b = std::get<BallSupportPiece<Rational>>(g);
        d.pieces.push_back(BallSupportPiece<double>{to_double(b.center), to_double(b.radius)});
      }
    }
    out.components.push_back(std::move(d));
  }
  return out;
}

#define SUBDIFF_INSTANTIATE_MODEL(T)                                                                      \
  template struct MinMaxFunction<T>;                                                                     \
  template T piece_value(const Piece<T>&, const Vector<T>&);                                             \
  template Vector<T> piece_gradient(const Piece<T>&, const Vector<T>&);                                  \
  template T component_value(const Component<T>&, const Vector<T>&);                                     \
  template T evaluate(const MinMaxFunction<T>&, const Vector<T>&);                                       \
  template std::vector<std::size_t> active_pieces(const Component<T>&, const Vector<T>&, double);        \
  template std::vector<std::size_t> active_components(const MinMaxFunction<T>&, const Vector<T>&, double); \
  template ConvexPiece<T> component_subdifferential(const Component<T>&, const Vector<T>&, double);       \
  template T directional_derivative(const MinMaxFunction<T>&, const Vector<T>&, const Vector<T>&, double); \
  template std::vector<std::size_t> min_active_set(const MinMaxFunction<T>&, const Vector<T>&,           \
                                                   const Vector<T>&, double);                            \
  template std::optional<ConvexPiece<T>> frechet_subdifferential(const MinMaxFunction<T>&, const Vector<T>&, double);

SUBDIFF_INSTANTIATE_MODEL(double)
SUBDIFF_INSTANTIATE_MODEL(Rational)

}  // namespace subdiff
