#pragma once

// f = min_i max_j g_ij with affine, quadratic or ball-support pieces: values,
// gradients, active index sets, component subdifferentials, directional
// derivatives and Frechet subdifferentials.

#include "subdiff/geometry.hpp"
#include "subdiff/linalg.hpp"
#include "subdiff/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace subdiff {

template <class T>
struct AffinePiece {
  Vector<T> a;
  T b{0};
};

/// x^T Q x + <a, x> + b with Q symmetric.
template <class T>
struct QuadraticPiece {
  linalg::Matrix<T> q;
  Vector<T> a;
  T b{0};
};

/// <c, x> + r ||x||, the support function of Ball(c, r).
template <class T>
struct BallSupportPiece {
  Vector<T> center;
  T radius{0};
};

template <class T>
using Piece = std::variant<AffinePiece<T>, QuadraticPiece<T>, BallSupportPiece<T>>;

enum class ComponentKind { MaxAffine, MaxQuadratic, BallSupport };

template <class T>
struct Component {
  ComponentKind kind = ComponentKind::MaxAffine;
  std::vector<Piece<T>> pieces;
};

class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct MinMaxFunction {
  std::size_t dim = 0;
  std::vector<Component<T>> components;

  /// Throws ModelError on empty components, dimension mismatches, asymmetric
  /// Q, negative radii, or a ball-support piece sharing its component.
  void validate() const;
  bool piecewise_affine() const;
  bool has_ball_support() const;
};

template <class T>
T piece_value(const Piece<T>& g, const Vector<T>& x);

/// Gradient of a piece; for ball support at x = 0 this is undefined and throws.
template <class T>
Vector<T> piece_gradient(const Piece<T>& g, const Vector<T>& x);

template <class T>
T component_value(const Component<T>& c, const Vector<T>& x);

template <class T>
T evaluate(const MinMaxFunction<T>& f, const Vector<T>& x);

/// Indices of pieces within `tau` (relative band) of the component maximum.
template <class T>
std::vector<std::size_t> active_pieces(const Component<T>& c, const Vector<T>& x, double tau = 0.0);

/// I(x) = { i : f_i(x) <= f(x) + band }. tau = infinity selects every index.
template <class T>
std::vector<std::size_t> active_components(const MinMaxFunction<T>& f, const Vector<T>& x, double tau = 0.0);

/// Subdifferential of one component: hull of active gradients, or the whole
/// ball for a ball-support component at its kink x = 0.
template <class T>
ConvexPiece<T> component_subdifferential(const Component<T>& c, const Vector<T>& x, double tau = 0.0);

/// f'(x; p) = min over I(x) of the support value of the component subdifferential.
template <class T>
T directional_derivative(const MinMaxFunction<T>& f, const Vector<T>& x, const Vector<T>& p, double tau = 0.0);

/// I(x, p): active components attaining the minimum in directional_derivative.
template <class T>
std::vector<std::size_t> min_active_set(const MinMaxFunction<T>& f, const Vector<T>& x, const Vector<T>& p,
                                        double tau = 0.0);

/// Intersection of the active component subdifferentials; nullopt when empty.
template <class T>
std::optional<ConvexPiece<T>> frechet_subdifferential(const MinMaxFunction<T>& f, const Vector<T>& x,
                                                      double tau = 0.0);

/// Float copy of a function.
MinMaxFunction<double> to_double(const MinMaxFunction<Rational>& f);
inline const MinMaxFunction<double>& to_double(const MinMaxFunction<double>& f) { return f; }

}  // namespace subdiff
