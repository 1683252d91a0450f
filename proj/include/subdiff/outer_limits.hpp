#pragma once

// Outer-limit sets of Frechet subdifferentials built from directional data
// at a basepoint: the union over directions p with f'(x; p) > 0 of the
// intersected exposed faces, the index family D(x) of consistent gradient
// subsets, and the union of their convex hulls.

#include "subdiff/function_model.hpp"
#include "subdiff/geometry.hpp"
#include "subdiff/lp.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace subdiff {

class UnsupportedDimension : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EnumerationCap : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One direction or open angular interval of the sweep. For a single
/// direction theta_begin == theta_end.
template <class T>
struct DirectionCell {
  Vector<T> direction;
  double theta_begin = 0.0;
  double theta_end = 0.0;
  bool open_interval = false;
  std::vector<std::size_t> i_min;
  bool dd_positive = false;
  /// Intersected exposed face; empty when the intersection is empty or
  /// f'(x; p) <= 0. Open intervals of a single moving ball point carry an arc.
  std::optional<ConvexPiece<T>> face;
  /// Interior re-samples reproduced I_min and the face.
  bool stable = true;
};

template <class T>
struct OuterLimit {
  FaceUnion<T> set;
  std::vector<DirectionCell<T>> cells;
  bool closure_applied = false;
};

/// Exact direction sweep for dimension 1 or 2. Breakpoints are every
/// direction orthogonal to a vertex or to a difference of two vertices/ball
/// centers, plus ball tie and zero angles; between consecutive breakpoints the
/// exposed faces of polytope subdifferentials are constant.
template <class T>
OuterLimit<T> outer_limit_exact(const MinMaxFunction<T>& f, const Vector<T>& xbar, bool with_closure,
                                double tau = 1e-9);

struct SampledOuterLimit {
  std::vector<Vector<double>> cloud;
  std::size_t directions = 0;
  std::size_t positive_directions = 0;
  std::size_t skipped_unsupported = 0;
  std::uint64_t seed = 0;
};

/// Sampled version of the same union for any dimension: distinct faces found
/// along quasi-uniform directions are discretized at `resolution`.
SampledOuterLimit outer_limit_sampled(const MinMaxFunction<double>& f, const Vector<double>& xbar,
                                      std::size_t n_dirs, std::uint64_t seed, double resolution = 1e-2,
                                      double tau = 1e-9);

/// Unit directions used by the samplers: stratified angles in the plane, +-1
/// on the line, normalized Gaussians otherwise.
std::vector<Vector<double>> sample_directions(std::size_t dim, std::size_t count, std::uint64_t seed);

template <class T>
struct IndexSubset {
  /// Zero-based gradient indices, increasing.
  std::vector<std::size_t> indices;
  Vector<T> certificate;
};

template <class T>
struct IndexFamily {
  std::vector<IndexSubset<T>> subsets;
};

/// Every nonempty D for which <g_j, d> = 1 (j in D), <g_j, d> < 1 (j not in D)
/// is consistent, ordered by size then lexicographically.
template <class T>
IndexFamily<T> enumerate_D(const std::vector<Vector<T>>& gradients, std::size_t cap = 20,
                           const Tolerances& tol = {});

/// Union over D of conv{g_j : j in D}, normalized.
template <class T>
FaceUnion<T> d_union(const std::vector<Vector<T>>& gradients, const IndexFamily<T>& family);

template <class T>
struct IdentityCheck {
  bool equal = false;
  double discrepancy = 0.0;
  FaceUnion<T> d_side;
  FaceUnion<T> sweep_side;
};

/// Compares the D-based union with the direction sweep of max_j <g_j, x> at 0.
template <class T>
IdentityCheck<T> check_identity_affine(const std::vector<Vector<T>>& gradients);

/// Gradients at x of the active pieces of a single-component function, the
/// input of enumerate_D.
template <class T>
std::vector<Vector<T>> basepoint_gradients(const MinMaxFunction<T>& f, const Vector<T>& xbar, double tau = 1e-9);

}  // namespace subdiff
