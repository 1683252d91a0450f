#pragma once

// Lower bounds for the error bound modulus: Er f(x) >= dist(0, L) where L is
// the outer limit of subdifferentials over points with f > f(x).

#include "subdiff/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subdiff {

template <class T>
struct LowerBound {
  /// Set for an empty union (infimum over the empty set).
  bool infinite = false;
  T distance_squared{0};
  double distance = 0.0;
  std::size_t attaining_piece = 0;
  Vector<T> attaining_point;
  /// Some open piece was projected through its closure.
  bool via_closure = false;
};

/// dist(0, U) as the minimum over pieces of the origin's projection.
template <class T>
LowerBound<T> lower_bound_from_outer(const FaceUnion<T>& u);

/// Smallest norm in a sampled cloud; nullopt for an empty cloud.
std::optional<double> lower_bound_from_cloud(const std::vector<Vector<double>>& cloud);

struct InequalityVerdict {
  /// The distance the estimate is compared with.
  std::optional<double> reference;
  /// "outer_limit" or "sampled_limsup".
  std::string reference_kind;
  bool satisfied = false;
};

/// Checks estimate >= reference - slack. For piecewise-affine data the outer
/// limit computed from directions is the full outer limit, so its distance is
/// the reference; otherwise it may be strictly smaller than the outer limit
/// and the reference is the distance to the union with the sampled cloud.
InequalityVerdict check_error_bound_inequality(std::optional<double> outer_distance,
                                               std::optional<double> cloud_distance, bool piecewise_affine,
                                               std::optional<double> estimate, double slack = 0.02);

}  // namespace subdiff
