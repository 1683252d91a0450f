#include "subdiff/error_bound.hpp"

#include <algorithm>
#include <limits>

namespace subdiff {

template <class T>
LowerBound<T> lower_bound_from_outer(const FaceUnion<T>& u) {
  LowerBound<T> out;
  if (u.empty()) {
    out.infinite = true;
    out.distance = std::numeric_limits<double>::infinity();
    return out;
  }
  const Vector<T> origin(u.pieces.front().dimension());
  bool first = true;
  for (std::size_t k = 0; k < u.pieces.size(); ++k) {
    const auto proj = project(u.pieces[k], origin);
    if (first || proj.distance_squared < out.distance_squared) {
      out.distance_squared = proj.distance_squared;
      out.distance = proj.distance;
      out.attaining_piece = k;
      out.attaining_point = proj.point;
      out.via_closure = proj.via_closure;
      first = false;
    }
  }
  return out;
}

std::optional<double> lower_bound_from_cloud(const std::vector<Vector<double>>& cloud) {
  std::optional<double> best;
  for (const auto& v : cloud) {
    const double n = norm(v);
    if (!best || n < *best) best = n;
  }
  return best;
}

InequalityVerdict check_error_bound_inequality(std::optional<double> outer_distance,
                                               std::optional<double> cloud_distance, bool piecewise_affine,
                                               std::optional<double> estimate, double slack) {
  InequalityVerdict v;
  if (piecewise_affine || !cloud_distance) {
    v.reference = outer_distance;
    v.reference_kind = "outer_limit";
  } else {
    v.reference = outer_distance ? std::min(*outer_distance, *cloud_distance) : *cloud_distance;
    v.reference_kind = "sampled_limsup";
  }
  v.satisfied = estimate && v.reference && *estimate >= *v.reference - slack;
  return v;
}

template LowerBound<double> lower_bound_from_outer(const FaceUnion<double>&);
template LowerBound<Rational> lower_bound_from_outer(const FaceUnion<Rational>&);

}  // namespace subdiff
