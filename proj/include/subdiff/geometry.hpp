#pragma once

// Convex geometry kernel: polytopes in V-representation, Euclidean balls and
// planar boundary arcs of balls, with support functions, exposed faces,
// intersections, projections and Hausdorff distances to point clouds.
//
// Values are immutable once built; all operations are free functions.

#include "subdiff/scalar.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace subdiff {

template <class T>
struct Polytope {
  std::vector<Vector<T>> vertices;

  std::size_t dimension() const { return vertices.empty() ? 0 : vertices.front().size(); }
  bool is_point() const { return vertices.size() == 1; }
};

template <class T>
struct Ball {
  Vector<T> center;
  T radius{0};

  std::size_t dimension() const { return center.size(); }
};

/// Planar boundary arc { c + r (cos t, sin t) : t in [theta_begin, theta_end] }
/// of a disk, with theta_begin <= theta_end <= theta_begin + 2 pi. Arcs carry the
/// moving exposed point of a disk when the exposing direction sweeps an interval.
struct Arc {
  Vector<double> center;
  double radius = 0.0;
  double theta_begin = 0.0;
  double theta_end = 0.0;

  std::size_t dimension() const { return center.size(); }
  Vector<double> point_at(double theta) const;
  bool full_circle() const;
};

/// One piece of a FaceUnion. A relatively open piece is stored as its closed
/// shape plus the boundary points it excludes; closure drops that list.
template <class T>
struct ConvexPiece {
  std::variant<Polytope<T>, Ball<T>, Arc> shape;
  bool closed = true;
  std::vector<Vector<double>> excluded;

  static ConvexPiece point(Vector<T> v) { return ConvexPiece{Polytope<T>{{std::move(v)}}, true, {}}; }
  static ConvexPiece polytope(std::vector<Vector<T>> vs) { return ConvexPiece{Polytope<T>{std::move(vs)}, true, {}}; }
  static ConvexPiece ball(Vector<T> c, T r) { return ConvexPiece{Ball<T>{std::move(c), std::move(r)}, true, {}}; }

  bool is_polytope() const { return std::holds_alternative<Polytope<T>>(shape); }
  bool is_ball() const { return std::holds_alternative<Ball<T>>(shape); }
  bool is_arc() const { return std::holds_alternative<Arc>(shape); }
  const Polytope<T>& as_polytope() const { return std::get<Polytope<T>>(shape); }
  const Ball<T>& as_ball() const { return std::get<Ball<T>>(shape); }
  const Arc& as_arc() const { return std::get<Arc>(shape); }
  bool is_point() const { return is_polytope() && as_polytope().is_point(); }
  std::size_t dimension() const;
};

template <class T>
struct FaceUnion {
  std::vector<ConvexPiece<T>> pieces;

  bool empty() const { return pieces.empty(); }
};

class UnsupportedPair : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Halfspace <normal, x> <= offset.
template <class T>
struct Halfspace {
  Vector<T> normal;
  T offset{0};
};

template <class T>
struct Projection {
  Vector<T> point;
  T distance_squared{0};
  double distance = 0.0;
  /// Set when an open piece was projected through its closure.
  bool via_closure = false;
};

struct DirectedHausdorff {
  double union_to_cloud = 0.0;
  double cloud_to_union = 0.0;
};

struct EmptySet {};

using HausdorffResult = std::variant<DirectedHausdorff, EmptySet>;

/// max over v in C of <v, p>.
template <class T>
T support_value(const ConvexPiece<T>& c, const Vector<T>& p);

/// Exposed face Argmax_{v in C} <v, p>. p = 0 returns C itself. In float
/// mode a polytope vertex counts as maximizing when it is within
/// tau * max(1, |support value|) of the maximum.
template <class T>
ConvexPiece<T> argmax_face(const ConvexPiece<T>& c, const Vector<T>& p, double tau = 1e-9);

/// Extreme points only, no duplicates, lexicographically sorted.
template <class T>
Polytope<T> canonicalize(const Polytope<T>& p);

/// Affine dimension of the polytope (0 for a point).
template <class T>
std::size_t affine_dimension(const Polytope<T>& p);

/// H-representation: equalities of the affine hull appear as opposite pairs.
template <class T>
std::vector<Halfspace<T>> halfspaces(const Polytope<T>& p);

template <class T>
bool contains(const ConvexPiece<T>& c, const Vector<T>& x);

/// Every point of `inner` lies in `outer` (closed shapes).
template <class T>
bool piece_subset(const ConvexPiece<T>& inner, const ConvexPiece<T>& outer);

/// Exact intersection, or nullopt when empty. Supported: polytope pairs in
/// dimension <= 3, a segment against any polytope, a point against any piece,
/// and identical balls. Anything else throws UnsupportedPair.
template <class T>
std::optional<ConvexPiece<T>> intersect(const ConvexPiece<T>& a, const ConvexPiece<T>& b);

/// Nearest point of C to x.
template <class T>
Projection<T> project(const ConvexPiece<T>& c, const Vector<T>& x);

/// Deterministic sample of the piece with spacing at most `resolution`.
template <class T>
std::vector<Vector<double>> discretize(const ConvexPiece<T>& c, double resolution);

template <class T>
std::vector<Vector<double>> discretize(const FaceUnion<T>& u, double resolution);

/// Directed Hausdorff distances between a union and a point cloud. The union
/// side is discretized at `resolution`; the cloud side uses exact projections.
template <class T>
HausdorffResult hausdorff_cloud(const FaceUnion<T>& u, const std::vector<Vector<double>>& cloud,
                                double resolution = 1e-3);

/// Brings a union to normal form: canonical pieces, no duplicates, no piece
/// contained in another, touching collinear segments and co-circular arcs
/// merged, deterministic order.
template <class T>
FaceUnion<T> normalize(const FaceUnion<T>& u);

/// Closure of the union: every open piece becomes closed.
template <class T>
FaceUnion<T> closure(const FaceUnion<T>& u);

/// Set equality. Exact mode compares normal forms exactly; float mode uses
/// symmetric discretized Hausdorff distance against `tol`.
template <class T>
bool faces_equal(const FaceUnion<T>& a, const FaceUnion<T>& b, double tol = 1e-9,
                 double resolution = 1e-3);

/// Largest discretized symmetric Hausdorff distance between two unions.
template <class T>
double union_hausdorff(const FaceUnion<T>& a, const FaceUnion<T>& b, double resolution = 1e-3);

/// Polar angle of a planar vector in (-pi, pi].
template <class T>
double polar_angle(const Vector<T>& v) {
  return std::atan2(to_double(v[1]), to_double(v[0]));
}

/// Angle-order comparison of planar directions starting from the positive
/// x axis (counter-clockwise); exact for rationals.
template <class T>
bool angle_less(const Vector<T>& a, const Vector<T>& b);

/// Point cloud nearest-neighbour index (k-d tree).
class PointIndex {
 public:
  explicit PointIndex(std::vector<Vector<double>> points);
  /// Distance from x to the nearest indexed point; +inf when empty.
  double nearest_distance(const Vector<double>& x) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::size_t point;
    std::size_t axis;
    int left = -1;
    int right = -1;
  };
  int build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi, std::size_t depth);
  void search(int node, const Vector<double>& x, double& best) const;

  std::vector<Vector<double>> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace subdiff
