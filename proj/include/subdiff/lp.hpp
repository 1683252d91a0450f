#pragma once

// Small deterministic linear programming kernel.
//
// A dense two-phase tableau simplex with Bland's rule, instantiated for exact
// rationals and doubles. It backs three things: the strict-feasibility test
// for index subsets, convex-hull membership, and minimum-norm points.

#include "subdiff/linalg.hpp"
#include "subdiff/scalar.hpp"

#include <optional>
#include <vector>

namespace subdiff::lp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <class T>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<T> x;
  T objective{0};
};

/// maximize c.x subject to A x = b, x >= 0.
template <class T>
LpResult<T> maximize_standard(const linalg::Matrix<T>& a, const std::vector<T>& b,
                              const std::vector<T>& c);

/// Rows of the system  <g, d> = 1 (equalities),  <g, d> < 1 (strict).
template <class T>
struct StrictSystem {
  std::vector<Vector<T>> equalities;
  std::vector<Vector<T>> strict;

  std::size_t dimension() const;
};

/// Multipliers (y, z), z >= 0, with  G_eq^T y + G_strict^T z = 0  and either
/// sum(z) > 0 and sum(y) + sum(z) <= 0, or sum(y) + sum(z) < 0. Any such pair
/// proves that no d satisfies the system.
template <class T>
struct FarkasCertificate {
  std::vector<T> equality_multipliers;
  std::vector<T> strict_multipliers;
};

template <class T>
struct StrictFeasibility {
  bool feasible = false;
  /// Witness d when feasible.
  Vector<T> certificate;
  /// Optimal slack t in  <g_j, d> <= 1 - t  over the strict rows (capped at 1).
  T slack{0};
  /// Present for infeasible systems.
  std::optional<FarkasCertificate<T>> farkas;
};

/// Decides whether the system admits a solution d by maximizing the common
/// slack t of the strict rows. Feasible iff t > 0 (exact) or t > lp_slack.
template <class T>
StrictFeasibility<T> strict_feasible(const StrictSystem<T>& system, const Tolerances& tol = {});

/// Substitutes d back into every row.
template <class T>
bool replay_certificate(const StrictSystem<T>& system, const Vector<T>& d, const Tolerances& tol = {});

/// Checks the alternative-system identities of a Farkas certificate.
template <class T>
bool verify_farkas(const StrictSystem<T>& system, const FarkasCertificate<T>& cert,
                   const Tolerances& tol = {});

/// Convex weights expressing x as a combination of `points`, if any.
template <class T>
std::optional<std::vector<T>> convex_weights(const std::vector<Vector<T>>& points, const Vector<T>& x);

template <class T>
struct MinNormPoint {
  Vector<T> point;
  T norm_squared{0};
  double norm = 0.0;
  /// Indices of the vertices carrying positive weight.
  std::vector<std::size_t> support;
};

/// Nearest point of conv(vertices) to the origin, by exhaustive enumeration of
/// affinely independent vertex subsets (at most dim + 1 points each).
template <class T>
MinNormPoint<T> min_norm_point(const std::vector<Vector<T>>& vertices);

/// Wolfe's minimum-norm-point algorithm (float only).
MinNormPoint<double> min_norm_point_wolfe(const std::vector<Vector<double>>& vertices,
                                          double tol = 1e-12);

}  // namespace subdiff::lp
