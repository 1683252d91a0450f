#pragma once

// Sampling estimates around a basepoint: the outer limit of subdifferentials
// over points with f(x) > f(xbar), distances to the sublevel set, and the
// error bound modulus.

#include "subdiff/function_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace subdiff {

struct OracleOptions {
  /// Strictly decreasing shell radii.
  std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  std::size_t dirs_per_radius = 2000;
  std::uint64_t seed = 42;
  double tau = 1e-9;
  /// In the plane, bisect between neighbouring directions whose active
  /// structure differs, so thin regions and tie curves are not missed.
  bool refine_transitions = true;
  /// Spacing used when a tie produces a non-singleton subdifferential.
  double face_resolution = 1e-2;

  void validate() const;
};

struct OracleSample {
  Vector<double> subgradient;
  double radius = 0.0;
  Vector<double> direction;
  bool from_refinement = false;
};

struct OracleCloud {
  std::vector<OracleSample> points;
  std::vector<double> radii;
  std::uint64_t seed = 0;
  std::size_t evaluated = 0;
  std::size_t increasing = 0;
  std::size_t skipped_empty_subdiff = 0;

  /// Smallest radius that produced any point.
  std::optional<double> limit_radius() const;
  /// Subgradients recorded on the shell of radius r.
  std::vector<Vector<double>> shell(double r) const;
  /// Subgradients on the smallest productive shell.
  std::vector<Vector<double>> limit_points() const;
};

OracleCloud sample_limsup(const MinMaxFunction<double>& f, const Vector<double>& xbar, const OracleOptions& opts = {});

struct SublevelOptions {
  std::size_t grid_points = 16;
  std::size_t refine_candidates = 4;
  /// Grid refinement stops once the spacing falls below this fraction of
  /// the current distance.
  double relative_resolution = 1e-4;
  std::size_t max_levels = 40;
};

struct SublevelDistance {
  double distance = 0.0;
  /// Polyhedral projection (piecewise-affine data) rather than a grid search.
  bool exact = false;
};

/// dist(x, S) with S = { y : f(y) <= f(xbar) }. The grid fallback only ever
/// reports distances to genuine points of S, so it can overestimate but never
/// underestimate the true distance.
SublevelDistance sublevel_distance(const MinMaxFunction<double>& f, const Vector<double>& xbar,
                                   const Vector<double>& x, const SublevelOptions& opts = {});

struct ErrorBoundEstimate {
  std::vector<double> radii;
  /// Minimum of (f(x) - f(xbar)) / dist(x, S) over the shell; empty when no
  /// sampled point increased f.
  std::vector<std::optional<double>> per_radius_min;
  std::optional<double> estimate;
  std::optional<double> radius_used;
  /// Per-radius minima do not increase as the radius shrinks.
  bool nonincreasing = true;
  bool exact_distances = false;
  std::uint64_t seed = 0;
};

ErrorBoundEstimate empirical_error_bound_modulus(const MinMaxFunction<double>& f, const Vector<double>& xbar,
                                                 const OracleOptions& opts = {},
                                                 const SublevelOptions& sub = {});

}  // namespace subdiff
