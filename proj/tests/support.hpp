#pragma once

// Helpers shared by the unit tests. Reference computations here are written
// independently of the library routines they check.

#include "subdiff/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace testsupport {

using subdiff::Rational;
using subdiff::Vector;

inline Rational q(const char* s) { return subdiff::parse_rational(s); }

inline Vector<Rational> rv(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (auto c : cs) v.push_back(q(c));
  return Vector<Rational>(v);
}

inline std::filesystem::path fixtures_dir() { return SUBDIFF_FIXTURES_DIR; }

inline subdiff::io::Problem fixture(const std::string& name) {
  return subdiff::io::load_problem(fixtures_dir() / (name + ".json"));
}

/// Convex hull of planar points by Andrew's monotone chain, counter-clockwise,
/// collinear points dropped.
template <class T>
std::vector<Vector<T>> hull2d(std::vector<Vector<T>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Vector<T>& o, const Vector<T>& a, const Vector<T>& b) {
    return T((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]));
  };
  std::vector<Vector<T>> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  return h;
}

/// Distance from x to segment [a, b] in closed form.
inline double segment_distance(const Vector<double>& x, const Vector<double>& a, const Vector<double>& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0 ? 0.0 : ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x[0] - a[0] - t * dx, x[1] - a[1] - t * dy);
}

}  // namespace testsupport
