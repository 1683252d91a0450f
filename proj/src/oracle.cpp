#include "subdiff/oracle.hpp"

#include "subdiff/outer_limits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace subdiff {

namespace {

constexpr double kSideOffset = 1e-9;

struct Signature {
  bool up = false;
  std::vector<std::size_t> argmin;
  std::vector<std::vector<std::size_t>> argmax;

  bool operator==(const Signature&) const = default;
};

class ShellSampler {
 public:
  ShellSampler(const MinMaxFunction<double>& f, const Vector<double>& xbar, const OracleOptions& opts, OracleCloud& out)
      : f_(f), xbar_(xbar), opts_(opts), out_(out), fbar_(evaluate(f, xbar)) {}

  Vector<double> point(double r, const Vector<double>& q) const { return xbar_ + q * r; }

  Vector<double> planar(double theta) const { return Vector<double>{std::cos(theta), std::sin(theta)}; }

  Signature signature(const Vector<double>& x) const {
    Signature s;
    s.up = evaluate(f_, x) > fbar_;
    s.argmin = active_components(f_, x, 0.0);
    for (auto i : s.argmin) s.argmax.push_back(active_pieces(f_.components[i], x, 0.0));
    return s;
  }

  void record(double r, const Vector<double>& q, double tau, bool refined) {
    const Vector<double> x = point(r, q);
    ++out_.evaluated;
    if (!(evaluate(f_, x) > fbar_)) return;
    ++out_.increasing;
    std::optional<ConvexPiece<double>> sub;
    try {
      sub = frechet_subdifferential(f_, x, tau);
    } catch (const UnsupportedPair&) {
      ++out_.skipped_empty_subdiff;
      return;
    }
    if (!sub) {
      ++out_.skipped_empty_subdiff;
      return;
    }
    if (sub->is_point()) {
      out_.points.push_back({sub->as_polytope().vertices.front(), r, q, refined});
      return;
    }
    for (auto& v : discretize(*sub, opts_.face_resolution)) out_.points.push_back({std::move(v), r, q, refined});
  }

  // Locates every change of signature between the angles a < b and samples
  // the crossing and both sides of it.
  void bisect(double r, double a, Signature sa, double b, Signature sb, int depth) {
    if (sa == sb) return;
    for (int iter = 0; iter < 80; ++iter) {
      const double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      Signature sm = signature(point(r, planar(m)));
      if (!(sm == sa) && !(sm == sb) && depth < 12) {
        bisect(r, a, sa, m, sm, depth + 1);
        bisect(r, m, std::move(sm), b, std::move(sb), depth + 1);
        return;
      }
      if (sm == sa) {
        a = m;
      } else {
        b = m;
        sb = std::move(sm);
      }
    }
    record(r, planar(0.5 * (a + b)), opts_.tau, true);
    // One-sided samples slightly away from the crossing, so that rounding at
    // the crossing itself cannot produce an inconsistent active structure.
    const double ao = a - kSideOffset;
    const double bo = b + kSideOffset;
    if (signature(point(r, planar(ao))) == sa) record(r, planar(ao), 0.0, true);
    if (signature(point(r, planar(bo))) == sb) record(r, planar(bo), 0.0, true);
  }

  void run() {
    for (std::size_t k = 0; k < opts_.radii.size(); ++k) {
      const double r = opts_.radii[k];
      const auto dirs = sample_directions(f_.dim, opts_.dirs_per_radius, opts_.seed + k);
      for (const auto& q : dirs) record(r, q, opts_.tau, false);
      if (f_.dim != 2 || !opts_.refine_transitions || dirs.size() < 2) continue;
      std::vector<double> angles;
      for (const auto& q : dirs) angles.push_back(std::atan2(q[1], q[0]));
      std::sort(angles.begin(), angles.end());
      std::vector<Signature> sigs;
      for (double t : angles) sigs.push_back(signature(point(r, planar(t))));
      for (std::size_t j = 0; j < angles.size(); ++j) {
        const std::size_t nx = (j + 1) % angles.size();
        const double b = nx == 0 ? angles[0] + 2.0 * std::numbers::pi : angles[nx];
        bisect(r, angles[j], sigs[j], b, sigs[nx], 0);
      }
    }
  }

 private:
  const MinMaxFunction<double>& f_;
  const Vector<double>& xbar_;
  const OracleOptions& opts_;
  OracleCloud& out_;
  double fbar_;
};

double polyhedron_distance(const std::vector<Vector<double>>& normals, const std::vector<double>& rhs,
                           const Vector<double>& x) {
  const std::size_t m = normals.size();
  const std::size_t n = x.size();
  double best = std::numeric_limits<double>::infinity();
  auto feasible = [&](const Vector<double>& y) {
    for (std::size_t j = 0; j < m; ++j) {
      const double scale = std::max({1.0, std::abs(rhs[j]), norm(normals[j]) * norm(y)});
      if (dot(normals[j], y) > rhs[j] + 1e-12 * scale) return false;
    }
    return true;
  };
  if (feasible(x)) return 0.0;
  // Projections onto the affine hulls of faces given by independent subsets.
  std::vector<std::size_t> subset;
  auto visit = [&](auto&& self, std::size_t start) -> void {
    if (!subset.empty()) {
      const std::size_t k = subset.size();
      linalg::Matrix<double> gram(k, std::vector<double>(k));
      std::vector<double> resid(k);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) gram[i][j] = dot(normals[subset[i]], normals[subset[j]]);
        resid[i] = dot(normals[subset[i]], x) - rhs[subset[i]];
      }
      if (auto lam = linalg::solve(gram, resid)) {
        Vector<double> y = x;
        for (std::size_t i = 0; i < k; ++i) y -= normals[subset[i]] * (*lam)[i];
        if (feasible(y)) best = std::min(best, norm(y - x));
      }
    }
    if (subset.size() == n) return;
    for (std::size_t j = start; j < m; ++j) {
      subset.push_back(j);
      self(self, j + 1);
      subset.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

double grid_distance(const MinMaxFunction<double>& f, double level, const Vector<double>& xbar,
                     const Vector<double>& x, const SublevelOptions& opts) {
  const std::size_t n = x.size();
  double best = norm(x - xbar);
  struct Candidate {
    double dist;
    Vector<double> point;
  };
  std::vector<Vector<double>> centers{x};
  double half = best;
  const std::size_t k = std::max<std::size_t>(2, opts.grid_points);
  for (std::size_t lvl = 0; lvl < opts.max_levels && best > 0; ++lvl) {
    const double h = 2.0 * half / static_cast<double>(k);
    std::vector<Candidate> found;
    for (const auto& c : centers) {
      std::vector<std::size_t> idx(n, 0);
      while (true) {
        Vector<double> y = c;
        for (std::size_t i = 0; i < n; ++i) y[i] += -half + h * static_cast<double>(idx[i]);
        const double d = norm(y - x);
        if (d < best + h * std::sqrt(static_cast<double>(n)) && evaluate(f, y) <= level) {
          found.push_back({d, y});
          best = std::min(best, d);
        }
        std::size_t i = 0;
        while (i < n && idx[i] == k) idx[i++] = 0;
        if (i == n) break;
        ++idx[i];
      }
    }
    if (h < opts.relative_resolution * best) break;
    std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
    centers.clear();
    for (const auto& c : found) {
      if (centers.size() >= opts.refine_candidates) break;
      const bool near_existing = std::any_of(centers.begin(), centers.end(),
                                             [&](const Vector<double>& q) { return norm(q - c.point) < h; });
      if (!near_existing) centers.push_back(c.point);
    }
    if (centers.empty()) break;
    half = 2.0 * h;
  }
  return best;
}

}  // namespace

void OracleOptions::validate() const {
  if (radii.empty()) throw std::invalid_argument("oracle: radii schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0)) throw std::invalid_argument("oracle: radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw std::invalid_argument("oracle: radii must be strictly decreasing");
  }
  if (dirs_per_radius == 0) throw std::invalid_argument("oracle: need at least one direction per radius");
}

std::optional<double> OracleCloud::limit_radius() const {
  std::optional<double> out;
  for (const auto& p : points)
    if (!out || p.radius < *out) out = p.radius;
  return out;
}

std::vector<Vector<double>> OracleCloud::shell(double r) const {
  std::vector<Vector<double>> out;
  for (const auto& p : points)
    if (p.radius == r) out.push_back(p.subgradient);
  return out;
}

std::vector<Vector<double>> OracleCloud::limit_points() const {
  const auto r = limit_radius();
  return r ? shell(*r) : std::vector<Vector<double>>{};
}

OracleCloud sample_limsup(const MinMaxFunction<double>& f, const Vector<double>& xbar, const OracleOptions& opts) {
  f.validate();
  opts.validate();
  if (xbar.size() != f.dim) throw DimensionMismatch(f.dim, xbar.size());
  OracleCloud out;
  out.radii = opts.radii;
  out.seed = opts.seed;
  ShellSampler(f, xbar, opts, out).run();
  std::stable_sort(out.points.begin(), out.points.end(), [](const OracleSample& a, const OracleSample& b) {
    if (a.radius != b.radius) return a.radius > b.radius;
    return a.subgradient < b.subgradient;
  });
  return out;
}

SublevelDistance sublevel_distance(const MinMaxFunction<double>& f, const Vector<double>& xbar,
                                   const Vector<double>& x, const SublevelOptions& opts) {
  if (x.size() != f.dim) throw DimensionMismatch(f.dim, x.size());
  const double level = evaluate(f, xbar);
  if (evaluate(f, x) <= level) return {0.0, f.piecewise_affine()};
  if (f.piecewise_affine()) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : f.components) {
      std::vector<Vector<double>> normals;
      std::vector<double> rhs;
      for (const auto& g : c.pieces) {
        const auto& a = std::get<AffinePiece<double>>(g);
        normals.push_back(a.a);
        rhs.push_back(level - a.b);
      }
      best = std::min(best, polyhedron_distance(normals, rhs, x));
    }
    return {best, true};
  }
  return {grid_distance(f, level, xbar, x, opts), false};
}

ErrorBoundEstimate empirical_error_bound_modulus(const MinMaxFunction<double>& f, const Vector<double>& xbar,
                                                 const OracleOptions& opts, const SublevelOptions& sub) {
  f.validate();
  opts.validate();
  if (xbar.size() != f.dim) throw DimensionMismatch(f.dim, xbar.size());
  ErrorBoundEstimate out;
  out.radii = opts.radii;
  out.seed = opts.seed;
  out.exact_distances = f.piecewise_affine();
  const double fbar = evaluate(f, xbar);
  for (std::size_t k = 0; k < opts.radii.size(); ++k) {
    const double r = opts.radii[k];
    struct Candidate {
      double bound;
      double gain;
      Vector<double> x;
    };
    std::vector<Candidate> cands;
    for (const auto& q : sample_directions(f.dim, opts.dirs_per_radius, opts.seed + k)) {
      Vector<double> x = xbar + q * r;
      const double gain = evaluate(f, x) - fbar;
      if (gain > 0) cands.push_back({gain / norm(x - xbar), gain, std::move(x)});
    }
    // dist(x, S) <= |x - xbar|, so gain / |x - xbar| bounds the ratio from
    // below and lets most samples skip the distance computation.
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.bound < b.bound; });
    std::optional<double> best;
    for (const auto& c : cands) {
      if (best && c.bound >= *best) break;
      const double d = sublevel_distance(f, xbar, c.x, sub).distance;
      if (!(d > 0)) continue;
      const double ratio = c.gain / d;
      if (!best || ratio < *best) best = ratio;
    }
    out.per_radius_min.push_back(best);
    if (best) {
      out.estimate = best;
      out.radius_used = r;
    }
  }
  std::optional<double> prev;
  for (const auto& v : out.per_radius_min) {
    if (!v) continue;
    if (prev && *v > *prev * (1.0 + 1e-9) + 1e-12) out.nonincreasing = false;
    prev = v;
  }
  return out;
}

}  // namespace subdiff
