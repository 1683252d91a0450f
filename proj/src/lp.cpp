#include "subdiff/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace subdiff::lp {

namespace {

template <class T>
bool positive(const T& x, double eps) {
  if constexpr (is_exact_v<T>) {
    (void)eps;
    return x > 0;
  } else {
    return x > eps;
  }
}

template <class T>
bool nonzero(const T& x, double eps) {
  if constexpr (is_exact_v<T>) {
    (void)eps;
    return x != 0;
  } else {
    return std::abs(x) > eps;
  }
}

// Dense tableau. Row i < m holds constraint i with rhs in column `cols`; the
// objective row stores reduced costs (c_j - z_j) and -z in the rhs slot.
template <class T>
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t cols) : m_(m), cols_(cols), rows_(m + 1, std::vector<T>(cols + 1)), basis_(m) {}

  std::vector<T>& row(std::size_t i) { return rows_[i]; }
  std::vector<T>& objective() { return rows_[m_]; }
  std::vector<std::size_t>& basis() { return basis_; }
  std::size_t m() const { return m_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const T inv = T(1) / rows_[r][c];
    for (auto& v : rows_[r]) v *= inv;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || rows_[i][c] == 0) continue;
      const T f = rows_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j) rows_[i][j] -= f * rows_[r][j];
    }
    basis_[r] = c;
  }

  // Bland's rule on columns [0, active_cols). Returns false when unbounded.
  bool optimize(std::size_t active_cols, double eps) {
    for (std::size_t iter = 0; iter < 100000; ++iter) {
      std::size_t enter = active_cols;
      for (std::size_t j = 0; j < active_cols; ++j)
        if (positive(objective()[j], eps)) {
          enter = j;
          break;
        }
      if (enter == active_cols) return true;
      std::size_t leave = m_;
      T best_ratio{0};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!positive(rows_[i][enter], eps)) continue;
        const T ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == m_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
  }

 private:
  std::size_t m_;
  std::size_t cols_;
  std::vector<std::vector<T>> rows_;
  std::vector<std::size_t> basis_;
};

template <class T>
double pivot_eps(const linalg::Matrix<T>& a, const std::vector<T>& b) {
  if constexpr (is_exact_v<T>) {
    (void)a;
    (void)b;
    return 0.0;
  } else {
    double scale = 1.0;
    for (const auto& r : a)
      for (double v : r) scale = std::max(scale, std::abs(v));
    for (double v : b) scale = std::max(scale, std::abs(v));
    return 1e-11 * scale;
  }
}

}  // namespace

template <class T>
LpResult<T> maximize_standard(const linalg::Matrix<T>& a, const std::vector<T>& b, const std::vector<T>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("lp: rhs length mismatch");
  for (const auto& r : a)
    if (r.size() != n) throw std::invalid_argument("lp: row length mismatch");
  const double eps = pivot_eps(a, b);

  // Columns: n structural, then m artificials.
  Tableau<T> tab(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab.row(i)[j] = flip ? T(-a[i][j]) : a[i][j];
    tab.row(i)[n + i] = T(1);
    tab.row(i)[n + m] = flip ? T(-b[i]) : b[i];
    tab.basis()[i] = n + i;
  }
  // Phase I: maximize -sum(artificials). Reduced costs after pricing out.
  auto& obj = tab.objective();
  for (std::size_t j = 0; j <= n + m; ++j) obj[j] = T(0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) obj[j] += tab.row(i)[j];
    obj[n + m] += tab.row(i)[n + m];
  }
  tab.optimize(n + m, eps);

  LpResult<T> result;
  // Remaining infeasibility is the rhs of the objective row.
  if (positive(tab.objective()[n + m], eps)) {
    result.status = LpStatus::Infeasible;
    return result;
  }
  // Drive artificials out of the basis where possible.
  std::vector<bool> redundant(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j)
      if (nonzero(tab.row(i)[j], eps)) {
        col = j;
        break;
      }
    if (col < n) {
      tab.pivot(i, col);
    } else {
      redundant[i] = true;
    }
  }
  // Phase II objective: reduced costs c_j - c_B B^-1 A_j.
  for (std::size_t j = 0; j <= n + m; ++j) tab.objective()[j] = T(0);
  for (std::size_t j = 0; j < n; ++j) tab.objective()[j] = c[j];
  for (std::size_t i = 0; i < m; ++i) {
    if (redundant[i]) {
      // Zero row: keep it inert.
      continue;
    }
    const std::size_t bj = tab.basis()[i];
    if (bj >= n) continue;
    const T cb = c[bj];
    if (cb == 0) continue;
    for (std::size_t j = 0; j <= n + m; ++j) tab.objective()[j] -= cb * tab.row(i)[j];
  }
  // Artificial columns never re-enter: optimize over structural columns only.
  if (!tab.optimize(n, eps)) {
    result.status = LpStatus::Unbounded;
    return result;
  }
  result.status = LpStatus::Optimal;
  result.x.assign(n, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bj = tab.basis()[i];
    if (bj < n) result.x[bj] = tab.row(i)[n + m];
  }
  result.objective = T(0);
  for (std::size_t j = 0; j < n; ++j) result.objective += c[j] * result.x[j];
  return result;
}

template <class T>
std::size_t StrictSystem<T>::dimension() const {
  if (!equalities.empty()) return equalities.front().size();
  if (!strict.empty()) return strict.front().size();
  return 0;
}

namespace {

template <class T>
void check_system(const StrictSystem<T>& s) {
  const std::size_t n = s.dimension();
  for (const auto& g : s.equalities)
    if (g.size() != n) throw DimensionMismatch(n, g.size());
  for (const auto& g : s.strict)
    if (g.size() != n) throw DimensionMismatch(n, g.size());
}

// Searches for Farkas multipliers with the normalization in `mode`:
// 0 -> sum(z) = 1 and sum(y) + sum(z) <= 0;  1 -> sum(y) + sum(z) = -1.
template <class T>
std::optional<FarkasCertificate<T>> farkas_lp(const StrictSystem<T>& s, int mode) {
  const std::size_t n = s.dimension();
  const std::size_t me = s.equalities.size();
  const std::size_t ms = s.strict.size();
  // Variables: y+ (me), y- (me), z (ms), and in mode 0 a slack w >= 0.
  const std::size_t nv = 2 * me + ms + (mode == 0 ? 1 : 0);
  linalg::Matrix<T> a;
  std::vector<T> b;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<T> row(nv, T(0));
    for (std::size_t i = 0; i < me; ++i) {
      row[i] = s.equalities[i][k];
      row[me + i] = -s.equalities[i][k];
    }
    for (std::size_t i = 0; i < ms; ++i) row[2 * me + i] = s.strict[i][k];
    a.push_back(std::move(row));
    b.push_back(T(0));
  }
  std::vector<T> total(nv, T(0));
  for (std::size_t i = 0; i < me; ++i) {
    total[i] = T(1);
    total[me + i] = T(-1);
  }
  for (std::size_t i = 0; i < ms; ++i) total[2 * me + i] = T(1);
  if (mode == 0) {
    if (ms == 0) return std::nullopt;
    std::vector<T> zsum(nv, T(0));
    for (std::size_t i = 0; i < ms; ++i) zsum[2 * me + i] = T(1);
    a.push_back(zsum);
    b.push_back(T(1));
    // sum(y) + sum(z) + w = 0
    auto row = total;
    row[nv - 1] = T(1);
    a.push_back(row);
    b.push_back(T(0));
  } else {
    a.push_back(total);
    b.push_back(T(-1));
  }
  const auto res = maximize_standard(a, b, std::vector<T>(nv, T(0)));
  if (res.status != LpStatus::Optimal) return std::nullopt;
  FarkasCertificate<T> cert;
  for (std::size_t i = 0; i < me; ++i) cert.equality_multipliers.push_back(res.x[i] - res.x[me + i]);
  for (std::size_t i = 0; i < ms; ++i) cert.strict_multipliers.push_back(res.x[2 * me + i]);
  return cert;
}

}  // namespace

template <class T>
StrictFeasibility<T> strict_feasible(const StrictSystem<T>& s, const Tolerances& tol) {
  check_system(s);
  if (s.equalities.empty()) throw std::invalid_argument("strict system needs at least one equality row");
  const std::size_t n = s.dimension();
  const std::size_t me = s.equalities.size();
  const std::size_t ms = s.strict.size();
  // Variables: d+ (n), d- (n), t, slack per strict row, slack for t <= 1.
  const std::size_t t_col = 2 * n;
  const std::size_t nv = 2 * n + 1 + ms + 1;
  linalg::Matrix<T> a;
  std::vector<T> b;
  for (const auto& g : s.equalities) {
    std::vector<T> row(nv, T(0));
    for (std::size_t k = 0; k < n; ++k) {
      row[k] = g[k];
      row[n + k] = -g[k];
    }
    a.push_back(std::move(row));
    b.push_back(T(1));
  }
  for (std::size_t i = 0; i < ms; ++i) {
    std::vector<T> row(nv, T(0));
    for (std::size_t k = 0; k < n; ++k) {
      row[k] = s.strict[i][k];
      row[n + k] = -s.strict[i][k];
    }
    row[t_col] = T(1);
    row[t_col + 1 + i] = T(1);
    a.push_back(std::move(row));
    b.push_back(T(1));
  }
  {
    std::vector<T> row(nv, T(0));
    row[t_col] = T(1);
    row[nv - 1] = T(1);
    a.push_back(std::move(row));
    b.push_back(T(1));
  }
  std::vector<T> c(nv, T(0));
  c[t_col] = T(1);
  const auto res = maximize_standard(a, b, c);

  StrictFeasibility<T> out;
  if (res.status == LpStatus::Optimal) {
    out.slack = res.x[t_col];
    Vector<T> d(n);
    for (std::size_t k = 0; k < n; ++k) d[k] = res.x[k] - res.x[n + k];
    bool ok;
    if constexpr (is_exact_v<T>) {
      ok = out.slack > 0;
    } else {
      ok = out.slack > tol.lp_slack;
    }
    if (ok) {
      out.feasible = true;
      out.certificate = std::move(d);
      return out;
    }
  }
  (void)me;
  out.feasible = false;
  out.farkas = farkas_lp(s, 0);
  if (!out.farkas) out.farkas = farkas_lp(s, 1);
  return out;
}

template <class T>
bool replay_certificate(const StrictSystem<T>& s, const Vector<T>& d, const Tolerances& tol) {
  for (const auto& g : s.equalities) {
    const T v = dot(g, d);
    if constexpr (is_exact_v<T>) {
      if (v != 1) return false;
    } else {
      if (std::abs(v - 1.0) > 1e-9 * std::max(1.0, norm(g) * norm(d))) return false;
    }
  }
  for (const auto& g : s.strict) {
    const T v = dot(g, d);
    if constexpr (is_exact_v<T>) {
      if (!(v < 1)) return false;
    } else {
      (void)tol;
      if (!(v < 1.0)) return false;
    }
  }
  return true;
}

template <class T>
bool verify_farkas(const StrictSystem<T>& s, const FarkasCertificate<T>& cert, const Tolerances&) {
  const std::size_t n = s.dimension();
  if (cert.equality_multipliers.size() != s.equalities.size() ||
      cert.strict_multipliers.size() != s.strict.size())
    return false;
  T sum_y{0}, sum_z{0};
  for (const auto& y : cert.equality_multipliers) sum_y += y;
  for (const auto& z : cert.strict_multipliers) {
    if (z < 0) return false;
    sum_z += z;
  }
  const double eps = is_exact_v<T> ? 0.0 : 1e-9;
  for (std::size_t k = 0; k < n; ++k) {
    T comb{0};
    for (std::size_t i = 0; i < s.equalities.size(); ++i) comb += cert.equality_multipliers[i] * s.equalities[i][k];
    for (std::size_t i = 0; i < s.strict.size(); ++i) comb += cert.strict_multipliers[i] * s.strict[i][k];
    if constexpr (is_exact_v<T>) {
      if (comb != 0) return false;
    } else {
      if (std::abs(comb) > eps) return false;
    }
  }
  const double total = to_double(T(sum_y + sum_z));
  const double zs = to_double(sum_z);
  if constexpr (is_exact_v<T>) {
    return (sum_z > 0 && sum_y + sum_z <= 0) || (sum_y + sum_z < 0);
  } else {
    return (zs > eps && total <= eps) || (total < -eps);
  }
}

template <class T>
std::optional<std::vector<T>> convex_weights(const std::vector<Vector<T>>& points, const Vector<T>& x) {
  if (points.empty()) return std::nullopt;
  const std::size_t n = x.size();
  const std::size_t m = points.size();
  linalg::Matrix<T> a;
  std::vector<T> b;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<T> row(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (points[i].size() != n) throw DimensionMismatch(n, points[i].size());
      row[i] = points[i][k];
    }
    a.push_back(std::move(row));
    b.push_back(x[k]);
  }
  a.push_back(std::vector<T>(m, T(1)));
  b.push_back(T(1));
  const auto res = maximize_standard(a, b, std::vector<T>(m, T(0)));
  if (res.status != LpStatus::Optimal) return std::nullopt;
  if constexpr (!is_exact_v<T>) {
    // Accept only combinations that reproduce x to working precision.
    double scale = 1.0;
    for (const auto& p : points) scale = std::max(scale, norm(p));
    Vector<T> y(n);
    for (std::size_t i = 0; i < m; ++i) y += points[i] * res.x[i];
    if (norm(y - x) > 1e-9 * scale) return std::nullopt;
  }
  return res.x;
}

template <class T>
MinNormPoint<T> min_norm_point(const std::vector<Vector<T>>& vertices) {
  if (vertices.empty()) throw std::invalid_argument("min_norm_point: empty vertex list");
  const std::size_t n = vertices.front().size();
  for (const auto& v : vertices)
    if (v.size() != n) throw DimensionMismatch(n, v.size());
  const std::size_t m = vertices.size();
  const std::size_t max_size = std::min(m, n + 1);

  MinNormPoint<T> best;
  bool have = false;
  std::vector<std::size_t> subset;

  auto consider = [&](const std::vector<std::size_t>& idx) {
    const std::size_t k = idx.size();
    // KKT system for min |sum w_i v_i|^2 s.t. sum w_i = 1.
    linalg::Matrix<T> kkt(k + 1, std::vector<T>(k + 1, T(0)));
    std::vector<T> rhs(k + 1, T(0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) kkt[i][j] = dot(vertices[idx[i]], vertices[idx[j]]);
      kkt[i][k] = T(1);
      kkt[k][i] = T(1);
    }
    rhs[k] = T(1);
    const auto sol = linalg::solve(kkt, rhs);
    if (!sol) return;
    for (std::size_t i = 0; i < k; ++i) {
      if constexpr (is_exact_v<T>) {
        if ((*sol)[i] <= 0) return;
      } else {
        if ((*sol)[i] < -1e-12) return;
      }
    }
    Vector<T> y(n);
    for (std::size_t i = 0; i < k; ++i) y += vertices[idx[i]] * (*sol)[i];
    const T ns = norm_squared(y);
    if (!have || ns < best.norm_squared) {
      have = true;
      best.point = y;
      best.norm_squared = ns;
      best.support = idx;
    }
  };

  // Enumerate subsets of size 1..max_size in lexicographic order.
  for (std::size_t k = 1; k <= max_size; ++k) {
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      consider(idx);
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  if (!have) throw std::logic_error("min_norm_point: no candidate found");
  best.norm = std::sqrt(to_double(best.norm_squared));
  return best;
}

MinNormPoint<double> min_norm_point_wolfe(const std::vector<Vector<double>>& pts, double tol) {
  if (pts.empty()) throw std::invalid_argument("min_norm_point_wolfe: empty vertex list");
  const std::size_t n = pts.front().size();
  double scale = 0.0;
  for (const auto& p : pts) {
    if (p.size() != n) throw DimensionMismatch(n, p.size());
    scale = std::max(scale, norm_squared(p));
  }
  scale = std::max(scale, 1e-300);

  std::size_t start = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (norm_squared(pts[i]) < norm_squared(pts[start])) start = i;
  std::vector<std::size_t> s{start};
  std::vector<double> w{1.0};
  Vector<double> x = pts[start];

  auto affine_min = [&](const std::vector<std::size_t>& idx) -> std::optional<std::vector<double>> {
    const std::size_t k = idx.size();
    linalg::Matrix<double> kkt(k + 1, std::vector<double>(k + 1, 0.0));
    std::vector<double> rhs(k + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) kkt[i][j] = dot(pts[idx[i]], pts[idx[j]]);
      kkt[i][k] = 1.0;
      kkt[k][i] = 1.0;
    }
    rhs[k] = 1.0;
    auto sol = linalg::solve(kkt, rhs);
    if (!sol) return std::nullopt;
    sol->pop_back();
    return sol;
  };

  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    double best = dot(x, pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double v = dot(x, pts[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (norm_squared(x) - best <= tol * scale) break;
    if (std::find(s.begin(), s.end(), j) != s.end()) break;
    s.push_back(j);
    w.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      auto alpha = affine_min(s);
      if (!alpha) {
        // Affinely dependent support: drop the newest point.
        s.pop_back();
        w.pop_back();
        break;
      }
      bool interior = std::all_of(alpha->begin(), alpha->end(), [&](double a) { return a > tol; });
      if (interior) {
        w = *alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i)
        if ((*alpha)[i] <= tol && w[i] - (*alpha)[i] > 0) theta = std::min(theta, w[i] / (w[i] - (*alpha)[i]));
      for (std::size_t i = 0; i < s.size(); ++i) w[i] = theta * (*alpha)[i] + (1 - theta) * w[i];
      std::vector<std::size_t> s2;
      std::vector<double> w2;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (w[i] > tol) {
          s2.push_back(s[i]);
          w2.push_back(w[i]);
        }
      s = std::move(s2);
      w = std::move(w2);
    }
    x = Vector<double>(n);
    for (std::size_t i = 0; i < s.size(); ++i) x += pts[s[i]] * w[i];
  }
  MinNormPoint<double> out;
  out.point = x;
  out.norm_squared = norm_squared(x);
  out.norm = std::sqrt(out.norm_squared);
  out.support = s;
  std::sort(out.support.begin(), out.support.end());
  return out;
}

#define SUBDIFF_INSTANTIATE_LP(T)                                                                    \
  template LpResult<T> maximize_standard(const linalg::Matrix<T>&, const std::vector<T>&,           \
                                         const std::vector<T>&);                                    \
  template struct StrictSystem<T>;                                                                  \
  template StrictFeasibility<T> strict_feasible(const StrictSystem<T>&, const Tolerances&);         \
  template bool replay_certificate(const StrictSystem<T>&, const Vector<T>&, const Tolerances&);    \
  template bool verify_farkas(const StrictSystem<T>&, const FarkasCertificate<T>&, const Tolerances&); \
  template std::optional<std::vector<T>> convex_weights(const std::vector<Vector<T>>&, const Vector<T>&); \
  template MinNormPoint<T> min_norm_point(const std::vector<Vector<T>>&);

SUBDIFF_INSTANTIATE_LP(double)
SUBDIFF_INSTANTIATE_LP(Rational)

}  // namespace subdiff::lp
