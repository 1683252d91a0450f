#pragma once

// Scalar types and the small fixed-size vector used throughout the kernel.
//
// Two arithmetic modes are supported: exact rationals (GMP-backed) for
// polyhedral data and IEEE doubles for data that needs square roots
// (balls, norms). Every algorithm is written once against `Vector<T>` and
// instantiated for both.

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace subdiff {

using Rational = boost::multiprecision::mpq_rational;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double to_double(double x) { return x; }
  static double from_double(double x) { return x; }
  static double sqrt(double x) { return std::sqrt(x); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static Rational from_double(double x) { return Rational(x); }
  [[noreturn]] static Rational sqrt(const Rational&) {
    throw std::logic_error("square roots are not available in exact mode; use float mode");
  }
};

template <class T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <class T>
T abs_value(const T& x) {
  return x < 0 ? T(-x) : x;
}

template <class T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

/// Parses "p/q", integer or decimal text into an exact rational.
Rational parse_rational(const std::string& text);

/// Serializes a rational as "p/q" (or "p" when the denominator is 1).
std::string format_rational(const Rational& x);

/// Dense coordinate vector. Dimension is a runtime property; mixing
/// dimensions in one arithmetic operation throws `DimensionMismatch`.
template <class T>
class Vector {
 public:
  Vector() = default;
  explicit Vector(std::size_t n) : coords_(n, T(0)) {}
  Vector(std::initializer_list<T> init) : coords_(init) {}
  explicit Vector(std::vector<T> coords) : coords_(std::move(coords)) {}

  std::size_t size() const { return coords_.size(); }
  bool empty() const { return coords_.empty(); }
  T& operator[](std::size_t i) { return coords_[i]; }
  const T& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<T>& coords() const { return coords_; }
  auto begin() const { return coords_.begin(); }
  auto end() const { return coords_.end(); }

  bool is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](const T& c) { return c == 0; });
  }

  Vector& operator+=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] += o.coords_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    check_same(o);
    for (std::size_t i = 0; i < size(); ++i) coords_[i] -= o.coords_[i];
    return *this;
  }
  Vector& operator*=(const T& s) {
    for (auto& c : coords_) c *= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, const T& s) { return a *= s; }
  friend Vector operator*(const T& s, Vector a) { return a *= s; }
  friend Vector operator-(Vector a) {
    for (auto& c : a.coords_) c = -c;
    return a;
  }
  friend bool operator==(const Vector& a, const Vector& b) { return a.coords_ == b.coords_; }
  friend bool operator<(const Vector& a, const Vector& b) { return a.coords_ < b.coords_; }

  void check_same(const Vector& o) const;

 private:
  std::vector<T> coords_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

template <class T>
void Vector<T>::check_same(const Vector& o) const {
  if (o.size() != size()) throw DimensionMismatch(size(), o.size());
}

template <class T>
T dot(const Vector<T>& a, const Vector<T>& b) {
  a.check_same(b);
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class T>
T norm_squared(const Vector<T>& a) {
  return dot(a, a);
}

template <class T>
double norm(const Vector<T>& a) {
  return std::sqrt(to_double(norm_squared(a)));
}

template <class T>
Vector<double> to_double(const Vector<T>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(to_double(c));
  return Vector<double>(std::move(out));
}

template <class T>
Vector<T> from_double(const Vector<double>& v) {
  std::vector<T> out;
  out.reserve(v.size());
  for (double c : v) out.push_back(ScalarTraits<T>::from_double(c));
  return Vector<T>(std::move(out));
}

/// Planar rotation by +90 degrees.
template <class T>
Vector<T> rot90(const Vector<T>& v) {
  if (v.size() != 2) throw DimensionMismatch(2, v.size());
  return Vector<T>{T(-v[1]), v[0]};
}

template <class T>
T cross2(const Vector<T>& a, const Vector<T>& b) {
  return a[0] * b[1] - a[1] * b[0];
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Vector<T>& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    if constexpr (is_exact_v<T>) {
      os << format_rational(v[i]);
    } else {
      os << v[i];
    }
  }
  return os << ')';
}

/// Tolerances used by float mode. Exact mode always compares with zero slack.
struct Tolerances {
  /// Activity tolerance, relative to max(1, |reference value|).
  double activity = 1e-9;
  /// Strict-feasibility threshold on the LP slack.
  double lp_slack = 1e-8;
  /// Set-equality tolerance for FaceUnion comparisons.
  double set_equality = 1e-9;
};

/// Absolute slack band around `magnitude`: zero in exact mode.
template <class T>
T activity_band(const T& magnitude, double tau) {
  if constexpr (is_exact_v<T>) {
    (void)magnitude;
    (void)tau;
    return T(0);
  } else {
    return tau * std::max(1.0, std::abs(magnitude));
  }
}

}  // namespace subdiff
