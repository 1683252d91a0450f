#pragma once

// Problem files and result documents (JSON), plus SVG rendering of planar
// results.

#include "subdiff/error_bound.hpp"
#include "subdiff/function_model.hpp"
#include "subdiff/oracle.hpp"
#include "subdiff/outer_limits.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace subdiff::io {

using nlohmann::json;

enum class Mode { Exact, Float };

const char* mode_name(Mode m);

/// Schema or syntax problem; `where` is a field path or "line L, column C".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

/// A requested arithmetic mode cannot represent the problem.
class UnsupportedMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Problem {
  std::string name;
  Mode mode = Mode::Exact;
  /// Set in exact mode.
  std::optional<MinMaxFunction<Rational>> exact;
  std::optional<Vector<Rational>> basepoint_exact;
  /// Always set.
  MinMaxFunction<double> function;
  Vector<double> basepoint;
  double tau = 1e-9;
  OracleOptions oracle;
  std::size_t outer_dirs = 10000;

  std::size_t dim() const { return function.dim; }
};

/// Parses a problem document. Exact mode is the default unless a component
/// needs square roots (ball support); `forced` overrides the choice.
Problem parse_problem(const std::string& text, std::optional<Mode> forced = std::nullopt);
Problem load_problem(const std::filesystem::path& path, std::optional<Mode> forced = std::nullopt);
json problem_to_json(const Problem& p);

/// Parses JSON text, reporting syntax errors by line and column.
json parse_json(const std::string& text);
json load_json(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);

/// Scalars: exact values as "p/q" strings, floats as numbers. Parsing accepts
/// both forms in both modes.
template <class T>
json scalar_to_json(const T& x);
template <class T>
T scalar_from_json(const json& j, const std::string& where);
template <>
json scalar_to_json(const Rational& x);
template <>
json scalar_to_json(const double& x);
template <>
Rational scalar_from_json(const json& j, const std::string& where);
template <>
double scalar_from_json(const json& j, const std::string& where);
template <class T>
json vector_to_json(const Vector<T>& v);
template <class T>
Vector<T> vector_from_json(const json& j, const std::string& where);

template <class T>
json piece_to_json(const ConvexPiece<T>& c);
template <class T>
ConvexPiece<T> piece_from_json(const json& j, const std::string& where);
template <class T>
json union_to_json(const FaceUnion<T>& u);
template <class T>
FaceUnion<T> union_from_json(const json& j, const std::string& where);

/// D lists are written one-based, matching the usual index notation.
template <class T>
json family_to_json(const IndexFamily<T>& f);
template <class T>
json cells_to_json(const std::vector<DirectionCell<T>>& cells);
template <class T>
json lower_bound_to_json(const LowerBound<T>& lb);
json cloud_to_json(const OracleCloud& c, bool limit_only = true);
json estimate_to_json(const ErrorBoundEstimate& e);
json hausdorff_to_json(const HausdorffResult& h);

/// Numeric-tolerant structural comparison; returns one line per difference.
std::vector<std::string> json_diff(const json& expected, const json& actual, double tol = 1e-9,
                                   const std::string& path = "");

struct SvgOptions {
  int size = 480;
  double margin = 0.08;
};

/// Renders a result document: "subdifferentials" (thin), "outer_limit"
/// (bold) and "cloud" (dots), whichever are present. Planar data only.
std::string render_svg(const json& result, const SvgOptions& opts = {});

}  // namespace subdiff::io
