#include "subdiff/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace subdiff::io {

namespace {

std::string child(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string child(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where.empty() ? "<root>" : where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(where, key), "missing field");
  return *it;
}

const json& require_array(const json& obj, const std::string& key, const std::string& where) {
  const json& j = require(obj, key, where);
  if (!j.is_array()) throw ParseError(child(where, key), "expected an array");
  return j;
}

std::string shortest_decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::size_t component_count_hint(const json& j) { return j.is_array() ? j.size() : 0; }

Component<Rational> parse_component(const json& j, std::size_t dim, const std::string& where) {
  const std::string type = require(j, "type", where).is_string() ? require(j, "type", where).get<std::string>() : "";
  Component<Rational> c;
  if (type == "max_affine" || type == "max_quadratic") {
    c.kind = type == "max_affine" ? ComponentKind::MaxAffine : ComponentKind::MaxQuadratic;
    const json& pieces = require_array(j, "pieces", where);
    if (pieces.empty()) throw ParseError(child(where, "pieces"), "at least one piece is required");
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const std::string pw = child(child(where, "pieces"), k);
      const json& pj = pieces[k];
      auto a = vector_from_json<Rational>(require(pj, "a", pw), child(pw, "a"));
      if (a.size() != dim) throw ParseError(child(pw, "a"), "expected " + std::to_string(dim) + " entries");
      const Rational b = pj.contains("b") ? scalar_from_json<Rational>(pj["b"], child(pw, "b")) : Rational(0);
      if (c.kind == ComponentKind::MaxAffine) {
        if (pj.contains("Q")) throw ParseError(child(pw, "Q"), "affine pieces take no Q");
        c.pieces.push_back(AffinePiece<Rational>{std::move(a), b});
      } else {
        linalg::Matrix<Rational> q;
        if (pj.contains("Q")) {
          const json& qj = pj["Q"];
          if (!qj.is_array() || qj.size() != dim) throw ParseError(child(pw, "Q"), "expected a square matrix");
          for (std::size_t r = 0; r < dim; ++r) {
            const auto row = vector_from_json<Rational>(qj[r], child(child(pw, "Q"), r));
            if (row.size() != dim) throw ParseError(child(child(pw, "Q"), r), "row length mismatch");
            q.push_back(row.coords());
          }
        } else {
          q.assign(dim, std::vector<Rational>(dim, Rational(0)));
        }
        c.pieces.push_back(QuadraticPiece<Rational>{std::move(q), std::move(a), b});
      }
    }
  } else if (type == "ball_support") {
    c.kind = ComponentKind::BallSupport;
    if (j.contains("pieces")) throw ParseError(child(where, "pieces"), "a ball-support component has no other pieces");
    auto center = vector_from_json<Rational>(require(j, "center", where), child(where, "center"));
    if (center.size() != dim) throw ParseError(child(where, "center"), "expected " + std::to_string(dim) + " entries");
    const Rational r = scalar_from_json<Rational>(require(j, "radius", where), child(where, "radius"));
    if (r < 0) throw ParseError(child(where, "radius"), "radius must be nonnegative");
    c.pieces.push_back(BallSupportPiece<Rational>{std::move(center), r});
  } else {
    throw ParseError(child(where, "type"), "expected max_affine, max_quadratic or ball_support");
  }
  return c;
}

void parse_options(const json& j, Problem& p) {
  if (!j.is_object()) throw ParseError("options", "expected an object");
  for (const auto& [key, value] : j.items()) {
    const std::string w = child("options", key);
    if (key == "tau") {
      p.tau = scalar_from_json<double>(value, w);
      if (!(p.tau >= 0)) throw ParseError(w, "must be nonnegative");
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw ParseError(w, "expected a nonnegative integer");
      p.oracle.seed = value.get<std::uint64_t>();
    } else if (key == "radii") {
      p.oracle.radii.clear();
      if (!value.is_array()) throw ParseError(w, "expected an array");
      for (std::size_t i = 0; i < value.size(); ++i) p.oracle.radii.push_back(scalar_from_json<double>(value[i], child(w, i)));
    } else if (key == "dirs_per_radius") {
      if (!value.is_number_unsigned()) throw ParseError(w, "expected a positive integer");
      p.oracle.dirs_per_radius = value.get<std::size_t>();
    } else if (key == "outer_dirs") {
      if (!value.is_number_unsigned()) throw ParseError(w, "expected a positive integer");
      p.outer_dirs = value.get<std::size_t>();
    } else {
      throw ParseError(w, "unknown option");
    }
  }
  try {
    p.oracle.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError("options", e.what());
  }
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "float"; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
}

json load_json(const std::filesystem::path& path) {
  try {
    return parse_json(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), "malformed JSON");
  }
}

template <>
json scalar_to_json(const Rational& x) {
  return format_rational(x);
}

template <>
json scalar_to_json(const double& x) {
  return x;
}

template <>
Rational scalar_from_json(const json& j, const std::string& where) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rational(j.get<std::uint64_t>());
    if (j.is_number_float()) {
      const double d = j.get<double>();
      if (!std::isfinite(d)) throw ParseError(where, "non-finite number");
      return parse_rational(shortest_decimal(d));
    }
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, e.what());
  }
  throw ParseError(where, "expected a number or a \"p/q\" string");
}

template <>
double scalar_from_json(const json& j, const std::string& where) {
  if (j.is_number()) {
    const double d = j.get<double>();
    if (!std::isfinite(d)) throw ParseError(where, "non-finite number");
    return d;
  }
  return to_double(scalar_from_json<Rational>(j, where));
}

template <class T>
json vector_to_json(const Vector<T>& v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(scalar_to_json(c));
  return out;
}

template <class T>
Vector<T> vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of numbers");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scalar_from_json<T>(j[i], child(where, i)));
  return Vector<T>(std::move(out));
}

template <class T>
json piece_to_json(const ConvexPiece<T>& c) {
  json out;
  if (c.is_polytope()) {
    out["kind"] = "polytope";
    out["vertices"] = json::array();
    for (const auto& v : c.as_polytope().vertices) out["vertices"].push_back(vector_to_json(v));
  } else if (c.is_ball()) {
    out["kind"] = "ball";
    out["center"] = vector_to_json(c.as_ball().center);
    out["radius"] = scalar_to_json(c.as_ball().radius);
  } else {
    const Arc& a = c.as_arc();
    out["kind"] = "arc";
    out["center"] = vector_to_json(a.center);
    out["radius"] = a.radius;
    out["theta_begin"] = a.theta_begin;
    out["theta_end"] = a.theta_end;
  }
  out["closed"] = c.closed;
  if (!c.closed) {
    out["excluded"] = json::array();
    for (const auto& e : c.excluded) out["excluded"].push_back(vector_to_json(e));
  }
  return out;
}

template <class T>
ConvexPiece<T> piece_from_json(const json& j, const std::string& where) {
  const json& kind = require(j, "kind", where);
  ConvexPiece<T> c;
  if (kind == "polytope") {
    const json& vs = require_array(j, "vertices", where);
    if (vs.empty()) throw ParseError(child(where, "vertices"), "a polytope needs at least one vertex");
    Polytope<T> p;
    for (std::size_t i = 0; i < vs.size(); ++i) p.vertices.push_back(vector_from_json<T>(vs[i], child(child(where, "vertices"), i)));
    c.shape = std::move(p);
  } else if (kind == "ball") {
    c.shape = Ball<T>{vector_from_json<T>(require(j, "center", where), child(where, "center")),
                      scalar_from_json<T>(require(j, "radius", where), child(where, "radius"))};
  } else if (kind == "arc") {
    Arc a;
    a.center = vector_from_json<double>(require(j, "center", where), child(where, "center"));
    a.radius = scalar_from_json<double>(require(j, "radius", where), child(where, "radius"));
    a.theta_begin = scalar_from_json<double>(require(j, "theta_begin", where), child(where, "theta_begin"));
    a.theta_end = scalar_from_json<double>(require(j, "theta_end", where), child(where, "theta_end"));
    if (a.center.size() != 2) throw ParseError(child(where, "center"), "arcs are planar");
    c.shape = a;
  } else {
    throw ParseError(child(where, "kind"), "expected polytope, ball or arc");
  }
  c.closed = j.value("closed", true);
  if (!c.closed && j.contains("excluded")) {
    const json& ex = j["excluded"];
    for (std::size_t i = 0; i < ex.size(); ++i) c.excluded.push_back(vector_from_json<double>(ex[i], child(child(where, "excluded"), i)));
  }
  return c;
}

template <class T>
json union_to_json(const FaceUnion<T>& u) {
  json out = json::array();
  for (const auto& c : u.pieces) out.push_back(piece_to_json(c));
  return out;
}

template <class T>
FaceUnion<T> union_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array of pieces");
  FaceUnion<T> u;
  for (std::size_t i = 0; i < j.size(); ++i) u.pieces.push_back(piece_from_json<T>(j[i], child(where, i)));
  return u;
}

template <class T>
json family_to_json(const IndexFamily<T>& f) {
  json out = json::array();
  for (const auto& s : f.subsets) {
    json d = json::array();
    for (auto i : s.indices) d.push_back(i + 1);
    out.push_back({{"D", d}, {"certificate", vector_to_json(s.certificate)}});
  }
  return out;
}

template <class T>
json cells_to_json(const std::vector<DirectionCell<T>>& cells) {
  json out = json::array();
  for (const auto& c : cells) {
    json i_min = json::array();
    for (auto i : c.i_min) i_min.push_back(i + 1);
    out.push_back({{"direction", vector_to_json(c.direction)},
                   {"theta", {c.theta_begin, c.theta_end}},
                   {"open_interval", c.open_interval},
                   {"i_min", i_min},
                   {"dd_positive", c.dd_positive},
                   {"face", c.face ? piece_to_json(*c.face) : json(nullptr)},
                   {"stable", c.stable}});
  }
  return out;
}

template <class T>
json lower_bound_to_json(const LowerBound<T>& lb) {
  if (lb.infinite) return {{"infinite", true}, {"value", nullptr}};
  json out{{"infinite", false},
           {"value", lb.distance},
           {"attaining_piece", lb.attaining_piece},
           {"attaining_point", vector_to_json(lb.attaining_point)},
           {"via_closure", lb.via_closure}};
  if constexpr (is_exact_v<T>) out["value_squared"] = format_rational(lb.distance_squared);
  return out;
}

json cloud_to_json(const OracleCloud& c, bool limit_only) {
  std::vector<Vector<double>> pts;
  if (limit_only) {
    pts = c.limit_points();
  } else {
    for (const auto& p : c.points) pts.push_back(p.subgradient);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  json cloud = json::array();
  for (const auto& p : pts) cloud.push_back(vector_to_json(p));
  const auto r = c.limit_radius();
  return {{"cloud", cloud},
          {"radius", r ? json(*r) : json(nullptr)},
          {"radii", c.radii},
          {"seed", c.seed},
          {"evaluated", c.evaluated},
          {"increasing", c.increasing},
          {"skipped_empty_subdiff", c.skipped_empty_subdiff}};
}

json estimate_to_json(const ErrorBoundEstimate& e) {
  json mins = json::array();
  for (const auto& v : e.per_radius_min) mins.push_back(v ? json(*v) : json(nullptr));
  return {{"radii", e.radii},
          {"per_radius_min_ratio", mins},
          {"er_estimate", e.estimate ? json(*e.estimate) : json(nullptr)},
          {"radius_used", e.radius_used ? json(*e.radius_used) : json(nullptr)},
          {"nonincreasing", e.nonincreasing},
          {"exact_distances", e.exact_distances},
          {"seed", e.seed}};
}

json hausdorff_to_json(const HausdorffResult& h) {
  if (std::holds_alternative<EmptySet>(h)) return {{"empty", true}};
  const auto& d = std::get<DirectedHausdorff>(h);
  return {{"empty", false},
          {"outer_to_cloud", d.union_to_cloud},
          {"cloud_to_outer", d.cloud_to_union},
          {"symmetric", std::max(d.union_to_cloud, d.cloud_to_union)}};
}

Problem parse_problem(const std::string& text, std::optional<Mode> forced) {
  const json j = parse_json(text);
  if (!j.is_object()) throw ParseError("<root>", "expected an object");
  Problem p;
  p.name = j.value("name", std::string());
  const json& dim_j = require(j, "dim", "");
  if (!dim_j.is_number_unsigned() || dim_j.get<std::size_t>() == 0) throw ParseError("dim", "expected a positive integer");
  const std::size_t dim = dim_j.get<std::size_t>();
  auto xbar = vector_from_json<Rational>(require(j, "basepoint", ""), "basepoint");
  if (xbar.size() != dim) throw ParseError("basepoint", "expected " + std::to_string(dim) + " entries");
  const json& comps = require_array(j, "components", "");
  if (comps.empty()) throw ParseError("components", "at least one component is required");
  MinMaxFunction<Rational> f;
  f.dim = dim;
  f.components.reserve(component_count_hint(comps));
  for (std::size_t i = 0; i < comps.size(); ++i) f.components.push_back(parse_component(comps[i], dim, child("components", i)));
  try {
    f.validate();
  } catch (const ModelError& e) {
    throw ParseError("components", e.what());
  }

  std::optional<Mode> requested = forced;
  if (!requested && j.contains("mode")) {
    const json& m = j["mode"];
    if (m == "exact") {
      requested = Mode::Exact;
    } else if (m == "float") {
      requested = Mode::Float;
    } else {
      throw ParseError("mode", "expected \"exact\" or \"float\"");
    }
  }
  const bool needs_float = f.has_ball_support();
  if (requested == Mode::Exact && needs_float)
    throw UnsupportedMode("exact mode cannot handle ball-support components (support values need square roots)");
  p.mode = requested.value_or(needs_float ? Mode::Float : Mode::Exact);
  if (j.contains("options")) parse_options(j["options"], p);

  p.function = to_double(f);
  p.basepoint = to_double(xbar);
  if (p.mode == Mode::Exact) {
    p.exact = std::move(f);
    p.basepoint_exact = std::move(xbar);
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path, std::optional<Mode> forced) {
  const std::string text = read_file(path);
  try {
    auto p = parse_problem(text, forced);
    if (p.name.empty()) p.name = path.stem().string();
    return p;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.where(), std::string(e.what()).substr(e.where().size() + 2));
  }
}

namespace {

template <class T>
json function_to_json(const MinMaxFunction<T>& f) {
  json comps = json::array();
  for (const auto& c : f.components) {
    json cj;
    if (c.kind == ComponentKind::BallSupport) {
      const auto& b = std::get<BallSupportPiece<T>>(c.pieces.front());
      cj = {{"type", "ball_support"}, {"center", vector_to_json(b.center)}, {"radius", scalar_to_json(b.radius)}};
    } else {
      cj["type"] = c.kind == ComponentKind::MaxAffine ? "max_affine" : "max_quadratic";
      cj["pieces"] = json::array();
      for (const auto& g : c.pieces) {
        if (const auto* a = std::get_if<AffinePiece<T>>(&g)) {
          cj["pieces"].push_back({{"a", vector_to_json(a->a)}, {"b", scalar_to_json(a->b)}});
        } else {
          const auto& q = std::get<QuadraticPiece<T>>(g);
          json qm = json::array();
          for (const auto& row : q.q) qm.push_back(vector_to_json(Vector<T>(row)));
          cj["pieces"].push_back({{"Q", qm}, {"a", vector_to_json(q.a)}, {"b", scalar_to_json(q.b)}});
        }
      }
    }
    comps.push_back(std::move(cj));
  }
  return comps;
}

}  // namespace

json problem_to_json(const Problem& p) {
  json out;
  if (!p.name.empty()) out["name"] = p.name;
  out["dim"] = p.dim();
  out["mode"] = mode_name(p.mode);
  if (p.mode == Mode::Exact) {
    out["basepoint"] = vector_to_json(*p.basepoint_exact);
    out["components"] = function_to_json(*p.exact);
  } else {
    out["basepoint"] = vector_to_json(p.basepoint);
    out["components"] = function_to_json(p.function);
  }
  out["options"] = {{"tau", p.tau},
                    {"seed", p.oracle.seed},
                    {"radii", p.oracle.radii},
                    {"dirs_per_radius", p.oracle.dirs_per_radius},
                    {"outer_dirs", p.outer_dirs}};
  return out;
}

std::vector<std::string> json_diff(const json& expected, const json& actual, double tol, const std::string& path) {
  std::vector<std::string> out;
  const std::string here = path.empty() ? "<root>" : path;
  if (expected.is_number() && actual.is_number()) {
    const double a = expected.get<double>();
    const double b = actual.get<double>();
    if (std::abs(a - b) > tol * std::max({1.0, std::abs(a), std::abs(b)}))
      out.push_back(here + ": expected " + expected.dump() + ", got " + actual.dump());
    return out;
  }
  if (expected.type() != actual.type()) {
    out.push_back(here + ": expected " + expected.dump() + ", got " + actual.dump());
    return out;
  }
  if (expected.is_array()) {
    if (expected.size() != actual.size()) {
      out.push_back(here + ": expected " + std::to_string(expected.size()) + " entries, got " +
                    std::to_string(actual.size()));
      return out;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      auto sub = json_diff(expected[i], actual[i], tol, path + "[" + std::to_string(i) + "]");
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  if (expected.is_object()) {
    for (const auto& [k, v] : expected.items()) {
      const std::string p = path.empty() ? k : path + "." + k;
      if (!actual.contains(k)) {
        out.push_back(p + ": missing");
        continue;
      }
      auto sub = json_diff(v, actual[k], tol, p);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    for (const auto& [k, v] : actual.items())
      if (!expected.contains(k)) out.push_back((path.empty() ? k : path + "." + k) + ": unexpected field");
    return out;
  }
  if (expected != actual) out.push_back(here + ": expected " + expected.dump() + ", got " + actual.dump());
  return out;
}

namespace {

struct Frame {
  double xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  double size = 480, margin = 0.08;

  void include(double x, double y) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  double scale() const { return size * (1 - 2 * margin) / std::max(xmax - xmin, ymax - ymin); }
  double sx(double x) const { return size * margin + (x - xmin) * scale(); }
  double sy(double y) const { return size - size * margin - (y - ymin) * scale(); }
};

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

void bounds_of_union(const FaceUnion<double>& u, Frame& fr) {
  for (const auto& c : u.pieces) {
    if (c.is_polytope()) {
      for (const auto& v : c.as_polytope().vertices) fr.include(v[0], v[1]);
    } else if (c.is_ball()) {
      const auto& b = c.as_ball();
      fr.include(b.center[0] - b.radius, b.center[1] - b.radius);
      fr.include(b.center[0] + b.radius, b.center[1] + b.radius);
    } else {
      for (const auto& p : discretize(c, 0.05)) fr.include(p[0], p[1]);
    }
  }
}

std::vector<Vector<double>> hull_order(std::vector<Vector<double>> vs) {
  if (vs.size() < 3) return vs;
  Vector<double> c(2);
  for (const auto& v : vs) c += v;
  c *= 1.0 / static_cast<double>(vs.size());
  std::sort(vs.begin(), vs.end(), [&](const Vector<double>& a, const Vector<double>& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  return vs;
}

void draw_union(std::ostringstream& svg, const FaceUnion<double>& u, const Frame& fr, const std::string& color,
                double width, const std::string& fill) {
  for (const auto& c : u.pieces) {
    if (c.is_polytope()) {
      const auto vs = hull_order(c.as_polytope().vertices);
      if (vs.size() == 1) {
        svg << "<circle cx=\"" << fmt(fr.sx(vs[0][0])) << "\" cy=\"" << fmt(fr.sy(vs[0][1])) << "\" r=\""
            << fmt(width + 1.5) << "\" fill=\"" << color << "\"/>\n";
      } else if (vs.size() == 2) {
        svg << "<line x1=\"" << fmt(fr.sx(vs[0][0])) << "\" y1=\"" << fmt(fr.sy(vs[0][1])) << "\" x2=\""
            << fmt(fr.sx(vs[1][0])) << "\" y2=\"" << fmt(fr.sy(vs[1][1])) << "\" stroke=\"" << color
            << "\" stroke-width=\"" << fmt(width) << "\" stroke-linecap=\"round\"/>\n";
      } else {
        svg << "<polygon points=\"";
        for (const auto& v : vs) svg << fmt(fr.sx(v[0])) << "," << fmt(fr.sy(v[1])) << " ";
        svg << "\" fill=\"" << fill << "\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
      }
    } else if (c.is_ball()) {
      const auto& b = c.as_ball();
      svg << "<circle cx=\"" << fmt(fr.sx(b.center[0])) << "\" cy=\"" << fmt(fr.sy(b.center[1])) << "\" r=\""
          << fmt(b.radius * fr.scale()) << "\" fill=\"" << fill << "\" stroke=\"" << color << "\" stroke-width=\""
          << fmt(width) << "\"/>\n";
    } else {
      const auto pts = discretize(c, 0.01);
      svg << "<polyline points=\"";
      for (const auto& p : pts) svg << fmt(fr.sx(p[0])) << "," << fmt(fr.sy(p[1])) << " ";
      svg << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
      for (const auto& e : c.excluded)
        svg << "<circle cx=\"" << fmt(fr.sx(e[0])) << "\" cy=\"" << fmt(fr.sy(e[1])) << "\" r=\"" << fmt(width + 1)
            << "\" fill=\"white\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    }
  }
}

}  // namespace

std::string render_svg(const json& result, const SvgOptions& opts) {
  FaceUnion<double> subs, outer;
  std::vector<Vector<double>> cloud;
  if (result.contains("subdifferentials")) subs = union_from_json<double>(result["subdifferentials"], "subdifferentials");
  if (result.contains("outer_limit")) outer = union_from_json<double>(result["outer_limit"], "outer_limit");
  if (result.contains("cloud"))
    for (std::size_t i = 0; i < result["cloud"].size(); ++i)
      cloud.push_back(vector_from_json<double>(result["cloud"][i], "cloud[" + std::to_string(i) + "]"));
  auto planar = [](std::size_t d) { return d == 2; };
  for (const auto& c : subs.pieces)
    if (!planar(c.dimension())) throw std::invalid_argument("SVG output needs planar data");
  for (const auto& c : outer.pieces)
    if (!planar(c.dimension())) throw std::invalid_argument("SVG output needs planar data");
  for (const auto& p : cloud)
    if (!planar(p.size())) throw std::invalid_argument("SVG output needs planar data");

  Frame fr;
  fr.size = opts.size;
  fr.margin = opts.margin;
  bounds_of_union(subs, fr);
  bounds_of_union(outer, fr);
  for (const auto& p : cloud) fr.include(p[0], p[1]);

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.size << "\" height=\"" << opts.size
      << "\" viewBox=\"0 0 " << opts.size << " " << opts.size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"#999\" stroke-width=\"0.8\">\n";
  svg << "<line x1=\"" << fmt(fr.sx(fr.xmin)) << "\" y1=\"" << fmt(fr.sy(0)) << "\" x2=\"" << fmt(fr.sx(fr.xmax))
      << "\" y2=\"" << fmt(fr.sy(0)) << "\"/>\n";
  svg << "<line x1=\"" << fmt(fr.sx(0)) << "\" y1=\"" << fmt(fr.sy(fr.ymin)) << "\" x2=\"" << fmt(fr.sx(0))
      << "\" y2=\"" << fmt(fr.sy(fr.ymax)) << "\"/>\n";
  svg << "</g>\n";
  draw_union(svg, subs, fr, "#4a6fa5", 1.2, "#dbe4f0");
  for (const auto& p : cloud)
    svg << "<circle cx=\"" << fmt(fr.sx(p[0])) << "\" cy=\"" << fmt(fr.sy(p[1])) << "\" r=\"1.3\" fill=\"#c0392b\"/>\n";
  draw_union(svg, outer, fr, "black", 3.5, "#888");
  svg << "</svg>\n";
  return svg.str();
}

#define SUBDIFF_INSTANTIATE_IO(T)                                                      \
  template json vector_to_json(const Vector<T>&);                                      \
  template Vector<T> vector_from_json(const json&, const std::string&);                \
  template json piece_to_json(const ConvexPiece<T>&);                                  \
  template ConvexPiece<T> piece_from_json(const json&, const std::string&);            \
  template json union_to_json(const FaceUnion<T>&);                                    \
  template FaceUnion<T> union_from_json(const json&, const std::string&);              \
  template json family_to_json(const IndexFamily<T>&);                                 \
  template json cells_to_json(const std::vector<DirectionCell<T>>&);                   \
  template json lower_bound_to_json(const LowerBound<T>&);

SUBDIFF_INSTANTIATE_IO(double)
SUBDIFF_INSTANTIATE_IO(Rational)

}  // namespace subdiff::io
