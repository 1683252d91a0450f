#include "subdiff/checks.hpp"

#include "subdiff/commands.hpp"
#include "subdiff/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace subdiff::checks {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Golden {
  const char* fixture;
  const char* verb;
};

constexpr Golden kGoldens[] = {
    {"marco", "dfamily"},        {"marco_modified", "dfamily"}, {"sliced", "dfamily"},
    {"minmax", "outer"},         {"marco", "outer"},            {"sliced", "outer"},
    {"paraboloids", "outer"},    {"disks", "outer"},            {"disks_modified", "outer"},
    {"minmax", "erbound"},       {"paraboloids", "erbound"},    {"abs", "erbound"},
    {"max_x_2x", "erbound"},
};

/// Runs `body`, which fills detail lines and returns pass/fail, under a time limit.
CheckResult timed(int criterion, std::string name, double limit_seconds,
                  const std::function<bool(std::vector<std::string>&)>& body) {
  CheckResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  std::vector<std::string> notes;
  const auto start = std::chrono::steady_clock::now();
  bool ok = false;
  try {
    ok = body(notes);
  } catch (const std::exception& e) {
    notes.push_back(std::string("exception: ") + e.what());
    ok = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds >= limit_seconds) {
    std::ostringstream os;
    os << "took " << r.seconds << " s, limit " << limit_seconds << " s";
    notes.push_back(os.str());
    ok = false;
  }
  r.passed = ok;
  std::ostringstream os;
  for (std::size_t i = 0; i < notes.size(); ++i) os << (i ? "; " : "") << notes[i];
  r.detail = os.str();
  return r;
}

io::Problem load(const fs::path& dir, const std::string& name) { return io::load_problem(dir / (name + ".json")); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

struct SizeThenLex {
  bool operator()(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) const {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }
};

using Family = std::set<std::vector<std::size_t>, SizeThenLex>;

template <class T>
Family family_set(const IndexFamily<T>& fam) {
  Family out;
  for (const auto& s : fam.subsets) out.insert(s.indices);
  return out;
}

std::string family_text(const Family& fam) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& s : fam) {
    os << (first ? "" : ",") << "{";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i] + 1;
    os << "}";
    first = false;
  }
  os << "}";
  return os.str();
}

/// Converts one-based index lists to the zero-based form used internally.
Family one_based(std::initializer_list<std::vector<std::size_t>> lists) {
  Family out;
  for (auto l : lists) {
    for (auto& i : l) --i;
    out.insert(l);
  }
  return out;
}

Vector<Rational> rvec(std::initializer_list<const char*> cs) {
  std::vector<Rational> v;
  for (auto c : cs) v.push_back(parse_rational(c));
  return Vector<Rational>(v);
}

std::optional<double> directed_max(const HausdorffResult& h, bool union_to_cloud) {
  if (!std::holds_alternative<DirectedHausdorff>(h)) return std::nullopt;
  const auto& d = std::get<DirectedHausdorff>(h);
  return union_to_cloud ? d.union_to_cloud : d.cloud_to_union;
}

OracleOptions oracle_opts(const io::Problem& p) {
  OracleOptions o = p.oracle;
  o.tau = p.tau;
  return o;
}

FaceUnion<double> closed_outer(const io::Problem& p) {
  if (p.exact) {
    const auto set = outer_limit_exact(*p.exact, *p.basepoint_exact, true, p.tau).set;
    return io::union_from_json<double>(io::union_to_json(set), "outer_limit");
  }
  return outer_limit_exact(p.function, p.basepoint, true, p.tau).set;
}

/// Random planar max-affine gradients with small rational coordinates.
std::vector<Vector<Rational>> random_gradients(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(2, 8), num(-6, 6), den(1, 4);
  const int k = count(rng);
  std::vector<Vector<Rational>> out;
  for (int i = 0; i < k; ++i) out.push_back(Vector<Rational>{Rational(num(rng), den(rng)), Rational(num(rng), den(rng))});
  return out;
}

template <class T>
bool replay_all_subsets(const std::vector<Vector<T>>& grads, std::vector<std::string>& notes, const std::string& label) {
  const std::size_t k = grads.size();
  const auto fam = family_set(enumerate_D(grads));
  bool ok = true;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    lp::StrictSystem<T> sys;
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < k; ++j) {
      if (mask >> j & 1) {
        sys.equalities.push_back(grads[j]);
        idx.push_back(j);
      } else {
        sys.strict.push_back(grads[j]);
      }
    }
    const auto res = lp::strict_feasible(sys);
    const bool certified = res.feasible ? lp::replay_certificate(sys, res.certificate)
                                        : res.farkas && lp::verify_farkas(sys, *res.farkas);
    if (!certified || res.feasible != (fam.count(idx) > 0)) {
      notes.push_back(label + ": certificate failed for subset mask " + std::to_string(mask));
      ok = false;
    }
  }
  return ok;
}

template <class T>
double dd_of(const MinMaxFunction<T>& f, const Vector<T>& x, const Vector<T>& p) {
  return to_double(directional_derivative(f, x, p));
}

/// Subgradients to test: the Frechet subdifferential's vertices or, for ball
/// pairs the intersection routine does not handle, discretized points of one
/// component subdifferential that lie in every other one.
template <class T>
std::vector<ConvexPiece<T>> frechet_pieces(const MinMaxFunction<T>& f, const Vector<T>& x, double tau) {
  try {
    auto fr = frechet_subdifferential(f, x, tau);
    if (!fr) return {};
    return {*fr};
  } catch (const UnsupportedPair&) {
    std::vector<ConvexPiece<T>> subs;
    for (auto i : active_components(f, x, tau)) subs.push_back(component_subdifferential(f.components[i], x, tau));
    std::vector<ConvexPiece<T>> out;
    for (const auto& v : discretize(subs.front(), 1e-2)) {
      const auto vt = from_double<T>(v);
      if (std::all_of(subs.begin() + 1, subs.end(), [&](const auto& s) { return contains(s, vt); }))
        out.push_back(ConvexPiece<T>::point(vt));
    }
    return out;
  }
}

template <class T>
bool subgradient_inequality(const MinMaxFunction<T>& f, const Vector<T>& x, double tau,
                            const std::vector<Vector<double>>& dirs, double tol, std::size_t& tested) {
  const auto pieces = frechet_pieces(f, x, is_exact_v<T> ? 0.0 : tau);
  tested = pieces.size();
  for (const auto& pd : dirs) {
    const auto p = from_double<T>(pd);
    const T dd = directional_derivative(f, x, p, is_exact_v<T> ? 0.0 : tau);
    for (const auto& c : pieces) {
      const T s = support_value(c, p);
      if (to_double(T(s - dd)) > tol * std::max(1.0, std::abs(to_double(dd)))) return false;
    }
  }
  return true;
}

template <class T>
bool homogeneity(const MinMaxFunction<T>& f, const Vector<T>& x, const std::vector<Vector<double>>& dirs) {
  const std::vector<T> scales{T(1) / T(3), T(2), T(7) / T(2)};
  for (const auto& pd : dirs) {
    const auto p = from_double<T>(pd);
    const T base = directional_derivative(f, x, p);
    for (const auto& s : scales) {
      const T scaled = directional_derivative(f, x, Vector<T>(p) * s);
      if constexpr (is_exact_v<T>) {
        if (scaled != s * base) return false;
      } else {
        if (std::abs(scaled - s * base) > 1e-9 * std::max(1.0, std::abs(scaled))) return false;
      }
    }
  }
  return true;
}

template <class T>
bool min_norm_certificates(const FaceUnion<T>& u, std::size_t& checked) {
  for (const auto& c : u.pieces) {
    if (!c.is_polytope()) continue;
    const auto& verts = c.as_polytope().vertices;
    const auto mnp = lp::min_norm_point(verts);
    for (const auto& v : verts) {
      const T gap = dot(mnp.point, v - mnp.point);
      if constexpr (is_exact_v<T>) {
        if (gap < 0) return false;
      } else {
        if (gap < -1e-9) return false;
      }
    }
    std::vector<Vector<double>> dv;
    for (const auto& v : verts) dv.push_back(to_double(v));
    const auto wolfe = lp::min_norm_point_wolfe(dv);
    if (std::abs(wolfe.norm - mnp.norm) > 1e-9) return false;
    ++checked;
  }
  return true;
}

}  // namespace

bool AcceptanceReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::string AcceptanceReport::tap() const {
  std::ostringstream os;
  os << "1.." << checks.size() << "\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    os << (c.passed ? "ok " : "not ok ") << i + 1 << " - " << c.name;
    if (c.criterion) os << " (" << fmt(c.seconds) << " s)";
    os << "\n";
    if (!c.detail.empty()) os << "  # " << c.detail << "\n";
  }
  return os.str();
}

const std::vector<std::string>& required_fixtures() {
  static const std::vector<std::string> names{"marco", "marco_modified", "minmax",         "sliced",  "paraboloids",
                                              "disks", "disks_modified", "abs", "max_x_2x"};
  return names;
}

std::vector<CheckResult> check_fixtures_present(const fs::path& dir) {
  std::vector<CheckResult> out;
  for (const auto& name : required_fixtures()) {
    CheckResult r;
    r.name = "fixture " + name + ".json present";
    r.passed = fs::is_regular_file(dir / (name + ".json"));
    if (!r.passed) r.detail = "missing fixture: " + (dir / (name + ".json")).string();
    out.push_back(r);
  }
  return out;
}

std::string golden_result(const fs::path& dir, const std::string& fixture, const std::string& verb) {
  const auto p = load(dir, fixture);
  json result;
  if (verb == "outer") {
    commands::OuterRequest req;
    req.closure = true;
    result = commands::outer(p, req);
  } else if (verb == "dfamily") {
    result = commands::dfamily(p);
  } else if (verb == "erbound") {
    result = commands::erbound(p, {});
  } else {
    throw std::invalid_argument("no golden output for verb " + verb);
  }
  return result.dump(2) + "\n";
}

std::vector<CheckResult> check_goldens(const fs::path& dir) {
  std::vector<CheckResult> out;
  for (const auto& g : kGoldens) {
    CheckResult r;
    const std::string file = std::string(g.fixture) + "." + g.verb + ".json";
    r.name = "golden " + file;
    const fs::path path = dir / "expected" / file;
    try {
      if (!fs::is_regular_file(dir / (std::string(g.fixture) + ".json"))) {
        r.detail = "missing fixture: " + std::string(g.fixture) + ".json";
      } else if (!fs::is_regular_file(path)) {
        r.detail = "missing expected output: " + path.string();
      } else {
        const auto expected = io::load_json(path);
        const auto actual = json::parse(golden_result(dir, g.fixture, g.verb));
        const auto diff = io::json_diff(expected, actual);
        r.passed = diff.empty();
        std::ostringstream os;
        for (std::size_t i = 0; i < diff.size() && i < 10; ++i) os << (i ? "; " : "") << diff[i];
        if (diff.size() > 10) os << "; ... " << diff.size() - 10 << " more";
        r.detail = os.str();
      }
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    out.push_back(r);
  }
  return out;
}

CheckResult criterion_1(const fs::path& dir) {
  return timed(1, "criterion 1: D family of the marco fixture and its modification", 1.0, [&](auto& notes) {
    const Family expected = one_based({{1}, {2}, {4}, {5}, {1, 2}, {1, 5}, {4, 5}});
    Family expected_mod = expected;
    expected_mod.erase({3});
    expected_mod.erase({3, 4});
    bool ok = true;
    for (const auto& [name, want] : {std::pair{std::string("marco"), expected}, std::pair{std::string("marco_modified"), expected_mod}}) {
      const auto p = load(dir, name);
      if (!p.exact) throw std::runtime_error(name + " must load in exact mode");
      const auto grads = basepoint_gradients(*p.exact, *p.basepoint_exact, 0.0);
      const auto got = family_set(enumerate_D(grads));
      notes.push_back(name + " D = " + family_text(got));
      ok = ok && got == want && grads.size() == 6;
    }
    return ok;
  });
}

CheckResult criterion_2(const fs::path& dir) {
  return timed(2, "criterion 2: min-max outer limit, exact and sampled", 10.0, [&](auto& notes) {
    const auto p = load(dir, "minmax");
    if (!p.exact) throw std::runtime_error("minmax must load in exact mode");
    const auto got = outer_limit_exact(*p.exact, *p.basepoint_exact, true).set;
    FaceUnion<Rational> want;
    want.pieces.push_back(ConvexPiece<Rational>::polytope({rvec({"2", "1"}), rvec({"0", "1"})}));
    want.pieces.push_back(ConvexPiece<Rational>::polytope({rvec({"2", "1"}), rvec({"0", "-1"})}));
    want.pieces.push_back(ConvexPiece<Rational>::point(rvec({"2", "-1"})));
    const bool exact_ok = faces_equal(got, want);
    notes.push_back(std::string("exact vertex sets ") + (exact_ok ? "equal" : "differ"));
    auto opts = oracle_opts(p);
    opts.radii = {1e-1, 1e-2, 1e-3, 1e-4};
    const auto cloud = sample_limsup(p.function, p.basepoint, opts);
    const auto h = hausdorff_cloud(closed_outer(p), cloud.shell(1e-4));
    const auto a = directed_max(h, true), b = directed_max(h, false);
    const bool cloud_ok = a && b && std::max(*a, *b) <= 0.05;
    if (a && b) notes.push_back("oracle symmetric Hausdorff at r=1e-4: " + fmt(std::max(*a, *b)));
    else notes.push_back("oracle cloud at r=1e-4 is empty");
    return exact_ok && cloud_ok;
  });
}

CheckResult criterion_3(const fs::path& dir) {
  return timed(3, "criterion 3: sliced fixture strict inclusion", 10.0, [&](auto& notes) {
    const auto p = load(dir, "sliced");
    if (!p.exact) throw std::runtime_error("sliced must load in exact mode");
    const auto grads = basepoint_gradients(*p.exact, *p.basepoint_exact, 0.0);
    const auto fam = enumerate_D(grads);
    const auto got = family_set(fam);
    const bool d_ok = got == one_based({{2}});
    notes.push_back("D = " + family_text(got));
    FaceUnion<Rational> one;
    one.pieces.push_back(ConvexPiece<Rational>::point(rvec({"1", "1"})));
    const bool union_ok = faces_equal(d_union(grads, fam), one);
    notes.push_back(std::string("d_union ") + (union_ok ? "= {(1,1)}" : "differs from {(1,1)}"));
    const auto cloud = sample_limsup(p.function, p.basepoint, oracle_opts(p));
    FaceUnion<double> seg;
    seg.pieces.push_back(ConvexPiece<double>::polytope({Vector<double>{0.5, 0.5}, Vector<double>{1.0, 1.0}}));
    const auto cover = directed_max(hausdorff_cloud(seg, cloud.limit_points()), true);
    const bool cloud_ok = cover && *cover <= 0.05;
    notes.push_back(cover ? "co{(1/2,1/2),(1,1)} to cloud: " + fmt(*cover) : std::string("empty cloud"));
    return d_ok && union_ok && cloud_ok;
  });
}

CheckResult criterion_4(const fs::path& dir) {
  return timed(4, "criterion 4: paraboloids fixture", 10.0, [&](auto& notes) {
    const auto p = load(dir, "paraboloids");
    const auto lhs = p.exact ? closed_outer(p) : outer_limit_exact(p.function, p.basepoint, false).set;
    const bool empty_ok = lhs.empty();
    notes.push_back(std::string("exact outer limit ") + (empty_ok ? "empty" : "nonempty"));
    const auto pts = sample_limsup(p.function, p.basepoint, oracle_opts(p)).limit_points();
    const Vector<double> c1{1.0, 0.0}, c2{-2.0, 0.0};
    double worst = 0.0;
    bool hit1 = false, hit2 = false;
    for (const auto& v : pts) {
      const double d1 = norm(v - c1), d2 = norm(v - c2);
      worst = std::max(worst, std::min(d1, d2));
      hit1 = hit1 || d1 <= 1e-2;
      hit2 = hit2 || d2 <= 1e-2;
    }
    const bool cloud_ok = !pts.empty() && worst <= 1e-2 && hit1 && hit2;
    notes.push_back(std::to_string(pts.size()) + " cloud points, farthest from {(1,0),(-2,0)}: " + fmt(worst));
    const auto report = commands::erbound(p, {});
    const bool inf_ok = report["lower_bound"]["infinite"] == true;
    notes.push_back(std::string("erbound lower bound ") + (inf_ok ? "+inf" : "finite"));
    return empty_ok && cloud_ok && inf_ok;
  });
}

CheckResult criterion_5(const fs::path& dir) {
  return timed(5, "criterion 5: disks fixtures", 20.0, [&](auto& notes) {
    auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
    auto arcs_of = [](const FaceUnion<double>& u) {
      std::vector<std::pair<Arc, bool>> out;
      for (const auto& c : u.pieces)
        if (c.is_arc()) out.emplace_back(c.as_arc(), c.closed);
      return out;
    };
    const auto p = load(dir, "disks");
    const auto lhs = outer_limit_exact(p.function, p.basepoint, false).set;
    const auto arcs = arcs_of(lhs);
    bool first_ok = lhs.pieces.size() == 2 && arcs.size() == 2;
    for (const auto& [a, closed] : arcs) {
      const bool left = near(a.center[0], -0.5) && near(a.center[1], 0.0);
      const bool right = near(a.center[0], 0.5) && near(a.center[1], 0.0);
      const double b = left ? -kPi / 2 : kPi / 2;
      first_ok = first_ok && !closed && (left || right) && near(a.radius, 1.0) && near(a.theta_begin, b) &&
                 near(a.theta_end, b + kPi);
    }
    notes.push_back(std::string("open semicircles ") + (first_ok ? "match" : "do not match"));
    const auto cloud = sample_limsup(p.function, p.basepoint, oracle_opts(p)).limit_points();
    const auto h = hausdorff_cloud(closure(lhs), cloud);
    const auto a = directed_max(h, true), b = directed_max(h, false);
    const bool cloud_ok = a && b && std::max(*a, *b) <= 0.05;
    notes.push_back(a && b ? "oracle symmetric Hausdorff: " + fmt(std::max(*a, *b)) : std::string("empty cloud"));

    const auto q = load(dir, "disks_modified");
    const auto lhs2 = outer_limit_exact(q.function, q.basepoint, false).set;
    const auto arcs2 = arcs_of(lhs2);
    std::size_t semis = 0, others = 0, boundary_hits = 0;
    for (const auto& [arc, closed] : arcs2) {
      if (near(arc.center[0], 0.5) && near(arc.theta_begin, -kPi / 2) && near(arc.theta_end, kPi / 2)) {
        ++semis;
      } else if (near(arc.center[0], 1.5)) {
        ++others;
        for (double t : {arc.theta_begin, arc.theta_end})
          if (near(arc.radius * std::cos(t), -2.0 / 3.0)) ++boundary_hits;
      }
    }
    const bool second_ok = lhs2.pieces.size() == 3 && semis == 1 && others == 2 && boundary_hits == 2;
    notes.push_back("modified: " + std::to_string(semis) + " semicircle, " + std::to_string(others) + " arcs, " +
                    std::to_string(boundary_hits) + " endpoints at p_x = -2/3");
    return first_ok && cloud_ok && second_ok;
  });
}

CheckResult criterion_6(std::uint64_t seed) {
  return timed(6, "criterion 6: D-based union equals direction sweep on 50 random instances", 30.0, [&](auto& notes) {
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    for (int i = 0; i < 50; ++i) {
      const auto grads = random_gradients(rng);
      if (!check_identity_affine(grads).equal) ++failures;
    }
    notes.push_back("seed " + std::to_string(seed) + ", " + std::to_string(failures) + " mismatches");
    return failures == 0;
  });
}

CheckResult criterion_7(const fs::path& dir) {
  return timed(7, "criterion 7: empirical error bound modulus versus outer-limit distance", 30.0, [&](auto& notes) {
    bool ok = true;
    for (const auto& name : required_fixtures()) {
      const auto p = load(dir, name);
      const auto outer = closed_outer(p);
      if (outer.empty()) continue;
      const auto lb = lower_bound_from_outer(outer);
      const auto opts = oracle_opts(p);
      const auto est = empirical_error_bound_modulus(p.function, p.basepoint, opts);
      const auto cloud = sample_limsup(p.function, p.basepoint, opts).limit_points();
      const auto v = check_error_bound_inequality(lb.distance, lower_bound_from_cloud(cloud),
                                                  p.function.piecewise_affine(), est.estimate);
      const bool fixture_ok = est.estimate && v.satisfied;
      notes.push_back(name + ": Er~" + (est.estimate ? fmt(*est.estimate) : std::string("none")) + " vs " +
                      (v.reference ? fmt(*v.reference) : std::string("none")) + " (" + v.reference_kind + ")");
      ok = ok && fixture_ok;
      for (const auto& [convex, target] : {std::pair{"abs", 1.0}, std::pair{"max_x_2x", 2.0}}) {
        if (name != convex) continue;
        const bool conv_ok = est.estimate && std::abs(*est.estimate - target) <= 1e-3 &&
                             std::abs(*est.estimate - lb.distance) <= 0.02;
        if (!conv_ok) notes.push_back(name + ": estimate not within 1e-3 of " + fmt(target));
        ok = ok && conv_ok;
      }
    }
    return ok;
  });
}

CheckResult criterion_8(const fs::path& dir) {
  return timed(8, "criterion 8: property suites", 60.0, [&](auto& notes) {
    bool ok = true;
    std::size_t seed = 7;
    for (const auto& name : required_fixtures()) {
      const auto p = load(dir, name);
      const auto dirs = sample_directions(p.dim(), 1000, seed++);
      const std::vector<Vector<double>> few(dirs.begin(), dirs.begin() + std::min<std::size_t>(dirs.size(), 50));
      std::size_t tested = 0;
      bool homog, subgrad;
      if (p.exact) {
        homog = homogeneity(*p.exact, *p.basepoint_exact, few);
        subgrad = subgradient_inequality(*p.exact, *p.basepoint_exact, 0.0, dirs, 1e-9, tested);
      } else {
        homog = homogeneity(p.function, p.basepoint, few);
        subgrad = subgradient_inequality(p.function, p.basepoint, p.tau, dirs, 1e-6, tested);
      }
      bool fd = true;
      const double f0 = evaluate(p.function, p.basepoint);
      for (const auto& d : dirs) {
        const double t = 1e-4;
        const double quotient = (evaluate(p.function, p.basepoint + d * t) - f0) / t;
        const double dd = directional_derivative(p.function, p.basepoint, d, p.tau);
        if (std::abs(quotient - dd) >= 1e-3 * std::max(1.0, std::abs(dd))) fd = false;
      }
      std::size_t mnp = 0;
      bool mnp_ok = true;
      if (p.dim() <= 2) {
        if (p.exact) mnp_ok = min_norm_certificates(outer_limit_exact(*p.exact, *p.basepoint_exact, true).set, mnp);
        else mnp_ok = min_norm_certificates(outer_limit_exact(p.function, p.basepoint, true, p.tau).set, mnp);
      }
      bool replay = true;
      if (p.exact && p.exact->components.size() == 1 && p.exact->components.front().kind != ComponentKind::BallSupport)
        replay = replay_all_subsets(basepoint_gradients(*p.exact, *p.basepoint_exact, 0.0), notes, name);
      if (p.exact && p.exact->components.size() > 1)
        for (std::size_t i = 0; i < p.exact->components.size(); ++i) {
          MinMaxFunction<Rational> single{p.exact->dim, {p.exact->components[i]}};
          if (single.components.front().kind == ComponentKind::BallSupport) continue;
          replay = replay_all_subsets(basepoint_gradients(single, *p.basepoint_exact, 0.0), notes,
                                      name + " component " + std::to_string(i + 1)) && replay;
        }
      const bool fixture_ok = homog && subgrad && fd && mnp_ok && replay;
      if (!fixture_ok)
        notes.push_back(name + ": homogeneity " + (homog ? "ok" : "FAIL") + ", subgradient " + (subgrad ? "ok" : "FAIL") +
                        ", finite difference " + (fd ? "ok" : "FAIL") + ", min-norm " + (mnp_ok ? "ok" : "FAIL") +
                        ", certificates " + (replay ? "ok" : "FAIL"));
      else
        notes.push_back(name + " ok (" + std::to_string(tested) + " subgradient pieces, " + std::to_string(mnp) +
                        " min-norm certificates)");
      ok = ok && fixture_ok;
    }
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) ok = replay_all_subsets(random_gradients(rng), notes, "random " + std::to_string(i)) && ok;
    return ok;
  });
}

AcceptanceReport run_acceptance(const fs::path& dir) {
  AcceptanceReport report;
  for (auto& r : check_fixtures_present(dir)) report.checks.push_back(std::move(r));
  for (auto& r : check_goldens(dir)) report.checks.push_back(std::move(r));
  report.checks.push_back(criterion_1(dir));
  report.checks.push_back(criterion_2(dir));
  report.checks.push_back(criterion_3(dir));
  report.checks.push_back(criterion_4(dir));
  report.checks.push_back(criterion_5(dir));
  report.checks.push_back(criterion_6());
  report.checks.push_back(criterion_7(dir));
  report.checks.push_back(criterion_8(dir));
  return report;
}

}  // namespace subdiff::checks
