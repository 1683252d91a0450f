#include "subdiff/commands.hpp"

#include "subdiff/error_bound.hpp"

namespace subdiff::commands {

namespace {

template <class T>
json exact_outer(const MinMaxFunction<T>& f, const Vector<T>& xbar, double tau, bool closure, json& out) {
  const auto res = outer_limit_exact(f, xbar, closure, tau);
  out["outer_limit"] = io::union_to_json(res.set);
  out["closure_applied"] = res.closure_applied;
  out["cells"] = io::cells_to_json(res.cells);
  out["cells_stable"] = std::all_of(res.cells.begin(), res.cells.end(), [](const auto& c) { return c.stable; });
  return out;
}

template <class T>
std::optional<json> family_if_available(const MinMaxFunction<T>& f, const Vector<T>& xbar, double tau) {
  if (f.components.size() != 1 || f.components.front().kind == ComponentKind::BallSupport) return std::nullopt;
  const auto grads = basepoint_gradients(f, xbar, tau);
  if (grads.size() > 20) return std::nullopt;
  return io::family_to_json(enumerate_D(grads));
}

template <class T>
json family_doc(const std::vector<Vector<T>>& grads) {
  json g = json::array();
  for (const auto& v : grads) g.push_back(io::vector_to_json(v));
  const auto fam = enumerate_D(grads);
  return {{"gradients", g},
          {"d_family", io::family_to_json(fam)},
          {"d_union", io::union_to_json(d_union(grads, fam))}};
}

template <class T>
json subdiff_union(const MinMaxFunction<T>& f, const Vector<T>& xbar, double tau) {
  FaceUnion<T> u;
  const double t = is_exact_v<T> ? 0.0 : tau;
  for (auto i : active_components(f, xbar, t)) u.pieces.push_back(component_subdifferential(f.components[i], xbar, t));
  return io::union_to_json(u);
}

std::optional<FaceUnion<double>> closed_outer_double(const io::Problem& p) {
  if (p.dim() > 2) return std::nullopt;
  if (p.exact) {
    const auto set = outer_limit_exact(*p.exact, *p.basepoint_exact, true, p.tau).set;
    return io::union_from_json<double>(io::union_to_json(set), "outer_limit");
  }
  return outer_limit_exact(p.function, p.basepoint, true, p.tau).set;
}

OracleOptions oracle_options(const io::Problem& p, std::optional<std::uint64_t> seed) {
  OracleOptions o = p.oracle;
  o.tau = p.tau;
  if (seed) o.seed = *seed;
  return o;
}

}  // namespace

json basepoint_subdifferentials(const io::Problem& p) {
  return p.exact ? subdiff_union(*p.exact, *p.basepoint_exact, p.tau) : subdiff_union(p.function, p.basepoint, p.tau);
}

json outer(const io::Problem& p, const OuterRequest& req) {
  json out{{"problem", p.name}, {"arithmetic", io::mode_name(p.mode)}};
  out["subdifferentials"] = basepoint_subdifferentials(p);
  if (req.mode == OuterMode::Exact) {
    out["mode"] = "exact2d";
    if (p.exact) {
      exact_outer(*p.exact, *p.basepoint_exact, p.tau, req.closure, out);
      if (auto fam = family_if_available(*p.exact, *p.basepoint_exact, p.tau)) out["d_family"] = *fam;
    } else {
      exact_outer(p.function, p.basepoint, p.tau, req.closure, out);
      if (auto fam = family_if_available(p.function, p.basepoint, p.tau)) out["d_family"] = *fam;
    }
    return out;
  }
  const std::uint64_t seed = req.seed.value_or(p.oracle.seed);
  const std::size_t dirs = req.dirs.value_or(p.outer_dirs);
  const auto s = outer_limit_sampled(p.function, p.basepoint, dirs, seed, 1e-2, p.tau);
  out["mode"] = "sample";
  out["seed"] = seed;
  out["directions"] = s.directions;
  out["positive_directions"] = s.positive_directions;
  out["skipped_unsupported"] = s.skipped_unsupported;
  json cloud = json::array();
  for (const auto& v : s.cloud) cloud.push_back(io::vector_to_json(v));
  out["cloud"] = cloud;
  if (auto exact = closed_outer_double(p)) out["hausdorff_to_exact"] = io::hausdorff_to_json(hausdorff_cloud(*exact, s.cloud));
  return out;
}

json dfamily(const io::Problem& p) {
  json out{{"problem", p.name}, {"arithmetic", io::mode_name(p.mode)}};
  const json doc = p.exact ? family_doc(basepoint_gradients(*p.exact, *p.basepoint_exact, p.tau))
                           : family_doc(basepoint_gradients(p.function, p.basepoint, p.tau));
  out.update(doc);
  return out;
}

json dfamily_from_gradients(const json& doc) {
  if (!doc.is_object() || !doc.contains("gradients") || !doc["gradients"].is_array())
    throw io::ParseError("gradients", "expected an array of vectors");
  const json& g = doc["gradients"];
  std::vector<Vector<Rational>> grads;
  for (std::size_t i = 0; i < g.size(); ++i)
    grads.push_back(io::vector_from_json<Rational>(g[i], "gradients[" + std::to_string(i) + "]"));
  for (const auto& v : grads)
    if (v.size() != grads.front().size()) throw io::ParseError("gradients", "all gradients need the same dimension");
  json out{{"arithmetic", "exact"}};
  out.update(family_doc(grads));
  return out;
}

json erbound(const io::Problem& p, const ErboundRequest& req) {
  json out{{"problem", p.name}, {"arithmetic", io::mode_name(p.mode)}, {"piecewise_affine", p.function.piecewise_affine()}};
  std::optional<double> outer_distance;
  if (p.dim() <= 2) {
    if (p.exact) {
      const auto set = outer_limit_exact(*p.exact, *p.basepoint_exact, true, p.tau).set;
      const auto lb = lower_bound_from_outer(set);
      out["lower_bound"] = io::lower_bound_to_json(lb);
      if (!lb.infinite) outer_distance = lb.distance;
    } else {
      const auto set = outer_limit_exact(p.function, p.basepoint, true, p.tau).set;
      const auto lb = lower_bound_from_outer(set);
      out["lower_bound"] = io::lower_bound_to_json(lb);
      if (!lb.infinite) outer_distance = lb.distance;
    }
    out["outer_limit_source"] = "exact2d";
  } else {
    const auto s = outer_limit_sampled(p.function, p.basepoint, p.outer_dirs, req.seed.value_or(p.oracle.seed), 1e-2, p.tau);
    const auto d = lower_bound_from_cloud(s.cloud);
    out["lower_bound"] = d ? json{{"infinite", false}, {"value", *d}} : json{{"infinite", true}, {"value", nullptr}};
    if (d) outer_distance = d;
    out["outer_limit_source"] = "sample";
  }
  if (req.empirical) {
    const auto opts = oracle_options(p, req.seed);
    const auto est = empirical_error_bound_modulus(p.function, p.basepoint, opts);
    const auto cloud = sample_limsup(p.function, p.basepoint, opts);
    const auto cloud_distance = lower_bound_from_cloud(cloud.limit_points());
    out["empirical"] = io::estimate_to_json(est);
    out["cloud_lower_bound"] = cloud_distance ? json(*cloud_distance) : json(nullptr);
    const auto verdict = check_error_bound_inequality(outer_distance, cloud_distance, p.function.piecewise_affine(),
                                                      est.estimate);
    out["inequality"] = {{"reference", verdict.reference ? json(*verdict.reference) : json(nullptr)},
                         {"reference_kind", verdict.reference_kind},
                         {"slack", 0.02},
                         {"satisfied", verdict.reference && est.estimate ? json(verdict.satisfied) : json(nullptr)}};
  }
  return out;
}

json oracle(const io::Problem& p, const OracleRequest& req) {
  OracleOptions opts = oracle_options(p, req.seed);
  if (req.radii) opts.radii = *req.radii;
  if (req.dirs) opts.dirs_per_radius = *req.dirs;
  opts.validate();
  const auto cloud = sample_limsup(p.function, p.basepoint, opts);
  const auto est = empirical_error_bound_modulus(p.function, p.basepoint, opts);
  json out{{"problem", p.name}, {"dirs_per_radius", opts.dirs_per_radius}};
  out.update(io::cloud_to_json(cloud));
  const json e = io::estimate_to_json(est);
  out["per_radius_min_ratio"] = e["per_radius_min_ratio"];
  out["er_estimate"] = e["er_estimate"];
  out["er_radius_used"] = e["radius_used"];
  out["er_nonincreasing"] = e["nonincreasing"];
  if (auto exact = closed_outer_double(p)) out["hausdorff_to_exact"] = io::hausdorff_to_json(hausdorff_cloud(*exact, cloud.limit_points()));
  return out;
}

}  // namespace subdiff::commands
