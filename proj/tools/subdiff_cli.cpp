// subdiff: outer limits of subdifferentials for min-max functions.
//
// Exit codes: 0 ok, 1 check failure, 2 parse error, 3 unsupported mode,
// 4 enumeration cap.

#include "subdiff/checks.hpp"
#include "subdiff/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using subdiff::io::json;

enum Exit { kOk = 0, kCheckFailed = 1, kParse = 2, kUnsupported = 3, kCap = 4 };

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const json& result, const std::string& out_path, const std::string& svg_path) {
  write_text(out_path, result.dump(2) + "\n");
  if (!svg_path.empty()) write_text(svg_path, subdiff::io::render_svg(result));
}

/// --seed wins over SUBDIFF_SEED, which wins over the problem file.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  if (const char* env = std::getenv("SUBDIFF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw subdiff::io::ParseError("SUBDIFF_SEED", "expected an unsigned integer");
    }
  }
  return std::nullopt;
}

/// Accepts either a problem file or a bare {"gradients": [...]} document.
json run_dfamily(const std::string& path) {
  const json doc = subdiff::io::load_json(path);
  if (doc.is_object() && doc.contains("gradients") && !doc.contains("components"))
    return subdiff::commands::dfamily_from_gradients(doc);
  return subdiff::commands::dfamily(subdiff::io::load_problem(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outer limits of Frechet subdifferentials for min-max functions"};
  app.require_subcommand(1);

  std::string problem, out, svg, mode = "exact2d", fixtures = "fixtures";
  std::optional<std::size_t> dirs;
  std::optional<std::uint64_t> seed;
  std::vector<double> radii;
  bool closure = false, empirical = false;

  auto* outer = app.add_subcommand("outer", "Outer limit of subdifferentials at the basepoint");
  outer->add_option("problem", problem, "Problem JSON file")->required();
  outer->add_option("--mode", mode, "exact2d or sample")->check(CLI::IsMember({"exact2d", "sample"}));
  outer->add_option("--dirs", dirs, "Number of sampled directions (sample mode)");
  outer->add_flag("--closure", closure, "Close relatively open pieces");
  outer->add_option("--seed", seed, "Direction sampling seed");
  outer->add_option("--out", out, "Result JSON path (default stdout)");
  outer->add_option("--svg", svg, "Also write an SVG plot");

  auto* dfam = app.add_subcommand("dfamily", "Consistent index subsets D with certificates");
  dfam->add_option("problem", problem, "Problem JSON or {\"gradients\": [...]}")->required();
  dfam->add_option("--out", out, "Result JSON path (default stdout)");

  auto* erb = app.add_subcommand("erbound", "Lower bound on the error bound modulus");
  erb->add_option("problem", problem, "Problem JSON file")->required();
  erb->add_flag("--empirical", empirical, "Add the sampled estimate and the inequality verdict");
  erb->add_option("--seed", seed, "Oracle seed");
  erb->add_option("--out", out, "Result JSON path (default stdout)");

  auto* orc = app.add_subcommand("oracle", "Sampled limsup of subdifferentials");
  orc->add_option("problem", problem, "Problem JSON file")->required();
  orc->add_option("--radii", radii, "Strictly decreasing shell radii")->delimiter(',');
  orc->add_option("--dirs", dirs, "Directions per radius");
  orc->add_option("--seed", seed, "Oracle seed");
  orc->add_option("--out", out, "Result JSON path (default stdout)");
  orc->add_option("--svg", svg, "Also write an SVG plot");

  auto* plot = app.add_subcommand("plot", "Render a result JSON as SVG");
  plot->add_option("result", problem, "Result JSON from outer or oracle")->required();
  plot->add_option("--svg,--out", svg, "SVG path (default stdout)");

  auto* check = app.add_subcommand("check", "Run the acceptance suite over a fixture directory");
  check->add_option("--fixtures", fixtures, "Fixture directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (outer->parsed()) {
      const auto p = subdiff::io::load_problem(problem);
      subdiff::commands::OuterRequest req;
      req.mode = mode == "sample" ? subdiff::commands::OuterMode::Sample : subdiff::commands::OuterMode::Exact;
      req.closure = closure;
      req.dirs = dirs;
      req.seed = resolve_seed(seed);
      emit(subdiff::commands::outer(p, req), out, svg);
    } else if (dfam->parsed()) {
      emit(run_dfamily(problem), out, "");
    } else if (erb->parsed()) {
      const auto p = subdiff::io::load_problem(problem);
      emit(subdiff::commands::erbound(p, {empirical, resolve_seed(seed)}), out, "");
    } else if (orc->parsed()) {
      const auto p = subdiff::io::load_problem(problem);
      subdiff::commands::OracleRequest req;
      if (!radii.empty()) req.radii = radii;
      req.dirs = dirs;
      req.seed = resolve_seed(seed);
      emit(subdiff::commands::oracle(p, req), out, svg);
    } else if (plot->parsed()) {
      write_text(svg, subdiff::io::render_svg(subdiff::io::load_json(problem)));
    } else if (check->parsed()) {
      if (!fs::is_directory(fixtures)) {
        std::cerr << "fixture directory not found: " << fixtures << "\n";
        return kCheckFailed;
      }
      const auto report = subdiff::checks::run_acceptance(fixtures);
      std::cout << report.tap();
      return report.all_passed() ? kOk : kCheckFailed;
    }
  } catch (const subdiff::io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const subdiff::ModelError& e) {
    std::cerr << "invalid problem: " << e.what() << "\n";
    return kParse;
  } catch (const subdiff::io::UnsupportedMode& e) {
    std::cerr << "unsupported mode: " << e.what() << "\n";
    return kUnsupported;
  } catch (const subdiff::UnsupportedDimension& e) {
    std::cerr << "unsupported mode: " << e.what() << "\n";
    return kUnsupported;
  } catch (const subdiff::EnumerationCap& e) {
    std::cerr << "enumeration cap: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
