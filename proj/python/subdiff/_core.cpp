#include "subdiff/checks.hpp"
#include "subdiff/commands.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using subdiff::io::json;

namespace {

subdiff::io::Problem problem_from(const std::string& text) { return subdiff::io::parse_problem(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Outer limits of Frechet subdifferentials for min-max functions (JSON in, JSON out)";

  py::register_exception<subdiff::io::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<subdiff::io::UnsupportedMode>(m, "UnsupportedModeError", PyExc_ValueError);
  py::register_exception<subdiff::UnsupportedDimension>(m, "UnsupportedDimensionError", PyExc_ValueError);
  py::register_exception<subdiff::EnumerationCap>(m, "EnumerationCapError", PyExc_ValueError);

  m.def(
      "outer",
      [](const std::string& problem, const std::string& mode, bool closure, std::optional<std::size_t> dirs,
         std::optional<std::uint64_t> seed) {
        subdiff::commands::OuterRequest req;
        if (mode == "sample") req.mode = subdiff::commands::OuterMode::Sample;
        else if (mode != "exact2d") throw std::invalid_argument("mode must be exact2d or sample");
        req.closure = closure;
        req.dirs = dirs;
        req.seed = seed;
        return subdiff::commands::outer(problem_from(problem), req).dump();
      },
      py::arg("problem"), py::arg("mode") = "exact2d", py::arg("closure") = false, py::arg("dirs") = py::none(),
      py::arg("seed") = py::none());

  m.def(
      "dfamily",
      [](const std::string& doc) {
        const json j = subdiff::io::parse_json(doc);
        if (j.is_object() && j.contains("gradients") && !j.contains("components"))
          return subdiff::commands::dfamily_from_gradients(j).dump();
        return subdiff::commands::dfamily(problem_from(doc)).dump();
      },
      py::arg("problem"));

  m.def(
      "erbound",
      [](const std::string& problem, bool empirical, std::optional<std::uint64_t> seed) {
        return subdiff::commands::erbound(problem_from(problem), {empirical, seed}).dump();
      },
      py::arg("problem"), py::arg("empirical") = false, py::arg("seed") = py::none());

  m.def(
      "oracle",
      [](const std::string& problem, std::optional<std::vector<double>> radii, std::optional<std::size_t> dirs,
         std::optional<std::uint64_t> seed) {
        return subdiff::commands::oracle(problem_from(problem), {radii, dirs, seed}).dump();
      },
      py::arg("problem"), py::arg("radii") = py::none(), py::arg("dirs") = py::none(), py::arg("seed") = py::none());

  m.def(
      "render_svg", [](const std::string& result) { return subdiff::io::render_svg(subdiff::io::parse_json(result)); },
      py::arg("result"));

  m.def(
      "check",
      [](const std::filesystem::path& fixtures) {
        py::gil_scoped_release release;
        const auto report = subdiff::checks::run_acceptance(fixtures);
        return py::make_tuple(report.all_passed(), report.tap());
      },
      py::arg("fixtures"));
}
