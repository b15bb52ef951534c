#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "knotdist/bounds.hpp"
#include "knotdist/curve_io.hpp"
#include "knotdist/distortion.hpp"
#include "knotdist/errors.hpp"
#include "knotdist/geometry.hpp"
#include "knotdist/knots.hpp"
#include "knotdist/optimize.hpp"
#include "knotdist/oracle.hpp"

namespace py = pybind11;
using namespace knotdist;

namespace {

using Triple = std::array<double, 3>;

Vec3 to_vec(const Triple& t) { return {t[0], t[1], t[2]}; }
Triple to_triple(const Vec3& v) { return {v.x, v.y, v.z}; }

PolyCurve make_curve(const std::vector<Triple>& vertices, bool closed) {
  std::vector<Vec3> v;
  v.reserve(vertices.size());
  for (const auto& t : vertices) v.push_back(to_vec(t));
  return PolyCurve(std::move(v), closed);
}

std::vector<Triple> curve_vertices(const PolyCurve& c) {
  std::vector<Triple> out;
  out.reserve(c.vertex_count());
  for (const auto& v : c.vertices()) out.push_back(to_triple(v));
  return out;
}

py::tuple bound_tuple(const BoundEval& e) {
  return py::make_tuple(e.value, std::string(branch_name(e.branch)));
}

py::dict epoch_dict(const EpochRecord& r) {
  py::dict d;
  d["epoch"] = r.epoch;
  d["temperature"] = r.temperature;
  d["sampled"] = r.sampled;
  d["acceptance_rate"] = r.acceptance_rate;
  d["certified"] = r.certified ? py::cast(*r.certified) : py::none();
  d["best_certified"] = r.best_certified;
  return d;
}

py::dict report_dict(const VerifyReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["grid"] = r.grid_spec;
  d["worst_margin"] = r.worst_margin;
  d["passed"] = r.passed;
  py::dict point;
  for (const auto& [name, value] : r.worst_point) point[py::str(name)] = value;
  d["worst_point"] = point;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distortion of polygonal space curves";
  m.attr("__version__") = KNOTDIST_VERSION_STRING;

  auto value_error = py::reinterpret_borrow<py::object>(PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", value_error);
  py::register_exception<GeometryError>(m, "GeometryError", value_error);
  py::register_exception<DomainError>(m, "DomainError", value_error);

  py::class_<PolyCurve>(m, "PolyCurve")
      .def(py::init(&make_curve), py::arg("vertices"), py::arg("closed"))
      .def_property_readonly("vertices", &curve_vertices)
      .def_property_readonly("closed", &PolyCurve::closed)
      .def_property_readonly("vertex_count", &PolyCurve::vertex_count)
      .def_property_readonly("total_length", &PolyCurve::total_length)
      .def("position_at", [](const PolyCurve& c, double s) { return to_triple(c.position_at(s)); },
           py::arg("s"))
      .def("scaled", &PolyCurve::scaled, py::arg("factor"))
      .def("__len__", &PolyCurve::vertex_count)
      .def("__repr__", [](const PolyCurve& c) {
        return "PolyCurve(" + std::string(c.closed() ? "closed" : "open") + ", " +
               std::to_string(c.vertex_count()) + " vertices)";
      });

  m.def("is_simple", [](const PolyCurve& c) { return is_simple(c); }, py::arg("curve"));
  m.def("curve_to_string",
        [](const PolyCurve& c, const std::string& format) {
          if (format != "text" && format != "json") throw DomainError("format must be text or json");
          return curve_to_string(c, format == "json" ? CurveFormat::json : CurveFormat::text);
        },
        py::arg("curve"), py::arg("format") = "text");
  m.def("curve_from_string", [](const std::string& s) { return curve_from_string(s); },
        py::arg("content"));

  py::class_<DistortionResult>(m, "DistortionResult")
      .def_readonly("lower", &DistortionResult::lower)
      .def_readonly("upper", &DistortionResult::upper)
      .def_readonly("boxes_explored", &DistortionResult::boxes_explored)
      .def_readonly("budget_exhausted", &DistortionResult::budget_exhausted)
      .def_property_readonly("width", &DistortionResult::width)
      .def_property_readonly("witness_arclens",
                             [](const DistortionResult& r) {
                               return py::make_tuple(r.witness_p.arclen, r.witness_q.arclen);
                             })
      .def("__repr__", [](const DistortionResult& r) {
        return "DistortionResult(lower=" + format_double(r.lower) +
               ", upper=" + format_double(r.upper) + ")";
      });

  m.def("distortion_certified",
        [](const PolyCurve& c, double tol) { return distortion_certified(c, tol); },
        py::arg("curve"), py::arg("tol") = 1e-4, py::call_guard<py::gil_scoped_release>());
  m.def("antipodal_distortion",
        [](const PolyCurve& c, double tol) { return antipodal_distortion(c, tol); },
        py::arg("curve"), py::arg("tol") = 1e-4, py::call_guard<py::gil_scoped_release>());
  m.def("distortion_sampled",
        [](const PolyCurve& c, std::size_t n) { return distortion_sampled(c, n).value; },
        py::arg("curve"), py::arg("n_points"), py::call_guard<py::gil_scoped_release>());

  m.def("ball_avoiding_length",
        [](double r, double s, double theta) { return bound_tuple(ball_avoiding_length(r, s, theta)); },
        py::arg("r"), py::arg("s"), py::arg("theta"));
  m.def("ball_avoiding_length_any_start",
        [](double s, double theta) { return bound_tuple(ball_avoiding_length_any_start(s, theta)); },
        py::arg("s"), py::arg("theta"));
  m.def("quarter_circle_detour_length", &quarter_circle_detour_length, py::arg("s"));
  m.def("essential_arc_length_bound", &essential_arc_length_bound, py::arg("c"));
  m.def("curvature_distortion_bound", &curvature_distortion_bound, py::arg("alpha"));
  m.def("ropelength_distortion_bound", &ropelength_distortion_bound, py::arg("ropelength"));
  m.def("knot_distortion_lower_constant", &knot_distortion_lower_constant);

  m.def("shortest_path_outside_ball",
        [](const Triple& a, const Triple& b, std::size_t resolution) {
          return shortest_path_outside_ball(to_vec(a), to_vec(b), resolution);
        },
        py::arg("a"), py::arg("b"), py::arg("resolution"), py::call_guard<py::gil_scoped_release>());
  m.def("verify_suite_names", &verify_suite_names);
  m.def("verify_suite",
        [](const std::string& suite, std::size_t density) {
          return report_dict(verify_suite(suite, density));
        },
        py::arg("suite"), py::arg("grid_density") = 0);
  m.def("verify_all", [] {
    py::list out;
    for (const auto& r : verify_all()) out.append(report_dict(r));
    return out;
  });

  m.def("circle", &circle, py::arg("n"));
  m.def("torus_knot", &torus_knot, py::arg("p"), py::arg("q"), py::arg("R"), py::arg("r"),
        py::arg("n"));
  m.def("open_trefoil", &open_trefoil, py::arg("n"));
  m.def("connect_sum",
        [](const PolyCurve& tile, std::size_t copies, double scale_ratio, double loop_radius,
           std::size_t loop_vertices) {
          ConnectSumSpec spec{tile};
          spec.copies = copies;
          spec.scale_ratio = scale_ratio;
          spec.loop_radius = loop_radius;
          spec.loop_vertices = loop_vertices;
          return connect_sum(spec);
        },
        py::arg("tile"), py::arg("copies") = 1, py::arg("scale_ratio") = 0.1,
        py::arg("loop_radius") = 0.0, py::arg("loop_vertices") = 128);

  py::class_<AnnealConfig>(m, "AnnealConfig")
      .def(py::init<>())
      .def_readwrite("initial_temp", &AnnealConfig::initial_temp)
      .def_readwrite("cooling", &AnnealConfig::cooling)
      .def_readwrite("steps_per_epoch", &AnnealConfig::steps_per_epoch)
      .def_readwrite("epochs", &AnnealConfig::epochs)
      .def_readwrite("step_scale", &AnnealConfig::step_scale)
      .def_readwrite("resample_every", &AnnealConfig::resample_every)
      .def_readwrite("certify_every", &AnnealConfig::certify_every)
      .def_readwrite("seed", &AnnealConfig::seed)
      .def_readwrite("certify_tol", &AnnealConfig::certify_tol);

  m.def("minimize_distortion",
        [](const PolyCurve& c, const AnnealConfig& config) {
          OptimizeTrace trace = [&] {
            py::gil_scoped_release release;
            return minimize_distortion(c, config);
          }();
          py::dict d;
          d["best_curve"] = trace.best_curve;
          d["initial"] = trace.initial;
          d["best"] = trace.best;
          py::list epochs;
          for (const auto& e : trace.epochs) epochs.append(epoch_dict(e));
          d["epochs"] = epochs;
          d["proposed"] = trace.proposed;
          d["accepted"] = trace.accepted;
          d["rejected_isotopy"] = trace.rejected_isotopy;
          return d;
        },
        py::arg("curve"), py::arg("config") = AnnealConfig{});
}
