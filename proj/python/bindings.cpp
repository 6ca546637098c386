#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "itjulia/apps.hpp"
#include "itjulia/core.hpp"
#include "itjulia/dynamics.hpp"
#include "itjulia/error.hpp"
#include "itjulia/geometry.hpp"
#include "itjulia/io.hpp"
#include "itjulia/plseq.hpp"

namespace py = pybind11;
using namespace itj;

namespace {

SequenceSpec parse_seq(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid sequence JSON: ") + e.what());
  }
  return sequence_from_json(j);
}

GridSpec chart(const SequenceSpec& seq, int resolution, double half_width) {
  if (half_width > 0.0) {
    GridSpec g{0.0, half_width, resolution};
    g.validate();
    return g;
  }
  return chart_for_radius(escape_radius(seq.bounds()), resolution);
}

JuliaMethod method_of(const std::string& name) {
  if (name == "escape") return JuliaMethod::EscapeTime;
  if (name == "pullback") return JuliaMethod::Pullback;
  throw InputError("method must be 'escape' or 'pullback'");
}

RegionMask mask_of(const py::array_t<bool, py::array::c_style | py::array::forcecast>& arr, double half_width,
                   cplx basepoint) {
  if (arr.ndim() != 2 || arr.shape(0) != arr.shape(1)) throw InputError("mask must be a square 2-d array");
  GridSpec g{0.0, half_width, static_cast<int>(arr.shape(0))};
  g.validate();
  RegionMask m(g, false);
  const bool* data = arr.data();
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = data[i] ? 1 : 0;
  m.basepoint = basepoint;
  return m;
}

template <class T>
py::array_t<T> square(const std::vector<T>& v, int n) {
  py::array_t<T> out({n, n});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Julia sets of non-autonomous polynomial sequences";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<GridTooSmall>(m, "GridTooSmall", base.ptr());
  py::register_exception<RootFindError>(m, "RootFindError", base.ptr());
  py::register_exception<ResolutionError>(m, "ResolutionError", base.ptr());
  py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());

  m.def("escape_radius", [](int d, double K, double M) { return escape_radius(Bounds{d, K, M}); }, py::arg("d"),
        py::arg("K"), py::arg("M"));
  m.def("spherical_dist", &spherical_dist, py::arg("z"), py::arg("w"));
  m.def("hausdorff_dist", &hausdorff_dist, py::arg("a"), py::arg("b"));
  m.def("cycle_time", &cycle_time, py::arg("j"));

  m.def(
      "escape_time",
      [](const std::string& seq, long time, cplx z, int max_depth) {
        const EscapeResult r = escape_time(parse_seq(seq), time, z, max_depth);
        return py::make_tuple(r.escaped, r.steps);
      },
      py::arg("seq"), py::arg("time"), py::arg("z"), py::arg("max_depth"));

  m.def(
      "filled_julia",
      [](const std::string& seq_text, long time, int resolution, int depth, double half_width,
         const std::string& method) {
        const SequenceSpec seq = parse_seq(seq_text);
        const GridSpec g = chart(seq, resolution, half_width);
        const JuliaApprox ja = filled_julia(seq, time, g, depth, method_of(method));
        py::dict out;
        out["mask"] = square(ja.k_mask.bits, resolution).attr("astype")("bool");
        out["steps"] = square(ja.steps, resolution);
        out["j_points"] = ja.j_points();
        out["half_width"] = g.half_width;
        out["components"] = components_to_json(components(ja.k_mask)).dump();
        return out;
      },
      py::arg("seq"), py::arg("time"), py::arg("resolution"), py::arg("depth"), py::arg("half_width") = 0.0,
      py::arg("method") = "escape");

  m.def(
      "invariance",
      [](const std::string& seq_text, long from, long to, int resolution, int depth, int samples,
         std::uint64_t seed) {
        const SequenceSpec seq = parse_seq(seq_text);
        const GridSpec g = chart(seq, resolution, 0.0);
        const InvarianceResult r =
            invariance_check(seq, from, to, filled_julia(seq, from, g, depth), filled_julia(seq, to, g, depth), samples, seed);
        return json{{"max_cell_deviation", r.max_cell_deviation}, {"samples", r.samples}, {"escaped", r.escaped}}.dump();
      },
      py::arg("seq"), py::arg("m"), py::arg("n"), py::arg("resolution"), py::arg("depth"), py::arg("samples") = 200,
      py::arg("seed") = 42);

  m.def(
      "hyperbolic_dist_bounds",
      [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask, double half_width, cplx z, cplx w) {
        const DistBounds b = hyperbolic_dist_bounds(mask_of(mask, half_width, z), z, w);
        return py::make_tuple(b.lower, b.upper);
      },
      py::arg("mask"), py::arg("half_width"), py::arg("z"), py::arg("w"));

  m.def(
      "annulus_modulus",
      [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask, double half_width) {
        return annulus_modulus(mask_of(mask, half_width, 0.0));
      },
      py::arg("mask"), py::arg("half_width"));

  m.def(
      "caratheodory_bound_disc",
      [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask, double half_width, cplx basepoint) {
        return caratheodory_bound_disc(mask_of(mask, half_width, basepoint));
      },
      py::arg("mask"), py::arg("half_width"), py::arg("basepoint"));

  m.def(
      "pl_build",
      [](const std::string& seq_text, double rho, int horizon, int resolution) {
        const PLSeq pl = disc_pl_from_polys(parse_seq(seq_text), rho, horizon, {resolution});
        json out = {{"K", pl.K}, {"degree_bound", pl.degree_bound}, {"pl_report", pl_report_to_json(verify_pl(pl))}};
        return out.dump();
      },
      py::arg("seq"), py::arg("rho"), py::arg("horizon"), py::arg("resolution") = 512);

  m.def(
      "thm72_rows",
      [](std::optional<int> n, int j_max, int resolution, int depth) {
        const GridSpec g = counterexample_chart(resolution);
        json rows = json::array();
        for (int j = 1; j <= j_max; ++j) rows.push_back(thm72_row_to_json(thm72_geometry(n, j, g, depth)));
        return rows.dump();
      },
      py::arg("n"), py::arg("j"), py::arg("resolution") = 1024, py::arg("depth") = 40);

  m.def(
      "quasicircle_constant",
      [](const std::string& seq_text, int resolution, int depth) {
        const SequenceSpec seq = parse_seq(seq_text);
        return turning_to_json(thm71_quasicircle(seq, chart(seq, resolution, 0.0), depth)).dump();
      },
      py::arg("seq"), py::arg("resolution") = 512, py::arg("depth") = 40);

  m.def(
      "z2plus2_separation",
      [](int resolution, int depth) {
        return separation_to_json(z2plus2_separation(chart_for_radius(escape_radius(Bounds{2, 1.0, 2.0}), resolution), depth))
            .dump();
      },
      py::arg("resolution") = 512, py::arg("depth") = 40);
}
