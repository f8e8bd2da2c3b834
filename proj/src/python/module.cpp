#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coinlab/analysis.hpp"
#include "coinlab/expansions.hpp"
#include "coinlab/variational.hpp"

namespace py = pybind11;
using namespace coinlab;

namespace {

py::tuple as_tuple(LiftedPoint p) { return py::make_tuple(p.phi, p.theta); }

py::array_t<double> as_array(const Mat2& m) {
    py::array_t<double> out({2, 2});
    auto r = out.mutable_unchecked<2>();
    r(0, 0) = m.a11;
    r(0, 1) = m.a12;
    r(1, 0) = m.a21;
    r(1, 1) = m.a22;
    return out;
}

MapKind map_kind(const std::string& name) {
    if (name == "billiard") return MapKind::billiard;
    if (name == "shift") return MapKind::shift;
    if (name == "coin") return MapKind::coin;
    throw DomainError("map must be billiard, shift or coin");
}

}  // namespace

PYBIND11_MODULE(_coinlab, m) {
    m.doc() = "coin billiard maps on convex tables";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<CoinSystem>(m, "CoinSystem")
        .def(py::init([](const std::string& table, double a, double b, double ell) {
                 const CurveKind kind = parse_curve_kind(table);
                 return kind == CurveKind::circle ? make_system(kind, 1.0, 1.0, ell)
                                                  : make_system(kind, a, b, ell);
             }),
             py::arg("table") = "ellipse", py::arg("a") = 1.4, py::arg("b") = 1.0, py::arg("ell") = 1.3)
        .def_property_readonly("ell", &CoinSystem::ell)
        .def_property_readonly("is_disc", [](const CoinSystem& s) { return s.table().is_disc(); })
        .def_property_readonly("perimeter", [](const CoinSystem& s) { return s.table().arclength().perimeter(); })
        .def("with_ell", &CoinSystem::with_ell)
        .def("rho", [](const CoinSystem& s, double phi) {
            const RhoValues r = s.table().profile().at_phi(phi);
            return py::make_tuple(r.rho, r.d1, r.d2);
        })
        .def("billiard_step", [](const CoinSystem& s, double phi, double th) { return as_tuple(billiard_step(s, {phi, th})); })
        .def("billiard_inverse", [](const CoinSystem& s, double phi, double th) { return as_tuple(billiard_inverse(s, {phi, th})); })
        .def("shift_step", [](const CoinSystem& s, double phi, double th) { return as_tuple(shift_step(s, {phi, th})); })
        .def("coin_step", [](const CoinSystem& s, double phi, double th) { return as_tuple(coin_step(s, {phi, th})); })
        .def("coin_inverse", [](const CoinSystem& s, double phi, double th) { return as_tuple(coin_inverse(s, {phi, th})); })
        .def("jacobian",
             [](const CoinSystem& s, double phi, double th, const std::string& map, bool analytic) {
                 const MapKind k = map_kind(map);
                 return as_array(analytic ? analytic_jacobian(s, k, {phi, th}) : jacobian(s, k, {phi, th}));
             },
             py::arg("phi"), py::arg("theta"), py::arg("map") = "coin", py::arg("analytic") = true)
        .def("iterate",
             [](const CoinSystem& s, double phi, double th, int n) {
                 const OrbitRecord r = iterate(s, {phi, th}, n);
                 py::array_t<double> out({static_cast<py::ssize_t>(r.points.size()), py::ssize_t{2}});
                 auto w = out.mutable_unchecked<2>();
                 for (std::size_t k = 0; k < r.points.size(); ++k) {
                     w(k, 0) = r.points[k].phi;
                     w(k, 1) = r.points[k].theta;
                 }
                 return out;
             },
             py::arg("phi"), py::arg("theta"), py::arg("n"), "lifted orbit, shape (steps + 1, 2)")
        .def("classify",
             [](const CoinSystem& s, double phi, double th, int n) {
                 const OrbitClass c = classify(s, {phi, th}, n);
                 py::dict d;
                 d["label"] = to_string(c.label);
                 d["rotation"] = c.rotation;
                 d["rotation_drift"] = c.rotation_drift;
                 d["vertical_extent"] = c.vertical_extent;
                 d["lyapunov"] = c.lyapunov;
                 d["empty_columns"] = c.empty_columns;
                 return d;
             },
             py::arg("phi"), py::arg("theta"), py::arg("n") = 2000)
        .def("ell_zero", [](const CoinSystem& s) { return ell_zero(s.table()); })
        .def("twist", [](const CoinSystem& s, double phi, double th) { return twist_profile(s, phi, th); })
        .def("twist_zeros", [](const CoinSystem& s, double phi, int grid) { return twist_zeros(s, phi, grid); },
             py::arg("phi") = 0.0, py::arg("grid") = 1000)
        .def("vert_graph",
             [](const CoinSystem& s, int mm, int grid) {
                 const VertGraph g = vert_graph(s, mm, grid);
                 return py::make_tuple(g.phi, g.g, g.residual);
             },
             py::arg("m"), py::arg("grid") = 256, "(phi, g_m, residual) lists")
        .def("island_bound", [](const CoinSystem& s, int mm) { return island_bound(s, mm); })
        .def("h", [](const CoinSystem& s, double phi, double phi_bar, double lo, double hi) {
                 const GeneratingEval h = h_composite(s, phi, phi_bar, {lo, hi, 32});
                 return py::make_tuple(h.value, h.d1, h.d2);
             },
             py::arg("phi"), py::arg("phi_bar"), py::arg("theta_lo") = 1e-4, py::arg("theta_hi") = 0.2);
}
