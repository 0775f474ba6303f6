#include <pybind11/pybind11.h>
#include <pybind11/numpy.h>
#include <pybind11/stl.h>

#include "subdense/bernstein.hpp"
#include "subdense/bounds.hpp"
#include "subdense/density.hpp"
#include "subdense/errors.hpp"
#include "subdense/green_heat.hpp"
#include "subdense/model_io.hpp"
#include "subdense/sampler.hpp"
#include "subdense/scale_inverse.hpp"
#include "subdense/verify.hpp"

namespace py = pybind11;
using namespace subdense;

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Transition densities, bounds and Monte Carlo oracles for subordinators";

    auto base = py::register_exception<Error>(mod, "SubdenseError", PyExc_RuntimeError);
    py::register_exception<ModelInvalidError>(mod, "ModelInvalidError", base.ptr());
    py::register_exception<SpecFormatError>(mod, "SpecFormatError", base.ptr());
    py::register_exception<NumericalIntegrityError>(mod, "NumericalIntegrityError", base.ptr());
    py::register_exception<CapabilityError>(mod, "CapabilityError", base.ptr());
    py::register_exception<SupportError>(mod, "SupportError", base.ptr());
    py::register_exception<DomainError>(mod, "DomainError", base.ptr());

    py::class_<BernsteinModel>(mod, "Model")
        .def_static("stable", &BernsteinModel::stable, py::arg("alpha"), py::arg("drift") = 0.0)
        .def_static("tempered", &BernsteinModel::tempered, py::arg("c"), py::arg("alpha"), py::arg("theta"),
                    py::arg("drift") = 0.0)
        .def_static("gamma", &BernsteinModel::gamma, py::arg("drift") = 0.0)
        .def_static("log_stable", &BernsteinModel::log_stable, py::arg("alpha"), py::arg("sigma"))
        .def_static("pure_drift", &BernsteinModel::pure_drift, py::arg("b"))
        .def_static("from_json", &parse_model, py::arg("text"))
        .def_static("load", &load_model, py::arg("path"))
        .def("phi", &BernsteinModel::phi, py::arg("lam"))
        .def("derivative", &BernsteinModel::derivative, py::arg("lam"), py::arg("order"))
        .def("phi_complex", &BernsteinModel::phi_complex, py::arg("w"), py::arg("lam"))
        .def("inverse", &BernsteinModel::inverse, py::arg("y"))
        .def_property_readonly("drift", &BernsteinModel::drift)
        .def_property_readonly("degenerate", &BernsteinModel::degenerate)
        .def("__repr__", &BernsteinModel::describe);

    mod.def(
        "density",
        [](const BernsteinModel& m, double t, double x, const std::string& method) {
            const auto r = density(m, t, x, parse_method(method));
            py::dict d;
            d["value"] = r.value;
            d["method"] = to_string(r.method);
            d["flag"] = to_string(r.flag);
            d["w"] = r.saddle.w;
            d["saddle_mass"] = r.saddle.saddle_mass;
            d["ratio"] = r.ratio;
            return d;
        },
        py::arg("model"), py::arg("t"), py::arg("x"), py::arg("method") = "bromwich");

    mod.def("concentration_K", &concentration_K, py::arg("model"), py::arg("r"));
    mod.def("concentration_h", &concentration_h, py::arg("model"), py::arg("r"));
    mod.def("psi_star", &psi_star, py::arg("model"), py::arg("r"));

    mod.def(
        "sharp_estimate",
        [](const BernsteinModel& m, double t, double x) {
            const auto b = BoundsEngine(m).sharp_estimate(t, x);
            return py::make_tuple(to_string(b.regime), b.upper_form, b.regime_coordinate);
        },
        py::arg("model"), py::arg("t"), py::arg("x"));

    mod.def(
        "green",
        [](const BernsteinModel& m, double x) {
            const auto g = green(m, x);
            return py::make_tuple(g.value, g.estimate_form);
        },
        py::arg("model"), py::arg("x"));

    mod.def(
        "heat_kernel",
        [](const BernsteinModel& m, double t, double tau, const std::string& profile) {
            const HeatProfile p = profile == "sierpinski" ? HeatProfile::sierpinski()
                                                          : profile_from_json(nlohmann::json::parse(profile));
            const auto h = heat_kernel_subordinated(m, p, t, tau);
            py::dict d;
            d["lower"] = h.lower;
            d["upper"] = h.upper;
            d["estimate_form"] = h.estimate_form;
            d["case"] = to_string(h.regime);
            return d;
        },
        py::arg("model"), py::arg("t"), py::arg("tau"), py::arg("profile") = "sierpinski");

    mod.def(
        "sample",
        [](const BernsteinModel& m, double t, std::size_t n, double eps, std::uint64_t seed) {
            EmpiricalDist d;
            {
                py::gil_scoped_release release;
                d = sample(m, t, n, eps, seed);
            }
            return py::array_t<double>(static_cast<py::ssize_t>(d.samples.size()), d.samples.data());
        },
        py::arg("model"), py::arg("t"), py::arg("n"), py::arg("eps") = 1e-6, py::arg("seed") = 1);

    mod.def(
        "verify",
        [](const BernsteinModel& m, bool include_green) {
            VerifyOptions opt;
            opt.include_green = include_green;
            std::string text;
            {
                py::gil_scoped_release release;
                text = verify(m, opt).to_json().dump();
            }
            return py::module_::import("json").attr("loads")(text);
        },
        py::arg("model"), py::arg("include_green") = true);
}
