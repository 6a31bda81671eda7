#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>

#include "natscale/algebra.hpp"
#include "natscale/determinacy.hpp"
#include "natscale/error.hpp"
#include "natscale/indices.hpp"
#include "natscale/io.hpp"
#include "natscale/scales.hpp"
#include "natscale/simulate.hpp"

namespace py = pybind11;
using namespace natscale;
using natscale::io::json;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::handle& obj) {
    return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

using GridArg = std::optional<std::tuple<double, double, double>>;

struct Resolved {
    EvalGrid grid;
    HazardSource source;
};

// source: a Model or a sequence of sample values.
Resolved resolve(const py::object& src, const GridArg& grid) {
    if (py::isinstance<TailModel>(src)) {
        const TailModel& m = src.cast<const TailModel&>();
        const EvalGrid g = grid ? EvalGrid(std::get<0>(*grid), std::get<1>(*grid), std::get<2>(*grid))
                                : analytic_grid(m);
        return {g, HazardSource(m)};
    }
    auto s = std::make_shared<const SampleSet>(src.cast<std::vector<double>>(), "python");
    const EvalGrid g = grid ? EvalGrid(std::get<0>(*grid), std::get<1>(*grid), std::get<2>(*grid))
                            : default_grid(*s);
    return {g, HazardSource(empirical_hazard(s, g))};
}

std::vector<double> to_vector(const SampleSet& s) { return {s.values().begin(), s.values().end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Natural scales for tail analysis";
    m.attr("__version__") = NATSCALE_VERSION;

    static py::exception<Error> error(m, "NatscaleError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<TailModel>(m, "Model")
        .def(py::init([](const py::dict& spec) { return io::model_from_json(from_py(spec)); }))
        .def_property_readonly("family", &TailModel::family)
        .def("tail", &TailModel::tail)
        .def("hazard", &TailModel::hazard)
        .def("quantile", &TailModel::quantile)
        .def("to_dict", [](const TailModel& t) { return to_py(io::model_to_json(t)); })
        .def("sample", [](const TailModel& t, std::size_t n, std::uint64_t seed) {
            RandomSource src(seed);
            return to_vector(sample_n(t, n, src));
        }, py::arg("n"), py::arg("seed"));

    py::class_<ScaleFunction>(m, "Scale")
        .def(py::init([](const py::dict& spec) { return io::scale_from_json(from_py(spec)); }))
        .def_static("identity", &ScaleFunction::identity)
        .def("__call__", &ScaleFunction::eval)
        .def("inverse", &ScaleFunction::inverse)
        .def_property_readonly("tail_slope", &ScaleFunction::tail_slope)
        .def("to_dict", [](const ScaleFunction& h) { return to_py(io::scale_to_json(h)); });

    m.def("exponential_index", [](const py::object& src, const GridArg& grid, double window) {
        const Resolved r = resolve(src, grid);
        return to_py(io::to_json(exponential_index(r.source, r.grid, window)));
    }, py::arg("source"), py::arg("grid") = py::none(), py::arg("window") = kDefaultWindow);

    m.def("moment_index", [](const py::object& src, const GridArg& grid, double window) {
        const Resolved r = resolve(src, grid);
        return to_py(io::to_json(moment_index(r.source, r.grid, window)));
    }, py::arg("source"), py::arg("grid") = py::none(), py::arg("window") = kDefaultWindow);

    m.def("h_order", [](const py::object& src, const ScaleFunction& h, const GridArg& grid, double window) {
        const Resolved r = resolve(src, grid);
        return to_py(io::to_json(h_order(r.source, h, r.grid, window)));
    }, py::arg("source"), py::arg("scale"), py::arg("grid") = py::none(),
       py::arg("window") = kDefaultWindow);

    m.def("natural_scale_fit", [](const ScaleFunction& hazard, double window) {
        NaturalScaleFit fit = natural_scale_fit(hazard, window);
        return py::make_tuple(fit.h, to_py(io::to_json(fit)));
    }, py::arg("hazard"), py::arg("window") = 0.5);

    m.def("check_concave", [](const ScaleFunction& h) { return check_concave(h).concave; });
    m.def("check_subadditive_sum", [](const ScaleFunction& h, std::size_t probes) {
        return check_subadditive_sum(h, probes).holds;
    }, py::arg("scale"), py::arg("probe_pairs") = 1000);
    m.def("check_subadditive_product", [](const ScaleFunction& h, std::size_t probes) {
        return check_subadditive_product(h, probes).holds;
    }, py::arg("scale"), py::arg("probe_pairs") = 1000);

    m.def("mgf_sup_order", [](const TailModel& model, const ScaleFunction& h, double s_max,
                              std::size_t mc_n, std::uint64_t seed) {
        return to_py(io::to_json(mgf_sup_order(model, h, s_max, mc_n, RandomSource(seed))));
    }, py::arg("model"), py::arg("scale"), py::arg("s_max"), py::arg("mc_n"), py::arg("seed"));

    m.def("determinacy_test", [](const ScaleFunction& h, const std::tuple<double, double, double>& grid,
                                 double window) {
        const auto& [lo, hi, ratio] = grid;
        return to_py(io::to_json(determinacy_test(h, EvalGrid(lo, hi, ratio), window)));
    }, py::arg("scale"), py::arg("grid"), py::arg("window") = kDefaultWindow);

    m.def("simulate", [](const py::dict& process, std::size_t mc_n, std::uint64_t seed) {
        return to_vector(simulate_process(io::process_from_json(from_py(process)), mc_n, RandomSource(seed)));
    }, py::arg("process"), py::arg("mc_n"), py::arg("seed"));

    m.def("verify_transform_bound", [](const py::dict& transform, const TailModel& model, double eps,
                                       std::size_t mc_n, std::uint64_t seed) {
        const TransformSpec t = io::transform_from_json(from_py(transform));
        return to_py(io::to_json(verify_transform_bound(t, model, eps, mc_n, std::nullopt, RandomSource(seed))));
    }, py::arg("transform"), py::arg("model"), py::arg("eps"), py::arg("mc_n"), py::arg("seed"));
}
