#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "snbif/bifurcation.hpp"
#include "snbif/cli.hpp"
#include "snbif/dconcavity.hpp"
#include "snbif/errors.hpp"
#include "snbif/integrator.hpp"
#include "snbif/report.hpp"
#include "snbif/scenario.hpp"

namespace py = pybind11;
using namespace snbif;

namespace {

std::string dump(const nlohmann::json& j) { return j.dump(); }

SpectrumObservable observable_from(const std::string& name) {
    if (name == "a2") return SpectrumObservable::A2Coefficient;
    if (name == "fx0") return SpectrumObservable::FxAtZeroSection;
    throw DomainError("observable must be 'a2' or 'fx0'");
}

}  // namespace

// Every entry point takes scenario JSON text and returns JSON text; the Python
// layer decodes it. Long computations release the GIL.
PYBIND11_MODULE(_core, m) {
    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ModelError>(m, "ModelError", base.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", base.ptr());
    py::register_exception<TrackingLost>(m, "TrackingLost", base.ptr());
    py::register_exception<IntegrationFailure>(m, "IntegrationFailure", base.ptr());

    m.def("normalize", [](const std::string& text) { return emit_scenario(parse_scenario(text)); }, py::arg("scenario"));

    m.def("validate", [](const std::string& text) { return dump(to_json(validate_model(parse_scenario(text)))); },
          py::arg("scenario"));

    m.def(
        "census",
        [](const std::string& text, double lambda) {
            const Scenario s = parse_scenario(text);
            py::gil_scoped_release nogil;
            return dump(to_json(census(s, lambda)));
        },
        py::arg("scenario"), py::arg("lam"));

    m.def(
        "sweep",
        [](const std::string& text, int threads) {
            const Scenario s = parse_scenario(text);
            py::gil_scoped_release nogil;
            const auto d = sweep(s, threads);
            return std::pair{dump(to_json(d)), diagram_csv(d)};
        },
        py::arg("scenario"), py::arg("threads") = 0);

    m.def(
        "spectrum",
        [](const std::string& text, const std::string& observable, std::vector<double> horizons) {
            const Scenario s = parse_scenario(text);
            if (horizons.empty()) {
                const double T = s.numerics.birkhoff_T;
                horizons = {T / 4, T / 2, T};
            }
            const auto obs = observable_from(observable);
            py::gil_scoped_release nogil;
            return dump(to_json(estimate_spectrum(s, obs, horizons)));
        },
        py::arg("scenario"), py::arg("observable") = "a2", py::arg("horizons") = std::vector<double>{});

    m.def(
        "classify_sdc",
        [](const std::string& text, double lo, double hi, const std::vector<double>& eps) {
            const Scenario s = parse_scenario(text);
            py::gil_scoped_release nogil;
            return dump(to_json(classify_sdc(s, DcInterval{lo, hi}, eps)));
        },
        py::arg("scenario"), py::arg("lo"), py::arg("hi"), py::arg("eps"));

    m.def(
        "schwarzian",
        [](const std::string& text, double lambda, double x0, double t, const std::vector<double>& theta) {
            const Scenario s = parse_scenario(text);
            BasePoint omega = origin(s.base);
            if (!theta.empty()) {
                if (theta.size() != s.base.dim()) throw DomainError("theta needs one angle per base frequency");
                for (std::size_t i = 0; i < theta.size(); ++i) omega.theta[i] = wrap_unit(theta[i]);
            }
            return schwarzian(s, lambda, omega, x0, t);
        },
        py::arg("scenario"), py::arg("lam"), py::arg("x0"), py::arg("t"), py::arg("theta") = std::vector<double>{});

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
