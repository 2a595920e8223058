#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "infconv/deficits.hpp"
#include "infconv/extremizer.hpp"
#include "infconv/families.hpp"
#include "infconv/harness.hpp"
#include "infconv/hopflax.hpp"
#include "infconv/io.hpp"

namespace py = pybind11;
using namespace infconv;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) { return {a.data(), a.data() + a.size()}; }

Array to_array(const std::vector<double>& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::optional<TailBound> to_tail(const std::optional<std::tuple<double, double, double>>& t) {
    if (!t) return std::nullopt;
    return TailBound{std::get<0>(*t), std::get<1>(*t), std::get<2>(*t)};
}

py::dict report_dict(const DeficitReport& r) {
    py::dict d;
    d["kind"] = r.kind;
    d["deficit"] = r.deficit;
    d["constant_used"] = r.constant_used;
    d["norms"] = r.norms;
    d["params"] = r.params;
    d["warnings"] = r.warnings;
    return d;
}

// g is the density exponent in every entry point; lsi and glsi take f = e^{g/p}, e^{g/2}
template <class F>
DeficitReport deficit_of(const std::string& kind, const F& g, double p, double alpha, std::optional<double> beta, double t) {
    if (kind == "hc") return hc_deficit(g, HCParams{p, t, alpha, beta.value_or(p)});
    if (kind == "lsi") return lsi_deficit(affine_exponent(g, 1 / p), p);
    if (kind == "ghc") return ghc_deficit(g, alpha, t);
    if (kind == "glsi") return glsi_deficit(affine_exponent(g, 0.5));
    throw std::invalid_argument("unknown deficit kind: " + kind);
}

HopfLaxParams hl(double p, double t) { return HopfLaxParams::make(p, t); }

}  // namespace

PYBIND11_MODULE(_infconv, m) {
    m.doc() = "Hopf-Lax semigroup, hypercontractivity and log-Sobolev deficits";

    py::register_exception<NegativeDeficitError>(m, "NegativeDeficitError", PyExc_ArithmeticError);

    py::class_<Family>(m, "Family")
        .def(py::init(&Family::parse), py::arg("spec"))
        .def_readwrite("n", &Family::n)
        .def_readwrite("p", &Family::p)
        .def_readwrite("eps", &Family::eps)
        .def_property_readonly("kind", [](const Family& f) { return to_string(f.kind); })
        .def("spec", &Family::to_spec)
        .def("analytic_values", [](const Family& f) { return analytic_values(f); })
        .def("__repr__", [](const Family& f) { return "Family('" + f.to_spec() + "')"; });

    m.def(
        "deficit",
        [](const std::string& kind, const Family& f, std::optional<double> alpha, std::optional<double> beta,
           std::optional<double> t) {
            f.validate();
            // an ExtremizerHC member defaults to the parameters it was built for
            const bool own = f.kind == FamilyKind::ExtremizerHC;
            const double a = alpha.value_or(own ? f.alpha : 1.0), tt = t.value_or(own ? f.t : 1.0);
            if (own && !beta) beta = f.beta;
            return f.radial() ? report_dict(deficit_of(kind, radial_member(f), f.p, a, beta, tt))
                              : report_dict(deficit_of(kind, cartesian_member(f), f.p, a, beta, tt));
        },
        py::arg("kind"), py::arg("family"), py::arg("alpha") = py::none(), py::arg("beta") = py::none(),
        py::arg("t") = py::none());

    m.def(
        "deficit_radial",
        [](const std::string& kind, const Array& r, const Array& g, int n, double p,
           std::optional<std::tuple<double, double, double>> tail, double alpha, std::optional<double> beta, double t) {
            RadialProfile prof(n, to_vec(r), to_vec(g), to_tail(tail), Interpolation::Quintic);
            return report_dict(deficit_of(kind, RadialFunction::from_profile(prof), p, alpha, beta, t));
        },
        py::arg("kind"), py::arg("r"), py::arg("g"), py::arg("n"), py::arg("p"), py::arg("tail") = py::none(),
        py::arg("alpha") = 1.0, py::arg("beta") = py::none(), py::arg("t") = 1.0);

    m.def(
        "hopf_lax_radial",
        [](const Array& r, const Array& g, int n, double p, double t, std::optional<std::tuple<double, double, double>> tail) {
            RadialProfile prof(n, to_vec(r), to_vec(g), to_tail(tail));
            return to_array(radial_inf_convolve(prof, hl(p, t)).logvals());
        },
        py::arg("r"), py::arg("g"), py::arg("n"), py::arg("p"), py::arg("t"), py::arg("tail") = py::none());

    m.def(
        "hopf_lax_1d",
        [](double origin, double spacing, const Array& g, double p, double t, const std::string& method) {
            GridFunction gf(1, {origin, 0.0}, spacing, {static_cast<std::size_t>(g.size()), 1}, to_vec(g));
            if (method == "fast") return to_array(inf_convolve_fast(gf, hl(p, t)).logvals());
            if (method == "brute") return to_array(inf_convolve_bruteforce(gf, hl(p, t)).logvals());
            throw std::invalid_argument("method must be fast or brute");
        },
        py::arg("origin"), py::arg("spacing"), py::arg("g"), py::arg("p"), py::arg("t"), py::arg("method") = "fast");

    m.def(
        "hopf_lax_at",
        [](const Family& f, double r, double p, double t) {
            f.validate();
            if (!f.radial()) throw std::invalid_argument("hopf_lax_at takes radial families");
            return hopf_lax_at(radial_member(f), r, hl(p, t));
        },
        py::arg("family"), py::arg("r"), py::arg("p"), py::arg("t"));

    m.def("hc_optimal_constant", [](int n, double p, double t, double alpha, double beta) {
        return hc_optimal_constant(n, HCParams{p, t, alpha, beta});
    }, py::arg("n"), py::arg("p"), py::arg("t"), py::arg("alpha"), py::arg("beta"));
    m.def("lsi_optimal_constant", &lsi_optimal_constant, py::arg("n"), py::arg("p"));
    m.def("hc_quadratic_constant", &hc_quadratic_constant, py::arg("n"), py::arg("p"));
    m.def("lsi_quadratic_constant", &lsi_quadratic_constant, py::arg("n"), py::arg("p"));
    m.def("hc_sharpness_constant", &hc_sharpness_constant, py::arg("n"), py::arg("p"));
    m.def("lsi_sharpness_constant", &lsi_sharpness_constant, py::arg("n"), py::arg("p"));
    m.def("gauss_sharpness_constant", &gauss_sharpness_constant, py::arg("n"));

    m.def(
        "run_experiment",
        [](const std::string& config_text, bool strict, const std::string& csv_path) {
            std::istringstream in(config_text);
            std::ostringstream summary;
            int code;
            {
                py::gil_scoped_release release;
                code = run_experiment(Config::parse(in), strict, summary, csv_path);
            }
            return py::make_tuple(code, summary.str());
        },
        py::arg("config_text"), py::arg("strict") = false, py::arg("csv_path") = "");
}
