#include "shiftconv/kloosterman.hpp"
#include "shiftconv/modularforms.hpp"
#include "shiftconv/padic.hpp"
#include "shiftconv/parallel.hpp"
#include "shiftconv/poincare.hpp"
#include "shiftconv/serialize.hpp"
#include "shiftconv/shiftedconv.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

namespace py = pybind11;
using namespace shiftconv;

namespace {

py::object frac(const Rational& x) {
    py::object cls = py::module_::import("fractions").attr("Fraction");
    py::object num = py::module_::import("builtins").attr("int")(x.get_num().get_str());
    py::object den = py::module_::import("builtins").attr("int")(x.get_den().get_str());
    return cls(num, den);
}

py::dict coefficients(const QSeries& s) {
    py::dict d;
    for (const auto& [n, c] : s.nonzero_terms()) d[py::int_(n)] = frac(c);
    return d;
}

py::dict report_dict(const PadicReport& r) {
    py::list failures;
    for (const auto& f : r.failures) failures.append(py::make_tuple(f.exponent, f.found, f.required));
    py::dict d;
    d["statement"] = to_string(r.statement);
    d["pass"] = r.pass;
    d["checked"] = r.checked;
    d["failures"] = failures;
    d["detail"] = r.detail;
    return d;
}

py::dict coeff_dict(const PoincareCoefficient& c) {
    py::dict d;
    d["n"] = c.n;
    d["value"] = static_cast<double>(c.value);
    d["tail_bound"] = c.tail_bound;
    d["c_max"] = c.c_max;
    return d;
}

}  // namespace

PYBIND11_MODULE(_shiftconv, m) {
    m.doc() = "Exact q-series, Poincare coefficients and 3-adic checks for eta(3z)^8";

    py::class_<QSeries>(m, "QSeries")
        .def_property_readonly("lead", &QSeries::lead_order)
        .def_property_readonly("trunc", &QSeries::trunc_order)
        .def("coefficient", [](const QSeries& s, long n) { return frac(s.coefficient(n)); })
        .def("__getitem__", [](const QSeries& s, long n) { return frac(s.coefficient(n)); })
        .def("coefficients", &coefficients)
        .def("to_json", [](const QSeries& s) { return to_json(s).dump(); })
        .def("__add__", [](const QSeries& a, const QSeries& b) { return a + b; })
        .def("__sub__", [](const QSeries& a, const QSeries& b) { return a - b; })
        .def("__mul__", [](const QSeries& a, const QSeries& b) { return a * b; })
        .def("__neg__", [](const QSeries& a) { return -a; })
        .def("__eq__", [](const QSeries& a, const QSeries& b) { return a == b; })
        .def("__repr__", [](const QSeries& s) {
            return "<QSeries [" + std::to_string(s.lead_order()) + ", " + std::to_string(s.trunc_order()) + ")>";
        });

    m.def("series_from_json", [](const std::string& text) { return qseries_from_json(nlohmann::json::parse(text)); });
    m.def("set_thread_count", &set_thread_count);

    m.def("eta_quotient", [](const std::string& spec, long window) {
        return eta_quotient_expand(EtaQuotient::parse(spec), window);
    }, py::arg("spec"), py::arg("window"));
    m.def("newform_f", &newform_f, py::arg("window"));
    m.def("weakform_m9", &weakform_m9, py::arg("window"));
    m.def("eichler_integral", &eichler_integral, py::arg("series"), py::arg("k"));
    m.def("d_operator", py::overload_cast<const QSeries&, unsigned>(&d_operator), py::arg("series"), py::arg("j"));
    m.def("invert", py::overload_cast<const QSeries&>(&invert), py::arg("series"));
    m.def("eisenstein_E2", &eisenstein_E2, py::arg("window"));

    m.def("kloosterman_sum", [](long mm, long n, long c, long bits) {
        return kloosterman_sum({mm, n, c}, bits).to_double();
    }, py::arg("m"), py::arg("n"), py::arg("c"), py::arg("bits") = 128);
    m.def("mod_inverse", &mod_inverse, py::arg("d"), py::arg("c"));
    m.def("vanishing_scan", [](long p, long mm, long n_max, long c_max, double tol) {
        const auto r = vanishing_scan(p, mm, n_max, c_max, tol);
        py::dict d;
        d["max_abs"] = r.max_abs;
        d["worst_case"] = py::make_tuple(r.worst_case[0], r.worst_case[1], r.worst_case[2]);
        d["pass"] = r.pass;
        return d;
    }, py::arg("p"), py::arg("m"), py::arg("n_max"), py::arg("c_max"), py::arg("tol"));

    m.def("classical_coeff", [](long mm, int k, long N, long n, long c_max) {
        return coeff_dict(classical_coeff({mm, k, N}, n, c_max));
    }, py::arg("m"), py::arg("k"), py::arg("N"), py::arg("n"), py::arg("c_max") = kDefaultCMax);
    m.def("maass_hol_coeff", [](long mm, int k, long N, long n, long c_max, bool normalized) {
        auto c = maass_hol_coeff({mm, k, N}, n, c_max);
        if (normalized) c = normalize_maass(c, k);
        return coeff_dict(c);
    }, py::arg("m"), py::arg("k"), py::arg("N"), py::arg("n"), py::arg("c_max") = kDefaultCMax,
       py::arg("normalized") = true);
    m.def("beta_constant", [](long c_max) {
        const auto b = beta_constant(c_max);
        return py::make_tuple(b.to_double(), b.error_bound);
    }, py::arg("c_max") = kDefaultCMax);

    m.def("fLf", [](long window) { return exact_pieces(window).fLf; }, py::arg("window"));
    m.def("fit_gamma_delta", [](double beta, const std::vector<std::pair<long, double>>& anchors, long window,
                                bool constrained) {
        std::vector<Anchor> a;
        for (const auto& [h, v] : anchors) a.push_back({h, v});
        return constrained ? fit_gamma_delta_constrained(beta, a, window) : fit_gamma_delta(beta, a, window);
    }, py::arg("beta"), py::arg("anchors"), py::arg("window") = 100, py::arg("constrained") = true);
    m.def("dhat", [](double beta, double gamma, double delta, const std::vector<long>& hs, long window) {
        const auto a = assemble(beta, gamma, delta, window);
        std::vector<double> out;
        for (long h : hs) out.push_back(dhat(a, h).value);
        return out;
    }, py::arg("beta"), py::arg("gamma"), py::arg("delta"), py::arg("h"), py::arg("window") = 100);
    m.def("oracle_dhat", [](long h, long X, int depth) {
        const auto v = oracle_dhat(h, X, depth);
        return py::make_tuple(v.value, v.oscillation_band);
    }, py::arg("h"), py::arg("X"), py::arg("depth") = 3);

    m.def("vp", [](const py::object& x, std::uint64_t p) -> py::object {
        py::object fr = py::module_::import("fractions").attr("Fraction")(x);
        const Rational q(Integer(py::str(fr.attr("numerator")).cast<std::string>()),
                         Integer(py::str(fr.attr("denominator")).cast<std::string>()));
        const long v = vp(q, p);
        if (v == kInfiniteValuation) return py::float_(std::numeric_limits<double>::infinity());
        return py::int_(v);
    }, py::arg("x"), py::arg("p"));
    m.def("unit_congruence_check", [](long window) { return report_dict(unit_congruence_check(window)); },
          py::arg("window"));
    m.def("congruence_families_check", [](long window) {
        py::list out;
        for (const auto& r : congruence_families_check(window)) out.append(report_dict(r));
        return out;
    }, py::arg("window"));
    m.def("d_power_congruence_check", [](std::uint64_t p, unsigned t, long window) {
        return report_dict(d_power_congruence_check(p, t, window));
    }, py::arg("p"), py::arg("t"), py::arg("window"));
    m.def("density_table", [](const std::vector<unsigned>& ts, const std::vector<long>& xs, unsigned T,
                              bool exclusive_upper) {
        py::list out;
        for (const auto& r : density_table(ts, xs, T, exclusive_upper ? DensityRange::ExclusiveUpper
                                                                         : DensityRange::Inclusive)) {
            out.append(py::make_tuple(r.t, r.X, r.count));
        }
        return out;
    }, py::arg("t"), py::arg("X"), py::arg("T") = 8, py::arg("exclusive_upper") = false);
}
