#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcoguard/cli.hpp"
#include "lcoguard/continuation.hpp"
#include "lcoguard/hopf_normal_form.hpp"
#include "lcoguard/io.hpp"
#include "lcoguard/lco_estimate.hpp"
#include "lcoguard/linear_stability.hpp"
#include "lcoguard/nes_benchmark.hpp"

namespace py = pybind11;
using namespace lcoguard;

namespace {

py::dict branch_dict(const HopfBranch& hb) {
    std::vector<double> mu1, amp, period;
    std::vector<bool> stable;
    for (const auto& p : hb.branch.points) {
        mu1.push_back(p.mu1);
        amp.push_back(p.amplitude);
        period.push_back(p.period);
        stable.push_back(p.stable);
    }
    py::list events;
    for (const auto& e : hb.branch.events)
        events.append(py::dict(py::arg("kind") = to_string(e.kind), py::arg("mu1") = e.mu1,
                               py::arg("amplitude") = e.amplitude));
    return py::dict(py::arg("mu1_cr") = hb.hopf.mu1_cr, py::arg("mu1") = mu1, py::arg("amplitude") = amp,
                    py::arg("period") = period, py::arg("stable") = stable, py::arg("events") = events,
                    py::arg("termination") = to_string(hb.branch.termination));
}

}  // namespace

PYBIND11_MODULE(_lcoguard, m) {
    m.doc() = "Limit-cycle analysis of tuned vibration absorbers";
    m.attr("__version__") = version();

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    py::class_<DimensionlessSystem>(m, "System")
        .def(py::init([](double eps, double mu1, std::optional<double> mu2, std::optional<double> gamma,
                         double alpha3, double beta2, double beta3, double beta5, std::optional<double> lambda_) {
                 const auto t = optimal_tuning(eps);
                 DimensionlessSystem s;
                 s.eps = eps;
                 s.mu1 = mu1;
                 s.mu2 = mu2.value_or(lambda_ ? 0.0 : t.mu2_opt);
                 s.gamma = gamma.value_or(lambda_ ? 0.0 : t.gamma_opt);
                 s.alpha3 = alpha3;
                 s.beta2 = beta2;
                 s.beta3 = beta3;
                 s.beta5 = beta5;
                 s.lambda = lambda_;
                 s.validate();
                 return s;
             }),
             py::arg("eps"), py::arg("mu1") = 0.0, py::arg("mu2") = py::none(), py::arg("gamma") = py::none(),
             py::arg("alpha3") = 0.0, py::arg("beta2") = 0.0, py::arg("beta3") = 0.0, py::arg("beta5") = 0.0,
             py::arg("lambda_") = py::none())
        .def_readwrite("eps", &DimensionlessSystem::eps)
        .def_readwrite("mu1", &DimensionlessSystem::mu1)
        .def_readwrite("mu2", &DimensionlessSystem::mu2)
        .def_readwrite("gamma", &DimensionlessSystem::gamma)
        .def_readwrite("alpha3", &DimensionlessSystem::alpha3)
        .def_readwrite("beta2", &DimensionlessSystem::beta2)
        .def_readwrite("beta3", &DimensionlessSystem::beta3)
        .def_readwrite("beta5", &DimensionlessSystem::beta5)
        .def_readwrite("lambda_", &DimensionlessSystem::lambda)
        .def("rhs", [](const DimensionlessSystem& s, const StateVector& x) { return rhs(s, x); })
        .def("jacobian", [](const DimensionlessSystem& s, const StateVector& x) { return jacobian(s, x); })
        .def("linear_matrix", [](const DimensionlessSystem& s) { return linear_matrix(s); })
        .def("__repr__", [](const DimensionlessSystem& s) {
            return "System(" + nlohmann::json(s).dump() + ")";
        });

    m.def("optimal_tuning", [](double eps) {
        const auto t = optimal_tuning(eps);
        return py::dict(py::arg("gamma_opt") = t.gamma_opt, py::arg("mu2_opt") = t.mu2_opt,
                        py::arg("mu1_max") = t.mu1_max);
    });
    m.def("critical_mu1", &critical_mu1, py::arg("eps"), py::arg("mu2"), py::arg("gamma"));
    m.def(
        "is_stable", [](const DimensionlessSystem& s) { return routh_hurwitz(s).stable; }, py::arg("system"));
    m.def("eigenvalues", [](const DimensionlessSystem& s) {
        const auto e = eigenvalues(s);
        return std::vector<std::complex<double>>(e.begin(), e.end());
    });
    m.def(
        "delta",
        [](double eps, double mu2, double gamma, double alpha3, double beta3) {
            const auto r = delta(eps, mu2, gamma, alpha3, beta3);
            return py::dict(py::arg("delta") = r.delta, py::arg("criticality") = to_string(r.criticality),
                            py::arg("delta0") = r.decomposition.delta0,
                            py::arg("delta_alpha") = r.decomposition.delta_alpha,
                            py::arg("delta_beta") = r.decomposition.delta_beta,
                            py::arg("mu1_cr") = r.decomposition.hopf.mu1_cr);
        },
        py::arg("eps"), py::arg("mu2"), py::arg("gamma"), py::arg("alpha3") = 0.0, py::arg("beta3") = 0.0);
    m.def("beta3_tuning", &beta3_tuning, py::arg("eps"), py::arg("alpha3"));
    m.def(
        "lco_amplitude",
        [](double eps, double mu2, double gamma, double alpha3, double beta3, double mu1) {
            const auto e = lco_amplitude_local(eps, mu2, gamma, alpha3, beta3, mu1);
            return py::dict(py::arg("q1_max") = e.q1_max, py::arg("valid") = e.valid,
                            py::arg("unstable") = e.unstable);
        },
        py::arg("eps"), py::arg("mu2"), py::arg("gamma"), py::arg("alpha3"), py::arg("beta3"), py::arg("mu1"));
    m.def(
        "supercritical_probability",
        [](double eps, double alpha3, const std::string& rule, std::size_t n, std::uint64_t seed) {
            if (rule != "ltva" && rule != "nltva") throw DomainError("rule", "must be ltva or nltva");
            py::gil_scoped_release release;
            return supercritical_probability(eps, alpha3, rule == "ltva" ? AbsorberRule::ltva : AbsorberRule::nltva,
                                             n, seed);
        },
        py::arg("eps"), py::arg("alpha3"), py::arg("rule") = "ltva", py::arg("n_samples") = 100000,
        py::arg("seed") = 1);
    m.def(
        "branch",
        [](const DimensionlessSystem& s, double mu1_min, double mu1_max, double amplitude_max) {
            ContinuationOptions o;
            o.mu1_min = mu1_min;
            o.mu1_max = mu1_max;
            o.amplitude_max = amplitude_max;
            HopfBranch hb;
            {
                py::gil_scoped_release release;
                hb = branch_from_hopf(s, o);
            }
            return branch_dict(hb);
        },
        py::arg("system"), py::arg("mu1_min") = -0.02, py::arg("mu1_max") = 0.25, py::arg("amplitude_max") = 10.0);
    m.def("nes_mu1_max", &nes_mu1_max, py::arg("eps"), py::arg("Lambda"));
    m.def(
        "compare_time_series",
        [](double eps, double mu1, double alpha3) {
            ComparisonReport rep;
            {
                py::gil_scoped_release release;
                rep = compare_time_series(eps, mu1, alpha3);
            }
            py::dict out;
            for (const auto& c : rep.cases) out[py::str(c.name)] = to_string(c.outcome);
            return out;
        },
        py::arg("eps"), py::arg("mu1"), py::arg("alpha3"));
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a command line; returns (exit_code, stdout, stderr).");
}
