// Python bindings: dict-returning wrappers around the benchmark cases, the
// time stepper, the convergence studies, the projection sweep, and the
// manufactured-source oracle.

#include "fsifem/analysis.hpp"
#include "fsifem/config.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace fsifem;

namespace {

CaseDef case_by_name(const std::string& name, double gamma, double length) {
    if (name != "channel_periodic" && name != "channel_traction" && name != "heat_wave")
        throw std::invalid_argument("unknown case '" + name +
                                    "' (channel_periodic | channel_traction | heat_wave)");
    RunConfig cfg;
    cfg.case_name = name;
    cfg.gamma = gamma;
    cfg.length = length;
    return make_case(cfg);
}

std::pair<CaseDef, ElementChoice> case_and_element(const std::string& cname,
                                                   const std::string& ename, double gamma,
                                                   double length) {
    CaseDef c = case_by_name(cname, gamma, length);
    ElementChoice e = element_by_name(ename);
    if (e.kind != c.kind)
        throw std::invalid_argument("element '" + ename + "' does not apply to case '" + cname +
                                    "'");
    return {std::move(c), e};
}

py::dict report_to_dict(const ConvergenceReport& rep) {
    py::dict d;
    d["case"] = rep.case_name;
    d["element"] = rep.element_name;
    py::list rows;
    for (const SweepRow& r : rep.rows) {
        py::dict rd;
        rd["h"] = r.h;
        rd["tau"] = r.tau;
        for (int i = 0; i < 5; ++i) rd[kErrorColumns[i]] = r.err[i];
        rows.append(rd);
    }
    d["rows"] = rows;
    d["rates"] = rep.rates;
    d["adjacent"] = rep.adjacent;
    d["converged_columns"] = rep.converged_columns;
    d["gates"] = rep.gates;
    d["pass"] = rep.pass;
    return d;
}

py::dict report_to_dict(const RitzReport& rep) {
    py::dict d;
    d["case"] = rep.case_name;
    d["element"] = rep.element_name;
    py::list rows;
    for (const RitzRow& r : rep.rows) {
        py::dict rd;
        rd["h"] = r.h;
        for (int i = 0; i < 4; ++i) rd[kRitzColumns[i]] = r.sup[i];
        rows.append(rd);
    }
    d["rows"] = rows;
    d["rates"] = rep.rates;
    d["adjacent"] = rep.adjacent;
    d["converged_columns"] = rep.converged_columns;
    d["gates"] = rep.gates;
    d["pass"] = rep.pass;
    return d;
}

py::dict mesh_info(const std::string& cname, double h, double gamma, double length) {
    const CaseDef c = case_by_name(cname, gamma, length);
    const Mesh m = build_structured_mesh(c.geom, h);
    py::dict d;
    d["nx"] = m.nx;
    d["ny"] = m.ny;
    d["n_nodes"] = m.n_nodes();
    d["n_triangles"] = m.n_tris();
    d["n_edges"] = static_cast<int>(m.edges.size());
    d["h"] = m.h();
    d["issues"] = validate_mesh(m);
    return d;
}

py::dict run(const std::string& cname, const std::string& ename, double h, double tau, double T,
             double gamma, double length, bool interpolate_eta) {
    const auto [c, e] = case_and_element(cname, ename, gamma, length);
    const int n = steps_for(T, tau);
    if (n < 1) throw std::invalid_argument("run: T and tau must give at least one step");
    const Mesh m = build_structured_mesh(c.geom, h);
    const DofLayout layout = build_layout(m, c.kind, e.velocity);
    RunResult r;
    {
        py::gil_scoped_release release;
        r = run_case(layout, c, T / n, n, interpolate_eta);
    }
    py::dict d;
    d["case"] = cname;
    d["element"] = ename;
    d["h"] = m.h();
    d["tau"] = T / n;
    py::list records;
    for (const StepRecord& rec : r.records) {
        py::dict rd;
        rd["step"] = rec.step;
        rd["t"] = rec.t;
        rd["err_u_L2"] = rec.err_u_l2;
        rd["err_u_H1"] = rec.err_u_h1;
        rd["err_eta_L2"] = rec.err_eta_l2;
        rd["err_eta_H1"] = rec.err_eta_h1;
        rd["err_w_L2"] = rec.err_w_l2;
        rd["energy"] = rec.energy;
        rd["solver_residual"] = rec.solver_residual;
        records.append(rd);
    }
    d["records"] = records;
    return d;
}

py::dict verify(const std::string& cname, int n_samples, unsigned long long seed, double gamma,
                double length) {
    const CaseDef c = case_by_name(cname, gamma, length);
    VerifyReport rep;
    {
        py::gil_scoped_release release;
        rep = verify_sources(c, n_samples, static_cast<unsigned>(seed));
    }
    py::dict d;
    d["case"] = cname;
    d["pass"] = rep.pass;
    d["max_residual"] = rep.max_residual;
    d["n_checks"] = rep.n_checks;
    py::dict lines;
    for (const auto& line : rep.lines) lines[py::str(line.check)] = line.max_residual;
    d["lines"] = lines;
    return d;
}

py::dict fit_rate_py(const std::vector<std::pair<double, double>>& pairs) {
    const RateFit fit = fit_rate(pairs);
    py::dict d;
    d["slope"] = fit.slope;
    d["adjacent"] = fit.adjacent;
    d["converged_to_zero"] = fit.converged_to_zero;
    return d;
}

} // namespace

PYBIND11_MODULE(_fsifem, mod) {
    mod.doc() = "Finite element solver for a coupled Stokes/wave (and heat/wave) system: "
                "monolithic Crank-Nicolson stepping, dynamic Ritz projection, and "
                "manufactured-solution convergence studies.";
    mod.attr("__version__") = "0.1.0";

    mod.def("case_names", []() {
        return std::vector<std::string>{"channel_periodic", "channel_traction", "heat_wave"};
    });

    mod.def("mesh_info", &mesh_info, py::arg("case"), py::arg("h"), py::arg("gamma") = 0.01,
            py::arg("length") = 1.0,
            "Build the structured mesh for a case at target size h and report its shape "
            "and validation issues.");

    mod.def("run", &run, py::arg("case"), py::arg("element"), py::arg("h"), py::arg("tau"),
            py::arg("T"), py::arg("gamma") = 0.01, py::arg("length") = 1.0,
            py::arg("interpolate_eta") = false,
            "Time-step one case to T, returning the per-step error, energy, and residual "
            "records.  tau is adjusted to hit T in a whole number of steps.");

    mod.def("verify_sources", &verify, py::arg("case"), py::arg("n_samples") = 200,
            py::arg("seed") = 12345, py::arg("gamma") = 0.01, py::arg("length") = 1.0,
            "Check the manufactured sources of a case against finite differences of its "
            "exact solution at random sample points.");

    mod.def(
        "convergence_space",
        [](const std::string& cname, const std::string& ename, const std::vector<double>& h_list,
           double tau, double T, double tol, int jobs, double gamma, double length) {
            const auto [c, e] = case_and_element(cname, ename, gamma, length);
            ConvergenceReport rep;
            {
                py::gil_scoped_release release;
                rep = convergence_space(c, e, h_list, tau, T, tol, jobs);
            }
            return report_to_dict(rep);
        },
        py::arg("case"), py::arg("element"), py::arg("h_list"), py::arg("tau"), py::arg("T"),
        py::arg("tol") = 0.25, py::arg("jobs") = 1, py::arg("gamma") = 0.01,
        py::arg("length") = 1.0,
        "Spatial convergence sweep against the exact solution; errors are sups over the "
        "time grid.");

    mod.def(
        "convergence_time",
        [](const std::string& cname, const std::string& ename, double h,
           const std::vector<double>& tau_list, double T, double tol, int jobs, double gamma,
           double length) {
            const auto [c, e] = case_and_element(cname, ename, gamma, length);
            ConvergenceReport rep;
            {
                py::gil_scoped_release release;
                rep = convergence_time(c, e, h, tau_list, T, tol, jobs);
            }
            return report_to_dict(rep);
        },
        py::arg("case"), py::arg("element"), py::arg("h"), py::arg("tau_list"), py::arg("T"),
        py::arg("tol") = 0.25, py::arg("jobs") = 1, py::arg("gamma") = 0.01,
        py::arg("length") = 1.0,
        "Temporal convergence sweep on one mesh against a small-step reference run.");

    mod.def(
        "self_convergence",
        [](const std::string& cname, const std::string& ename, const std::vector<double>& h_list,
           double h_ref, double tau, double T, double tol, int jobs, double gamma,
           double length) {
            const auto [c, e] = case_and_element(cname, ename, gamma, length);
            ConvergenceReport rep;
            {
                py::gil_scoped_release release;
                rep = self_convergence(c, e, h_list, h_ref, tau, T, tol, jobs);
            }
            return report_to_dict(rep);
        },
        py::arg("case"), py::arg("element"), py::arg("h_list"), py::arg("h_ref"), py::arg("tau"),
        py::arg("T"), py::arg("tol") = 0.4, py::arg("jobs") = 1, py::arg("gamma") = 0.01,
        py::arg("length") = 1.0,
        "Mesh self-convergence against a fine reference run, for cases without an exact "
        "solution.");

    mod.def(
        "ritz_sweep",
        [](const std::string& cname, const std::string& ename, const std::vector<double>& h_list,
           double T, double tol, int jobs, double gamma, double length) {
            const auto [c, e] = case_and_element(cname, ename, gamma, length);
            RitzReport rep;
            {
                py::gil_scoped_release release;
                rep = ritz_sweep(c, e, h_list, T, tol, jobs);
            }
            return report_to_dict(rep);
        },
        py::arg("case"), py::arg("element"), py::arg("h_list"), py::arg("T") = 0.25,
        py::arg("tol") = 0.25, py::arg("jobs") = 1, py::arg("gamma") = 0.01,
        py::arg("length") = 1.0,
        "Dynamic Ritz projection error sweep (sup over output times per mesh).");

    mod.def("fit_rate", &fit_rate_py, py::arg("pairs"),
            "Least-squares convergence order from (h, error) pairs.");
}
