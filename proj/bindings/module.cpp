// Python bindings: problem construction from the instance catalog, the
// outer solver, residual evaluation, and the diagnostic probes.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vialm/diagnostics.hpp"
#include "vialm/solver.hpp"
#include "vialm/zoo.hpp"

namespace py = pybind11;
using namespace vialm;

namespace {

ZooInstance make_instance(const std::string &name, int n, double beta, int dim,
                          unsigned seed) {
    if (name == "poisson-control")
        return poisson_control(n);
    if (name == "nash-control")
        return nash_control(n);
    if (name == "param-estimation")
        return param_estimation(n, beta);
    if (name == "l2-counterexample")
        return l2_counterexample(dim);
    if (name == "box-qp")
        return box_qp(dim, seed);
    if (name == "split-box")
        return split_box_diagnostic(n);
    throw std::invalid_argument("unknown problem '" + name + "'");
}

py::dict history_to_dict(const IterationHistory &h) {
    py::list records;
    for (const auto &r : h.records) {
        py::dict d;
        d["k"]           = r.k;
        d["rho"]         = r.rho;
        d["sigma"]       = r.sigma;
        d["V"]           = r.V;
        d["eps"]         = r.eps;
        d["inner_iters"] = r.inner_iters;
        d["feasibility"] = r.feasibility;
        d["normality"]   = r.normality;
        if (r.dist)
            d["dist"] = *r.dist;
        records.append(d);
    }
    const char *status = h.status == SolveStatus::Converged      ? "converged"
                         : h.status == SolveStatus::InnerFailure ? "inner-failure"
                                                                 : "max-outer";
    py::dict out;
    out["records"] = records;
    out["status"]  = status;
    out["x"]       = h.x;
    out["lambda"]  = h.lambda;
    if (h.mu.size() > 0)
        out["mu"] = h.mu;
    return out;
}

SolverConfig config_from_kwargs(const ZooInstance &inst, double rho0, double gamma,
                                double tau, double outer_tol, double inner_tol,
                                int max_outer, const std::string &inner_tol_mode) {
    SolverConfig cfg = inst.default_config();
    if (rho0 > 0) cfg.rho0 = rho0;
    if (gamma > 0) cfg.gamma = gamma;
    if (tau > 0) cfg.tau = tau;
    if (outer_tol > 0) cfg.outer_tol = outer_tol;
    if (inner_tol > 0) cfg.inner_tol = inner_tol;
    if (max_outer > 0) cfg.max_outer = max_outer;
    if (inner_tol_mode == "forcing")
        cfg.inner_tol_mode = SolverConfig::InnerTolMode::Forcing;
    else if (inner_tol_mode != "fixed")
        throw std::invalid_argument("inner_tol_mode must be 'fixed' or 'forcing'");
    cfg.validate();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_vialm, m) {
    m.doc() = "Safeguarded augmented Lagrangian solver for constrained "
              "variational problems";

    py::class_<ZooInstance>(m, "Instance")
        .def_readonly("name", &ZooInstance::name)
        .def_readonly("n", &ZooInstance::n)
        .def_readonly("alpha", &ZooInstance::alpha)
        .def_readonly("beta", &ZooInstance::beta)
        .def_property_readonly("dim",
                               [](const ZooInstance &z) { return z.problem.x_space.dim(); })
        .def_property_readonly("has_exact_solution",
                               [](const ZooInstance &z) {
                                   return z.problem.exact_solution.has_value();
                               })
        .def_property_readonly("exact_x",
                               [](const ZooInstance &z) -> std::optional<Vec> {
                                   if (!z.problem.exact_solution)
                                       return std::nullopt;
                                   return z.problem.exact_solution->x;
                               })
        .def_property_readonly("exact_lambda",
                               [](const ZooInstance &z) -> std::optional<Vec> {
                                   if (!z.problem.exact_solution)
                                       return std::nullopt;
                                   return z.problem.exact_solution->lambda;
                               })
        .def("sigma",
             [](const ZooInstance &z, const Vec &x, const Vec &lam) {
                 const ResidualReport r = sigma(z.problem, x, lam);
                 return py::make_tuple(r.sigma, r.stationarity, r.complementarity);
             },
             py::arg("x"), py::arg("lam"),
             "KKT residual (sigma, stationarity, complementarity)")
        .def("__repr__", [](const ZooInstance &z) {
            return "<Instance '" + z.name + "' dim=" +
                   std::to_string(z.problem.x_space.dim()) + ">";
        });

    m.def("problem_names", &zoo_problem_names);

    m.def("instance", &make_instance, py::arg("name"), py::arg("n") = 64,
          py::arg("beta") = 1.0, py::arg("dim") = 10, py::arg("seed") = 0,
          "Construct a catalog problem by name");

    m.def(
        "solve",
        [](const ZooInstance &inst, double rho0, double gamma, double tau,
           double outer_tol, double inner_tol, int max_outer,
           const std::string &inner_tol_mode) {
            const SolverConfig cfg = config_from_kwargs(
                inst, rho0, gamma, tau, outer_tol, inner_tol, max_outer, inner_tol_mode);
            return history_to_dict(solve(inst.problem, cfg));
        },
        py::arg("instance"), py::arg("rho0") = -1.0, py::arg("gamma") = -1.0,
        py::arg("tau") = -1.0, py::arg("outer_tol") = -1.0, py::arg("inner_tol") = -1.0,
        py::arg("max_outer") = -1, py::arg("inner_tol_mode") = "fixed",
        "Run the augmented Lagrangian loop; returns the iteration history");

    m.def(
        "probe_error_bound",
        [](const ZooInstance &inst, double radius, int n_samples, unsigned seed) {
            const ErrorBoundReport r = probe_error_bound(inst, radius, n_samples, seed);
            py::dict d;
            d["samples"]       = r.samples;
            d["ratio_min"]     = r.ratio_min;
            d["ratio_max"]     = r.ratio_max;
            d["c1_hat"]        = r.c1_hat;
            d["c2_hat"]        = r.c2_hat;
            d["radius"]        = r.radius;
            d["scaling_slope"] = r.scaling_slope;
            d["unbounded"]     = r.unbounded;
            return d;
        },
        py::arg("instance"), py::arg("radius") = 0.5, py::arg("n_samples") = 200,
        py::arg("seed") = 0,
        "Sample dist/sigma ratios near the exact solution");

    m.def(
        "perturbed_kkt_roundtrip",
        [](const ZooInstance &inst, const Vec &alpha, const Vec &beta) {
            const PerturbationSample s = perturbed_kkt_roundtrip(inst, alpha, beta);
            py::dict d;
            d["x"]      = s.x_p;
            d["lambda"] = s.lambda_p;
            d["p_norm"] = s.p_norm;
            d["sigma"]  = s.sigma;
            d["dist"]   = s.dist;
            d["ok"]     = s.ok;
            d["reason"] = s.reason;
            return d;
        },
        py::arg("instance"), py::arg("alpha"), py::arg("beta"),
        "Solve the perturbed KKT system of a box QP instance exactly");

    m.def(
        "sosc_probe",
        [](const ZooInstance &inst, int n_dirs, unsigned seed) {
            const SoscReport r = sosc_probe(inst, n_dirs, seed);
            py::dict d;
            d["min_quotient"]     = r.min_quotient;
            d["eta"]              = r.eta;
            d["samples_accepted"] = r.samples_accepted;
            return d;
        },
        py::arg("instance"), py::arg("n_dirs") = 100, py::arg("seed") = 0,
        "Min Rayleigh quotient over sampled approximate-critical directions");
}
