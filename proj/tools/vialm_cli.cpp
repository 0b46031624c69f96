#include "vialm/config.hpp"
#include "vialm/diagnostics.hpp"
#include "vialm/tables.hpp"
#include "vialm/zoo.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using namespace vialm;

struct Options {
    std::string problem;
    int n         = 64;
    int dim       = 10;
    double beta   = 1.0;
    unsigned seed = 0;
    std::string format = "text";
    std::string out;
    std::string config_path;

    // solver overrides; negative means "leave the default"
    double rho0 = -1, gamma = -1, tau = -1, outer_tol = -1, inner_tol = -1;
    int max_outer = -1;
    std::string inner_mode;

    double radius = 0.5;
    int samples   = 200;
};

ZooInstance make_instance(const Options &o) {
    if (o.problem == "poisson-control") return poisson_control(o.n);
    if (o.problem == "nash-control") return nash_control(o.n);
    if (o.problem == "param-estimation") return param_estimation(o.n, o.beta);
    if (o.problem == "l2-counterexample") return l2_counterexample(o.n);
    if (o.problem == "box-qp") return box_qp(o.dim, o.seed);
    throw CLI::ValidationError("problem", "unknown problem '" + o.problem +
                                              "'; run 'list' to see the zoo");
}

SolverConfig make_config(const ZooInstance &inst, const Options &o) {
    SolverConfig cfg = inst.default_config();
    if (!o.config_path.empty())
        apply_config_file(o.config_path, cfg);
    if (o.rho0 > 0) cfg.rho0 = o.rho0;
    if (o.gamma > 0) cfg.gamma = o.gamma;
    if (o.tau > 0) cfg.tau = o.tau;
    if (o.outer_tol > 0) cfg.outer_tol = o.outer_tol;
    if (o.inner_tol > 0) cfg.inner_tol = o.inner_tol;
    if (o.max_outer > 0) cfg.max_outer = o.max_outer;
    if (o.inner_mode == "fixed")
        cfg.inner_tol_mode = SolverConfig::InnerTolMode::Fixed;
    else if (o.inner_mode == "forcing")
        cfg.inner_tol_mode = SolverConfig::InnerTolMode::Forcing;
    else if (!o.inner_mode.empty())
        throw CLI::ValidationError("--inner-mode", "must be 'fixed' or 'forcing'");
    cfg.validate();
    return cfg;
}

int status_code(SolveStatus st) {
    switch (st) {
    case SolveStatus::Converged: return 0;
    case SolveStatus::MaxOuterReached: return 2;
    case SolveStatus::InnerFailure: return 3;
    }
    return 2;
}

std::ostream &open_out(const Options &o, std::ofstream &file) {
    if (o.out.empty())
        return std::cout;
    file.open(o.out);
    if (!file)
        throw CLI::ValidationError("--out", "cannot open '" + o.out + "'");
    return file;
}

void add_common(CLI::App *cmd, Options &o, bool with_problem = true) {
    if (with_problem)
        cmd->add_option("problem", o.problem, "zoo problem name")->required();
    cmd->add_option("--n", o.n, "grid parameter / sequence truncation");
    cmd->add_option("--dim", o.dim, "box QP dimension");
    cmd->add_option("--beta", o.beta, "regularization weight (param-estimation)");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--rho0", o.rho0, "initial penalty parameter");
    cmd->add_option("--gamma", o.gamma, "penalty increase factor");
    cmd->add_option("--tau", o.tau, "sufficient-decrease factor, in (0,1)");
    cmd->add_option("--outer-tol", o.outer_tol, "termination tolerance on sigma");
    cmd->add_option("--inner-tol", o.inner_tol, "subproblem tolerance");
    cmd->add_option("--max-outer", o.max_outer, "outer iteration cap");
    cmd->add_option("--inner-mode", o.inner_mode, "inner tolerance mode: fixed|forcing");
    cmd->add_option("--config", o.config_path, "key=value config file");
    cmd->add_option("--format", o.format, "text|csv")
        ->check(CLI::IsMember({"text", "csv"}));
    cmd->add_option("--out", o.out, "output path (default: standard output)");
}

int run_solve(const Options &o, bool table_only) {
    const ZooInstance inst = make_instance(o);
    const SolverConfig cfg = make_config(inst, o);
    const IterationHistory hist = solve(inst.problem, cfg);

    std::ofstream file;
    std::ostream &os = open_out(o, file);
    if (o.format == "csv")
        write_history_csv(os, hist);
    else
        write_history_text(os, hist);
    if (!table_only && o.format == "text") {
        const char *label = hist.status == SolveStatus::Converged ? "converged"
                            : hist.status == SolveStatus::MaxOuterReached
                                ? "max outer iterations reached"
                                : "inner solver failure";
        os << "status: " << label << "  final sigma: "
           << format_sci3(hist.records.back().sigma) << "\n";
    }
    return status_code(hist.status);
}

int run_errorbound(const Options &o) {
    const ZooInstance inst = make_instance(o);
    const ErrorBoundReport rep = probe_error_bound(inst, o.radius, o.samples, o.seed);
    std::ofstream file;
    std::ostream &os = open_out(o, file);
    if (o.format == "csv") {
        os << "samples,radius,ratio_min,ratio_max,c1_hat,c2_hat,scaling_slope,unbounded\n"
           << rep.samples << ',' << rep.radius << ',' << rep.ratio_min << ','
           << rep.ratio_max << ',' << rep.c1_hat << ',' << rep.c2_hat << ','
           << rep.scaling_slope << ',' << (rep.unbounded ? 1 : 0) << "\n";
    } else {
        os << "samples:       " << rep.samples << "\n"
           << "radius:        " << format_sci3(rep.radius) << "\n"
           << "dist/sigma in  [" << format_sci3(rep.ratio_min) << ", "
           << format_sci3(rep.ratio_max) << "]\n"
           << "scaling slope: " << format_sci3(rep.scaling_slope) << "\n"
           << "verdict:       "
           << (rep.unbounded ? "UNBOUNDED (no local error bound)" : "bounded") << "\n";
    }
    return 0;
}

void run_list() {
    std::cout << "poisson-control     --n <grid>            box-constrained Poisson control\n"
                 "nash-control        --n <grid>            two-player Nash control\n"
                 "param-estimation    --n <grid> --beta <b>  1-D coefficient estimation\n"
                 "l2-counterexample   --n <m>                truncated sequence example\n"
                 "box-qp              --dim <d> --seed <s>   random box QP\n";
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Safeguarded augmented Lagrangian solver for constrained "
                 "variational problems"};
    app.require_subcommand(1);

    Options o;
    auto *solve_cmd = app.add_subcommand("solve", "run the solver, print a summary");
    add_common(solve_cmd, o);
    auto *table_cmd = app.add_subcommand("table", "run and emit the iteration table");
    add_common(table_cmd, o);
    auto *eb_cmd = app.add_subcommand("errorbound", "sample the primal-dual error bound");
    add_common(eb_cmd, o);
    eb_cmd->add_option("--radius", o.radius, "sampling ball radius");
    eb_cmd->add_option("--samples", o.samples, "number of samples");
    auto *list_cmd = app.add_subcommand("list", "list zoo problems");

    try {
        app.parse(argc, argv);
        if (list_cmd->parsed()) {
            run_list();
            return 0;
        }
        if (solve_cmd->parsed())
            return run_solve(o, false);
        if (table_cmd->parsed())
            return run_solve(o, true);
        return run_errorbound(o);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
