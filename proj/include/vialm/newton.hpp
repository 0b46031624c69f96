#pragma once

#include "vialm/problem.hpp"

#include <string>
#include <vector>

namespace vialm {

struct SubproblemSolver {
    enum class Linear { CG, Direct };

    Linear linear       = Linear::CG;
    double cg_tol_rel   = 1e-12;
    int cg_max_it_per_dim = 10;
    bool backtracking   = true;
    double bt_theta     = 0.5;
    double bt_slope     = 1e-4;
    double bt_min_step  = std::pow(2.0, -30);
    bool gauss_newton   = false; // drop the g'' term even when available
    int max_iter        = 200;
};

struct NewtonStepReport {
    std::vector<double> residual_norms;
    std::vector<int> cg_iters;
    std::vector<int> active_set_sizes;
    int iterations = 0;
    bool converged = false;
    bool gauss_newton = false;
    std::string message;
};

struct NewtonResult {
    Vec x;
    Vec mu; // explicit-bound multiplier (zero for unconstrained solves)
    NewtonStepReport report;
};

/// Semismooth Newton for L_rho(., w) = 0.
NewtonResult solve_unconstrained(const VariationalProblem &P, const Vec &w, double rho,
                                 const Vec &x_start, double eps,
                                 const SubproblemSolver &opts = {});

/// Projected semismooth Newton for the VI over {x : x >= x_lower}
/// (entries of x_lower may be -inf): on exit, ||x - P(x - L_rho(x,w))|| <= eps
/// and the recovered bound multiplier mu satisfies ||L_rho(x,w) + mu|| <= eps.
NewtonResult solve_box_constrained(const VariationalProblem &P, const Vec &w, double rho,
                                   const Vec &x_start, double eps, const Vec &x_lower,
                                   const SubproblemSolver &opts = {});

} // namespace vialm
