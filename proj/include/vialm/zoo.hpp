#pragma once

#include "vialm/solver.hpp"

#include <Eigen/Sparse>
#include <memory>
#include <string>

namespace vialm {

/// Uniform grid on (0,1)^2 with n interior points per axis, five-point
/// Laplacian (scaled 1/h^2) and a shared sparse Cholesky factorization.
struct Grid2D {
    int n    = 0;
    double h = 0;
    Eigen::SparseMatrix<double> laplacian;
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> chol;

    explicit Grid2D(int n);
    int dim() const { return n * n; }
    double x1(int idx) const { return h * (idx / n + 1); }
    double x2(int idx) const { return h * (idx % n + 1); }
    /// Poisson solve: (-Laplacian_h)^{-1} w.
    Vec solve(const Vec &w) const { return chol->solve(w); }
    Vec sample(const std::function<double(double, double)> &f) const;
};

/// Uniform grid on (0,1) with n points including the boundary; forward
/// difference gradient, discrete H^1 and H^1_0 metrics (mass + stiffness).
struct Grid1D {
    int n    = 0; // total points
    double h = 0;
    Eigen::SparseMatrix<double> grad_interior; // cells x interior dofs
    Eigen::SparseMatrix<double> lap_interior;  // G~^T G~, SPD
    Eigen::SparseMatrix<double> h1_metric;     // h (I + G^T G) on all nodes
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> lap_chol;
    std::shared_ptr<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> h1_chol;

    explicit Grid1D(int n);
    int n_cells() const { return n - 1; }
    int n_interior() const { return n - 2; }
    double node(int j) const { return h * j; }
};

struct BoxQPData {
    Eigen::MatrixXd A;
    Vec b;
    Vec lower, upper;
};

struct ZooInstance {
    VariationalProblem problem;
    std::string name;
    int n       = 0;
    double alpha = 0;
    double beta  = 0;
    std::string reference_table;
    std::optional<Vec> reference_q0;
    std::shared_ptr<BoxQPData> qp_data;
    /// Structured KKT-neighborhood points worth probing in addition to
    /// random samples (the unbounded-ratio family, when one exists).
    std::vector<KKTPair> probe_family;

    /// Solver defaults matched to this instance (start point, safeguard
    /// set, termination tolerance, inner linear solver).
    SolverConfig default_config() const;

  private:
    friend ZooInstance poisson_control(int, double, double);
    friend ZooInstance nash_control(int);
    friend ZooInstance param_estimation(int, double);
    friend ZooInstance l2_counterexample(int);
    friend ZooInstance box_qp(int, unsigned);
    friend ZooInstance split_box_diagnostic(int);
    std::optional<Vec> x0_;
    std::optional<ConvexSet> safeguard_;
    double outer_tol_ = 1e-8;
    double inner_tol_ = 1e-10;
    SubproblemSolver::Linear linear_ = SubproblemSolver::Linear::CG;
};

/// Reduced Poisson optimal control problem on (0,1)^2 with box-constrained
/// control; the discretized analytic solution pair is attached.
ZooInstance poisson_control(int n, double lower = -0.5, double upper = 0.5);

/// Two-player Nash equilibrium control problem sharing one Poisson state.
ZooInstance nash_control(int n);

/// 1-D elliptic coefficient estimation with H^1 regularization; the PDE
/// block is augmented, the bound q >= alpha stays an explicit constraint.
ZooInstance param_estimation(int n, double beta);

/// Truncation of the square-summable-sequence example to R^m; the exact
/// KKT point is the origin, yet no local error bound holds.
ZooInstance l2_counterexample(int m);

/// Random strongly convex box-constrained QP with an active-set exact
/// solution. dim == 1 always yields the instance A = 2, b = 4.
ZooInstance box_qp(int dim, unsigned seed);

/// Remark-style split reformulation g(u) = (u - a, b - u) of the control
/// bounds; violates the regularity needed for a primal-dual error bound
/// and exists only as a diagnostic.
ZooInstance split_box_diagnostic(int n);

/// Exact solver for the box VI  Ax - b + lambda = 0, lambda in N_[lo,up](x)
/// (projected gradient to convergence plus an active-set polish).
KKTPair box_vi_solve(const Eigen::MatrixXd &A, const Vec &b, const Vec &lower,
                     const Vec &upper, double tol = 1e-13);

std::vector<std::string> zoo_problem_names();

} // namespace vialm
