#include "vialm/zoo.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

namespace vialm {

namespace {
constexpr double kPi  = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------- grids

Grid2D::Grid2D(int n_) : n(n_), h(1.0 / (n_ + 1)) {
    if (n < 4)
        throw std::invalid_argument("Grid2D: n must be at least 4");
    const int N = n * n;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(5 * N);
    const double ih2 = 1.0 / (h * h);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int id = i * n + j;
            trips.emplace_back(id, id, 4.0 * ih2);
            if (i > 0) trips.emplace_back(id, id - n, -ih2);
            if (i < n - 1) trips.emplace_back(id, id + n, -ih2);
            if (j > 0) trips.emplace_back(id, id - 1, -ih2);
            if (j < n - 1) trips.emplace_back(id, id + 1, -ih2);
        }
    laplacian.resize(N, N);
    laplacian.setFromTriplets(trips.begin(), trips.end());
    chol = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    chol->compute(laplacian);
    if (chol->info() != Eigen::Success)
        throw std::runtime_error("Grid2D: Laplacian factorization failed");
}

Vec Grid2D::sample(const std::function<double(double, double)> &f) const {
    Vec v(dim());
    for (int id = 0; id < dim(); ++id)
        v[id] = f(x1(id), x2(id));
    return v;
}

Grid1D::Grid1D(int n_) : n(n_), h(1.0 / (n_ - 1)) {
    if (n < 8)
        throw std::invalid_argument("Grid1D: n must be at least 8");
    const int nc = n_cells(), ni = n_interior();
    std::vector<Eigen::Triplet<double>> tg;
    for (int j = 0; j < nc; ++j) {
        // cell j spans nodes j, j+1; interior dof i sits at node i+1
        if (j >= 1) tg.emplace_back(j, j - 1, -1.0 / h);
        if (j <= nc - 2) tg.emplace_back(j, j, 1.0 / h);
    }
    grad_interior.resize(nc, ni);
    grad_interior.setFromTriplets(tg.begin(), tg.end());
    lap_interior = Eigen::SparseMatrix<double>(grad_interior.transpose() * grad_interior);

    std::vector<Eigen::Triplet<double>> tgf;
    for (int j = 0; j < nc; ++j) {
        tgf.emplace_back(j, j, -1.0 / h);
        tgf.emplace_back(j, j + 1, 1.0 / h);
    }
    Eigen::SparseMatrix<double> Gfull(nc, n);
    Gfull.setFromTriplets(tgf.begin(), tgf.end());
    Eigen::SparseMatrix<double> eye(n, n);
    eye.setIdentity();
    h1_metric = Eigen::SparseMatrix<double>(
        h * (eye + Eigen::SparseMatrix<double>(Gfull.transpose() * Gfull)));

    lap_chol = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    lap_chol->compute(lap_interior);
    h1_chol = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
    h1_chol->compute(h1_metric);
    if (lap_chol->info() != Eigen::Success || h1_chol->info() != Eigen::Success)
        throw std::runtime_error("Grid1D: factorization failed");
}

// ------------------------------------------------------- default config

SolverConfig ZooInstance::default_config() const {
    SolverConfig cfg;
    cfg.x0        = x0_;
    cfg.safeguard = safeguard_;
    cfg.outer_tol = outer_tol_;
    cfg.inner_tol = inner_tol_;
    cfg.newton.linear = linear_;
    return cfg;
}

// --------------------------------------------------- 2-D control problems

ZooInstance poisson_control(int n, double lower, double upper) {
    auto grid    = std::make_shared<Grid2D>(n);
    const int N  = grid->dim();
    const double alpha = 1.0;

    const Vec ybar = grid->sample([](double a, double b) {
        return std::sin(kPi * a) * std::sin(kPi * b);
    });
    const Vec pbar = grid->sample([](double a, double b) {
        return std::sin(2 * kPi * a) * std::sin(2 * kPi * b);
    });
    const Vec ubar = (-pbar / alpha).cwiseMax(lower).cwiseMin(upper);
    const Vec f    = 2 * kPi * kPi * ybar - ubar;          // -Lap(ybar) - ubar
    const Vec yd   = ybar - 8 * kPi * kPi * pbar;          // ybar + Lap(pbar)
    const Vec lbar = -pbar - alpha * ubar;

    // quadrature weight 1/n^2 per node (the grid spacing is 1/(n+1); the
    // reference results use this slightly coarser normalization)
    const DiscreteSpace space = DiscreteSpace::lumped(Vec::Constant(N, 1.0 / (n * n)));

    VariationalProblem P;
    P.x_space = space;
    P.h_space = space;
    P.K       = ConvexSet::scalar_box(lower, upper, N);
    P.eval_F  = [grid, f, yd, alpha](const Vec &u) {
        return Vec(grid->solve(grid->solve(u + f) - yd) + alpha * u);
    };
    P.eval_g = [](const Vec &u) { return u; };
    P.apply_gprime = [](const Vec &, const Vec &dx) { return dx; };
    P.apply_gprime_adjoint = [](const Vec &, const Vec &lam) { return lam; };
    P.apply_Fprime = [grid, alpha](const Vec &, const Vec &dx) {
        return Vec(grid->solve(grid->solve(dx)) + alpha * dx);
    };
    P.exact_solution = KKTPair{ubar, lbar};

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "poisson-control";
    inst.n       = n;
    inst.alpha   = alpha;
    inst.reference_table = "control-benchmark";
    return inst;
}

ZooInstance nash_control(int n) {
    auto grid   = std::make_shared<Grid2D>(n);
    const int N = grid->dim();
    const double a1 = 1.0, a2 = 1.0, lo = -0.5, up = 0.5;

    const Vec ybar = grid->sample([](double a, double b) {
        return std::sin(kPi * a) * std::sin(kPi * b);
    });
    const Vec p1 = grid->sample([](double a, double b) {
        return -std::sin(2 * kPi * a) * std::sin(2 * kPi * b);
    });
    const Vec p2 = grid->sample([](double a, double b) {
        return -std::sin(3 * kPi * a) * std::sin(3 * kPi * b);
    });
    const Vec u1bar = (-p1 / a1).cwiseMax(lo).cwiseMin(up);
    const Vec u2bar = (-p2 / a2).cwiseMax(lo).cwiseMin(up);
    const Vec f     = 2 * kPi * kPi * ybar - u1bar - u2bar;
    const Vec yd1   = ybar - 8 * kPi * kPi * p1;
    const Vec yd2   = ybar - 18 * kPi * kPi * p2;

    Vec xbar(2 * N), lbar(2 * N);
    xbar << u1bar, u2bar;
    lbar << -p1 - a1 * u1bar, -p2 - a2 * u2bar;

    // averaged product norm over the two players, 1/2 weight per block
    const DiscreteSpace space =
        DiscreteSpace::lumped(Vec::Constant(2 * N, 1.0 / (2.0 * n * n)));

    VariationalProblem P;
    P.x_space = space;
    P.h_space = space;
    P.K = ConvexSet::product({{ConvexSet::scalar_box(lo, up, N), 0, N},
                              {ConvexSet::scalar_box(lo, up, N), N, N}});
    P.eval_F = [grid, f, yd1, yd2, a1, a2, N](const Vec &u) {
        const Vec y = grid->solve(u.head(N) + u.tail(N) + f);
        Vec out(2 * N);
        out.head(N) = grid->solve(y - yd1) + a1 * u.head(N);
        out.tail(N) = grid->solve(y - yd2) + a2 * u.tail(N);
        return out;
    };
    P.eval_g = [](const Vec &u) { return u; };
    P.apply_gprime = [](const Vec &, const Vec &dx) { return dx; };
    P.apply_gprime_adjoint = [](const Vec &, const Vec &lam) { return lam; };
    P.apply_Fprime = [grid, a1, a2, N](const Vec &, const Vec &dx) {
        const Vec t = grid->solve(grid->solve(dx.head(N) + dx.tail(N)));
        Vec out(2 * N);
        out.head(N) = t + a1 * dx.head(N);
        out.tail(N) = t + a2 * dx.tail(N);
        return out;
    };
    P.exact_solution = KKTPair{xbar, lbar};

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "nash-control";
    inst.n       = n;
    inst.alpha   = a1;
    inst.reference_table = "nash-benchmark";
    return inst;
}

// ----------------------------------------------- 1-D parameter estimation

namespace {

struct ParamEstOps {
    Grid1D grid;
    double alpha, beta;
    Vec f_int, z_int;

    explicit ParamEstOps(int n, double alpha_, double beta_)
        : grid(n), alpha(alpha_), beta(beta_) {
        const int ni = grid.n_interior();
        f_int.resize(ni);
        z_int.resize(ni);
        for (int i = 0; i < ni; ++i) {
            const double x = grid.node(i + 1);
            f_int[i] = (1 + x) * kPi * kPi * std::sin(kPi * x) - kPi * std::cos(kPi * x);
            z_int[i] = std::sin(kPi * x);
        }
    }

    int nq() const { return grid.n; }
    int nu() const { return grid.n_interior(); }

    Vec cell_grad(const Vec &u) const { return grid.grad_interior * u; }
    Vec apply_Aq(const Vec &qc, const Vec &u) const {
        return grid.grad_interior.transpose() * (qc.asDiagonal() * cell_grad(u));
    }
    Vec pad_cells(const Vec &c) const { // cells -> q-nodes, zero at last node
        Vec out = Vec::Zero(nq());
        out.head(grid.n_cells()) = c;
        return out;
    }

    Vec g2(const Vec &q, const Vec &u) const {
        return grid.lap_chol->solve(apply_Aq(q.head(grid.n_cells()), u) - f_int);
    }
    Vec g2_prime(const Vec &q, const Vec &u, const Vec &dq, const Vec &du) const {
        const Vec rhs = apply_Aq(q.head(grid.n_cells()), du) +
                        grid.grad_interior.transpose() *
                            (dq.head(grid.n_cells()).asDiagonal() * cell_grad(u));
        return grid.lap_chol->solve(rhs);
    }
    // Riesz representatives of the adjoint: r_q in H^1, r_u in H^1_0
    std::pair<Vec, Vec> g2_adjoint(const Vec &q, const Vec &u, const Vec &lam) const {
        const Vec t  = cell_grad(lam);
        const Vec rq = grid.h * grid.h1_chol->solve(
                           pad_cells(cell_grad(u).asDiagonal() * t));
        const Vec ru = grid.lap_chol->solve(apply_Aq(q.head(grid.n_cells()), lam));
        return {rq, ru};
    }
    std::pair<Vec, Vec> g2_second_order(const Vec &lam, const Vec &dq,
                                        const Vec &du) const {
        const Vec t  = cell_grad(lam);
        const Vec sq = grid.h * grid.h1_chol->solve(
                           pad_cells(cell_grad(du).asDiagonal() * t));
        const Vec su = grid.lap_chol->solve(
            grid.grad_interior.transpose() *
            (dq.head(grid.n_cells()).asDiagonal() * t));
        return {sq, su};
    }
};

} // namespace

ZooInstance param_estimation(int n, double beta) {
    if (beta <= 0)
        throw std::invalid_argument("param_estimation: beta must be positive");
    const double alpha = 0.1;
    auto ops = std::make_shared<ParamEstOps>(n, alpha, beta);
    const int nq = ops->nq(), nu = ops->nu();
    const int xdim = nq + nu;

    // block metric H^1(q) x H^1_0(u); X carries the same metric
    auto metric_apply = [ops, nq, nu](const Vec &v) {
        Vec out(nq + nu);
        out.head(nq) = ops->grid.h1_metric * v.head(nq);
        out.tail(nu) = ops->grid.h * (ops->grid.lap_interior * v.tail(nu));
        return out;
    };
    const DiscreteSpace xspace = DiscreteSpace::with_operator(xdim, metric_apply);
    const DiscreteSpace h0_space = DiscreteSpace::with_operator(
        nu, [ops](const Vec &v) { return Vec(ops->grid.h * (ops->grid.lap_interior * v)); });

    auto eval_F = [ops, nq, nu](const Vec &x) {
        Vec out(nq + nu);
        out.head(nq) = ops->beta * x.head(nq);
        out.tail(nu) = x.tail(nu) - ops->z_int;
        return out;
    };
    auto eval_J = [ops, nq, nu](const Vec &x) {
        const Vec q = x.head(nq);
        const Vec e = x.tail(nu) - ops->z_int;
        return 0.5 * ops->beta * q.dot(ops->grid.h1_metric * q) +
               0.5 * ops->grid.h * e.dot(ops->grid.lap_interior * e);
    };
    auto apply_Fprime = [ops, nq, nu](const Vec &, const Vec &dx) {
        Vec out(nq + nu);
        out.head(nq) = ops->beta * dx.head(nq);
        out.tail(nu) = dx.tail(nu);
        return out;
    };

    // equality (augmented) block: g2 alone, K = {0}
    auto eq = std::make_shared<VariationalProblem>();
    eq->x_space = xspace;
    eq->h_space = h0_space;
    eq->K       = ConvexSet::zero_set(nu);
    eq->eval_F  = eval_F;
    eq->eval_J  = eval_J;
    eq->apply_Fprime = apply_Fprime;
    eq->eval_g  = [ops, nq](const Vec &x) { return ops->g2(x.head(nq), x.tail(x.size() - nq)); };
    eq->apply_gprime = [ops, nq](const Vec &x, const Vec &dx) {
        return ops->g2_prime(x.head(nq), x.tail(x.size() - nq), dx.head(nq),
                             dx.tail(dx.size() - nq));
    };
    eq->apply_gprime_adjoint = [ops, nq](const Vec &x, const Vec &lam) {
        auto [rq, ru] = ops->g2_adjoint(x.head(nq), x.tail(x.size() - nq), lam);
        Vec out(x.size());
        out.head(nq) = rq;
        out.tail(x.size() - nq) = ru;
        return out;
    };
    eq->second_order_term = [ops, nq](const Vec &x, const Vec &lam, const Vec &dx) {
        auto [sq, su] = ops->g2_second_order(lam, dx.head(nq), dx.tail(dx.size() - nq));
        Vec out(x.size());
        out.head(nq) = sq;
        out.tail(x.size() - nq) = su;
        return out;
    };

    // full problem: g = (q - alpha, g2), K = nonneg x {0}
    VariationalProblem P;
    P.x_space = xspace;
    P.h_space = DiscreteSpace::with_operator(nq + nu, metric_apply);
    P.K = ConvexSet::product({{ConvexSet::nonnegative_cone(nq), 0, nq},
                              {ConvexSet::zero_set(nu), nq, nu}});
    P.eval_F = eval_F;
    P.eval_J = eval_J;
    P.apply_Fprime = apply_Fprime;
    P.eval_g = [ops, nq, alpha](const Vec &x) {
        Vec out(x.size());
        out.head(nq) = x.head(nq).array() - alpha;
        out.tail(x.size() - nq) = ops->g2(x.head(nq), x.tail(x.size() - nq));
        return out;
    };
    P.apply_gprime = [eq, nq](const Vec &x, const Vec &dx) {
        Vec out(x.size());
        out.head(nq) = dx.head(nq);
        out.tail(x.size() - nq) = eq->apply_gprime(x, dx);
        return out;
    };
    P.apply_gprime_adjoint = [eq, nq](const Vec &x, const Vec &lam) {
        Vec out = eq->apply_gprime_adjoint(x, lam.tail(lam.size() - nq));
        out.head(nq) += lam.head(nq);
        return out;
    };
    P.second_order_term = [eq, nq](const Vec &x, const Vec &lam, const Vec &dx) {
        return eq->second_order_term(x, lam.tail(lam.size() - nq), dx);
    };

    auto pp = std::make_shared<PartialPenalization>();
    pp->equality = eq;
    pp->mu_dim   = nq;
    pp->x_lower  = Vec::Constant(xdim, -kInf);
    pp->x_lower.head(nq).setConstant(alpha);
    P.partial = pp;

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "param-estimation";
    inst.n       = n;
    inst.alpha   = alpha;
    inst.beta    = beta;
    inst.reference_table = "estimation-benchmark";
    Vec q0(nq);
    for (int j = 0; j < nq; ++j)
        q0[j] = 1 + ops->grid.node(j);
    inst.reference_q0 = q0;
    Vec x0 = Vec::Zero(xdim);
    x0.head(nq).setOnes();
    inst.x0_ = x0;
    inst.safeguard_ = ConvexSet::ball(Vec::Zero(nu), 1e6, h0_space);
    inst.outer_tol_ = 1e-4;
    inst.inner_tol_ = 1e-6;
    inst.linear_    = SubproblemSolver::Linear::Direct;
    return inst;
}

// -------------------------------------------------------- small problems

ZooInstance l2_counterexample(int m) {
    if (m < 2)
        throw std::invalid_argument("l2_counterexample: m must be at least 2");
    Vec scale(m);
    for (int i = 0; i < m; ++i)
        scale[i] = 1.0 / (i + 1);

    VariationalProblem P;
    P.x_space = DiscreteSpace::euclidean(m);
    P.h_space = DiscreteSpace::euclidean(m);
    P.K       = ConvexSet::nonnegative_cone(m);
    P.eval_F  = [](const Vec &x) { return x; };
    P.apply_Fprime = [](const Vec &, const Vec &dx) { return dx; };
    P.eval_g  = [scale](const Vec &x) { return Vec(scale.asDiagonal() * x); };
    P.apply_gprime = [scale](const Vec &, const Vec &dx) {
        return Vec(scale.asDiagonal() * dx);
    };
    P.apply_gprime_adjoint = [scale](const Vec &, const Vec &lam) {
        return Vec(scale.asDiagonal() * lam);
    };
    P.exact_solution = KKTPair{Vec::Zero(m), Vec::Zero(m)};

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "l2-counterexample";
    inst.n       = m;
    // family with sigma = k^-3 but dist = k^-2 + k^-1: ratios grow without
    // bound, so no local error bound holds at the origin
    for (int k = 1; k <= m; ++k) {
        const double kk = k;
        Vec x = Vec::Zero(m), lam = Vec::Zero(m);
        x[k - 1]   = 1.0 / (kk * kk);
        lam[k - 1] = -1.0 / kk;
        inst.probe_family.push_back({x, lam});
    }
    return inst;
}

KKTPair box_vi_solve(const Eigen::MatrixXd &A, const Vec &b, const Vec &lower,
                     const Vec &upper, double tol) {
    const int dim = static_cast<int>(b.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double L = es.eigenvalues().maxCoeff();
    Vec x = Vec::Zero(dim).cwiseMax(lower).cwiseMin(upper);
    for (int it = 0; it < 500000; ++it) {
        const Vec x_new = (x - (A * x - b) / L).cwiseMax(lower).cwiseMin(upper);
        const double step = (x_new - x).cwiseAbs().maxCoeff();
        x = x_new;
        if (step < tol) break;
    }
    // active-set polish: fix bound components, solve the reduced system
    std::vector<int> inact;
    Vec x_polish = x;
    const double margin = 1e-8;
    for (int i = 0; i < dim; ++i) {
        if (x[i] <= lower[i] + margin)
            x_polish[i] = lower[i];
        else if (x[i] >= upper[i] - margin)
            x_polish[i] = upper[i];
        else
            inact.push_back(i);
    }
    const int ni = static_cast<int>(inact.size());
    if (ni > 0) {
        Eigen::MatrixXd Aii(ni, ni);
        Vec rhs(ni);
        for (int a = 0; a < ni; ++a) {
            rhs[a] = b[inact[a]];
            for (int c = 0; c < dim; ++c)
                if (std::find(inact.begin(), inact.end(), c) == inact.end())
                    rhs[a] -= A(inact[a], c) * x_polish[c];
            for (int c = 0; c < ni; ++c)
                Aii(a, c) = A(inact[a], inact[c]);
        }
        const Vec xi = Aii.ldlt().solve(rhs);
        for (int a = 0; a < ni; ++a)
            x_polish[inact[a]] = xi[a];
    }
    if ((x_polish.array() >= lower.array()).all() &&
        (x_polish.array() <= upper.array()).all())
        x = x_polish;
    return {x, Vec(b - A * x)};
}

ZooInstance box_qp(int dim, unsigned seed) {
    if (dim < 1 || dim > 50)
        throw std::invalid_argument("box_qp: dim must be in [1, 50]");

    auto data = std::make_shared<BoxQPData>();
    if (dim == 1) {
        data->A = Eigen::MatrixXd::Constant(1, 1, 2.0);
        data->b = Vec::Constant(1, 4.0);
    } else {
        std::mt19937 rng(seed);
        std::normal_distribution<double> gauss;
        std::uniform_real_distribution<double> eig(1.0, 10.0);
        Eigen::MatrixXd R(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                R(i, j) = gauss(rng);
        const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
        Vec eigs(dim);
        for (int i = 0; i < dim; ++i)
            eigs[i] = eig(rng);
        data->A = Q * eigs.asDiagonal() * Q.transpose();
        std::uniform_real_distribution<double> span(-2.0, 2.0);
        Vec y0(dim);
        for (int i = 0; i < dim; ++i)
            y0[i] = span(rng);
        data->b = data->A * y0;
    }
    data->lower = Vec::Constant(dim, -1.0);
    data->upper = Vec::Constant(dim, 1.0);

    const Eigen::MatrixXd A = data->A;
    const Vec b = data->b;

    VariationalProblem P;
    P.x_space = DiscreteSpace::euclidean(dim);
    P.h_space = DiscreteSpace::euclidean(dim);
    P.K       = ConvexSet::box(data->lower, data->upper);
    P.eval_F  = [A, b](const Vec &x) { return Vec(A * x - b); };
    P.apply_Fprime = [A](const Vec &, const Vec &dx) { return Vec(A * dx); };
    P.eval_g = [](const Vec &x) { return x; };
    P.apply_gprime = [](const Vec &, const Vec &dx) { return dx; };
    P.apply_gprime_adjoint = [](const Vec &, const Vec &lam) { return lam; };
    P.exact_solution = box_vi_solve(data->A, data->b, data->lower, data->upper);

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "box-qp";
    inst.n       = dim;
    inst.qp_data = data;
    inst.linear_ = SubproblemSolver::Linear::Direct;
    return inst;
}

ZooInstance split_box_diagnostic(int n) {
    ZooInstance base = poisson_control(n);
    auto grid = std::make_shared<Grid2D>(n);
    const int N = grid->dim();
    const double lo = -0.5, up = 0.5;

    VariationalProblem P = base.problem;
    P.exact_solution.reset();
    P.h_space = DiscreteSpace::lumped(Vec::Constant(2 * N, 1.0 / (n * n)));
    P.K       = ConvexSet::nonnegative_cone(2 * N);
    P.eval_g  = [N, lo, up](const Vec &u) {
        Vec out(2 * N);
        out.head(N) = u.array() - lo;
        out.tail(N) = up - u.array();
        return out;
    };
    P.apply_gprime = [N](const Vec &, const Vec &dx) {
        Vec out(2 * N);
        out.head(N) = dx;
        out.tail(N) = -dx;
        return out;
    };
    P.apply_gprime_adjoint = [N](const Vec &, const Vec &lam) {
        return Vec(lam.head(N) - lam.tail(N));
    };

    ZooInstance inst;
    inst.problem = std::move(P);
    inst.name    = "poisson-control-split";
    inst.n       = n;
    inst.alpha   = 1.0;
    return inst;
}

std::vector<std::string> zoo_problem_names() {
    return {"poisson-control", "nash-control", "param-estimation", "l2-counterexample",
            "box-qp"};
}

} // namespace vialm
