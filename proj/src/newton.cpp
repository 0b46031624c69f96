#include "vialm/newton.hpp"

#include <Eigen/Dense>

namespace vialm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct JacobianAction {
    const VariationalProblem &P;
    const Vec &x;
    double rho;
    Vec clamp_mask;   // 1 where P_K is locally the identity
    Vec bracket_mult; // rho * (y - P_K(y)), current bracket multiplier
    bool use_second_order;

    JacobianAction(const VariationalProblem &P_, const Vec &x_, const Vec &w, double rho_,
                   bool gauss_newton)
        : P(P_), x(x_), rho(rho_) {
        const Vec y      = P.eval_g(x) + w / rho;
        clamp_mask       = P.K.projection_derivative_mask(y);
        bracket_mult     = rho * (y - P.K.project(y));
        use_second_order = !gauss_newton && static_cast<bool>(P.second_order_term);
    }

    Vec operator()(const Vec &dx) const {
        Vec out = P.apply_Fprime(x, dx);
        const Vec gd = P.apply_gprime(x, dx);
        out += rho * P.apply_gprime_adjoint(
                         x, ((1.0 - clamp_mask.array()) * gd.array()).matrix());
        if (use_second_order)
            out += P.second_order_term(x, bracket_mult, dx);
        return out;
    }
};

int active_count(const Vec &mask) {
    return static_cast<int>((mask.array() == 0.0).count());
}

/// CG in the x_space inner product; the Newton operator is self-adjoint
/// with respect to that metric for all supported problems.
Vec conjugate_gradient(const DiscreteSpace &space, const JacobianAction &A, const Vec &b,
                       double tol_rel, int max_it, int &iters) {
    Vec x = Vec::Zero(b.size());
    Vec r = b;
    Vec p = r;
    double rr       = space.inner(r, r);
    const double bb = std::sqrt(space.inner(b, b));
    const double stop = std::max(tol_rel * bb, 1e-300);
    iters = 0;
    while (std::sqrt(rr) > stop && iters < max_it) {
        const Vec Ap    = A(p);
        const double pAp = space.inner(p, Ap);
        if (pAp <= 0)
            throw std::runtime_error(
                "CG breakdown: Newton operator not positive definite; "
                "consider increasing the penalty parameter");
        const double alpha = rr / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        const double rr_new = space.inner(r, r);
        p = r + (rr_new / rr) * p;
        rr = rr_new;
        ++iters;
    }
    return x;
}

Eigen::MatrixXd dense_jacobian(const JacobianAction &A, int dim) {
    Eigen::MatrixXd J(dim, dim);
    Vec e = Vec::Zero(dim);
    for (int j = 0; j < dim; ++j) {
        e[j]     = 1.0;
        J.col(j) = A(e);
        e[j]     = 0.0;
    }
    return J;
}

} // namespace

NewtonResult solve_unconstrained(const VariationalProblem &P, const Vec &w, double rho,
                                 const Vec &x_start, double eps,
                                 const SubproblemSolver &opts) {
    if (!(eps > 0))
        throw std::invalid_argument("solve_unconstrained: eps must be positive");
    if (!P.apply_Fprime)
        throw std::invalid_argument("solve_unconstrained: problem lacks apply_Fprime");

    NewtonResult res;
    res.x = x_start;
    res.report.gauss_newton = opts.gauss_newton;
    const int dim = P.x_space.dim();

    Vec R      = aug_lagrangian(P, res.x, w, rho);
    double nrm = P.x_space.norm(R);
    res.report.residual_norms.push_back(nrm);

    for (int it = 0; it < opts.max_iter; ++it) {
        if (nrm <= eps) {
            res.report.converged = true;
            break;
        }
        const JacobianAction A(P, res.x, w, rho, opts.gauss_newton);
        res.report.active_set_sizes.push_back(active_count(A.clamp_mask));

        Vec d;
        int cg_it = 0;
        if (opts.linear == SubproblemSolver::Linear::CG) {
            d = conjugate_gradient(P.x_space, A, -R, opts.cg_tol_rel,
                                   opts.cg_max_it_per_dim * dim, cg_it);
        } else {
            Eigen::MatrixXd J = dense_jacobian(A, dim);
            d = J.partialPivLu().solve(-R);
        }
        res.report.cg_iters.push_back(cg_it);

        double t = 1.0;
        Vec x_new;
        Vec R_new;
        double nrm_new;
        while (true) {
            x_new   = res.x + t * d;
            R_new   = aug_lagrangian(P, x_new, w, rho);
            nrm_new = P.x_space.norm(R_new);
            if (!opts.backtracking || nrm_new <= (1.0 - opts.bt_slope * t) * nrm)
                break;
            t *= opts.bt_theta;
            if (t < opts.bt_min_step) {
                res.report.message = "line search failed";
                res.mu = Vec::Zero(dim);
                res.report.iterations = it;
                return res;
            }
        }
        res.x = x_new;
        R     = R_new;
        nrm   = nrm_new;
        res.report.residual_norms.push_back(nrm);
        res.report.iterations = it + 1;
    }
    if (!res.report.converged && nrm <= eps)
        res.report.converged = true;
    if (!res.report.converged && res.report.message.empty())
        res.report.message = "max inner iterations reached";
    res.mu = Vec::Zero(dim);
    return res;
}

NewtonResult solve_box_constrained(const VariationalProblem &P, const Vec &w, double rho,
                                   const Vec &x_start, double eps, const Vec &x_lower,
                                   const SubproblemSolver &opts) {
    if (!(eps > 0))
        throw std::invalid_argument("solve_box_constrained: eps must be positive");
    if (!P.apply_Fprime)
        throw std::invalid_argument("solve_box_constrained: problem lacks apply_Fprime");
    P.x_space.check_dim(x_lower);

    const int dim = P.x_space.dim();
    NewtonResult res;
    res.x = x_start.cwiseMax(x_lower);
    res.report.gauss_newton = opts.gauss_newton;

    auto clamp = [&](const Vec &v) { return v.cwiseMax(x_lower); };
    auto natural_residual = [&](const Vec &x, const Vec &R) -> Vec {
        return x - clamp(x - R);
    };
    auto recover_mu = [&](const Vec &x, const Vec &R) -> Vec {
        Vec mu = Vec::Zero(dim);
        for (int i = 0; i < dim; ++i)
            if (x_lower[i] != -kInf && x[i] - R[i] <= x_lower[i])
                mu[i] = -R[i];
        return mu;
    };

    // scalar augmented objective, available when F is a gradient field;
    // line searches on it stay robust where the Newton model is indefinite
    auto aug_objective = [&](const Vec &x) {
        const Vec y = P.eval_g(x) + w / rho;
        const Vec r = y - P.K.project(y);
        return P.eval_J(x) + 0.5 * rho * P.h_space.inner(r, r);
    };
    const bool has_obj = static_cast<bool>(P.eval_J);

    Vec R      = aug_lagrangian(P, res.x, w, rho);
    Vec Phi    = natural_residual(res.x, R);
    double nrm = P.x_space.norm(Phi);
    res.report.residual_norms.push_back(nrm);

    for (int it = 0; it < opts.max_iter; ++it) {
        const Vec mu = recover_mu(res.x, R);
        if (nrm <= eps && P.x_space.norm(R + mu) <= eps) {
            res.report.converged = true;
            res.mu               = mu;
            break;
        }
        const JacobianAction A(P, res.x, w, rho, opts.gauss_newton);

        // active rows of the clamp system get d_i = lower_i - x_i, the rest
        // solve the reduced Newton equation
        std::vector<int> act, inact;
        for (int i = 0; i < dim; ++i) {
            if (x_lower[i] != -kInf && res.x[i] - R[i] <= x_lower[i])
                act.push_back(i);
            else
                inact.push_back(i);
        }
        res.report.active_set_sizes.push_back(static_cast<int>(act.size()));

        Eigen::MatrixXd J = dense_jacobian(A, dim);
        Vec d             = Vec::Zero(dim);
        for (int i : act)
            d[i] = x_lower[i] - res.x[i];
        const int ni = static_cast<int>(inact.size());
        if (ni > 0) {
            Eigen::MatrixXd Jii(ni, ni);
            Vec rhs(ni);
            for (int a = 0; a < ni; ++a) {
                rhs[a] = -R[inact[a]];
                for (int b = 0; b < ni; ++b)
                    Jii(a, b) = J(inact[a], inact[b]);
                for (int i : act)
                    rhs[a] -= J(inact[a], i) * d[i];
            }
            const Vec di = Jii.partialPivLu().solve(rhs);
            for (int a = 0; a < ni; ++a)
                d[inact[a]] = di[a];
        }
        res.report.cg_iters.push_back(0);

        // the Newton model can be indefinite away from the solution; fall
        // back to the projected gradient when the step is not a descent
        // direction for the augmented objective
        if (has_obj && P.x_space.inner(R, d) >= 0) {
            d = -R;
            for (int i : act)
                d[i] = x_lower[i] - res.x[i];
        }

        double t = 1.0;
        const double obj_cur = has_obj ? aug_objective(res.x) : 0.0;
        Vec x_new, R_new, Phi_new;
        double nrm_new = 0;
        while (true) {
            x_new = clamp(res.x + t * d);
            bool accept;
            if (has_obj) {
                const double pred = P.x_space.inner(R, x_new - res.x);
                accept = pred <= 0 &&
                         aug_objective(x_new) <= obj_cur + opts.bt_slope * pred;
            } else {
                R_new   = aug_lagrangian(P, x_new, w, rho);
                Phi_new = natural_residual(x_new, R_new);
                nrm_new = P.x_space.norm(Phi_new);
                accept  = nrm_new <= (1.0 - opts.bt_slope * t) * nrm;
            }
            if (!opts.backtracking || accept)
                break;
            t *= opts.bt_theta;
            if (t < opts.bt_min_step) {
                res.report.message    = "line search failed";
                res.mu                = recover_mu(res.x, R);
                res.report.iterations = it;
                return res;
            }
        }
        if (has_obj) {
            R_new   = aug_lagrangian(P, x_new, w, rho);
            Phi_new = natural_residual(x_new, R_new);
            nrm_new = P.x_space.norm(Phi_new);
        }
        res.x = x_new;
        R     = R_new;
        Phi   = Phi_new;
        nrm   = nrm_new;
        res.report.residual_norms.push_back(nrm);
        res.report.iterations = it + 1;
    }
    if (!res.report.converged) {
        res.mu = recover_mu(res.x, R);
        if (nrm <= eps && P.x_space.norm(R + res.mu) <= eps)
            res.report.converged = true;
        else if (res.report.message.empty())
            res.report.message = "max inner iterations reached";
    }
    return res;
}

} // namespace vialm
