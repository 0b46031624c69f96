#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vialm/newton.hpp"
#include "vialm/zoo.hpp"

using namespace vialm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// F(x) = x - 1, g(x) = x, K = (-inf, 0].
VariationalProblem scalar_problem() {
    VariationalProblem P;
    P.x_space = DiscreteSpace::euclidean(1);
    P.h_space = DiscreteSpace::euclidean(1);
    P.K       = ConvexSet::box(Vec::Constant(1, -kInf), Vec::Zero(1));
    P.eval_F  = [](const Vec &x) { return Vec::Constant(1, x[0] - 1.0); };
    P.eval_g  = [](const Vec &x) { return x; };
    P.apply_gprime         = [](const Vec &, const Vec &dx) { return dx; };
    P.apply_gprime_adjoint = [](const Vec &, const Vec &lam) { return lam; };
    P.apply_Fprime         = [](const Vec &, const Vec &dx) { return dx; };
    return P;
}

} // namespace

TEST_CASE("scalar subproblem has the hand-computed zero") {
    const VariationalProblem P = scalar_problem();
    const Vec w                = Vec::Zero(1);

    // L_1(x, 0) = x - 1 + x on the active branch; zero at x = 1/2
    SubproblemSolver opts;
    const NewtonResult res =
        solve_unconstrained(P, w, 1.0, Vec::Constant(1, 2.0), 1e-12, opts);
    CHECK(res.report.converged);
    CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(P.x_space.norm(aug_lagrangian(P, res.x, w, 1.0)) <= 1e-12);
}

TEST_CASE("start at the subproblem solution costs zero steps") {
    const VariationalProblem P = scalar_problem();
    const NewtonResult res =
        solve_unconstrained(P, Vec::Zero(1), 1.0, Vec::Constant(1, 0.5), 1e-10);
    CHECK(res.report.converged);
    CHECK(res.report.iterations == 0);
}

TEST_CASE("invalid inputs are rejected") {
    const VariationalProblem P = scalar_problem();
    CHECK_THROWS(solve_unconstrained(P, Vec::Zero(1), 1.0, Vec::Zero(1), 0.0));
    VariationalProblem Q = P;
    Q.apply_Fprime       = nullptr;
    CHECK_THROWS(solve_unconstrained(Q, Vec::Zero(1), 1.0, Vec::Zero(1), 1e-8));
}

TEST_CASE("box QP subproblems converge with monotone residuals") {
    for (unsigned seed : {1u, 5u, 9u}) {
        const ZooInstance inst = box_qp(8, seed);
        SubproblemSolver opts;
        opts.linear = SubproblemSolver::Linear::Direct;
        const NewtonResult res = solve_unconstrained(inst.problem, Vec::Zero(8), 1.0,
                                                     Vec::Zero(8), 1e-10, opts);
        CHECK(res.report.converged);
        const auto &norms = res.report.residual_norms;
        for (size_t i = 0; i + 1 < norms.size(); ++i)
            CHECK(norms[i + 1] <= norms[i] * (1 + 1e-12));

        // near the solution the clamp pattern is identified and stays fixed
        const NewtonResult warm = solve_unconstrained(
            inst.problem, Vec::Zero(8), 1.0, res.x + Vec::Constant(8, 1e-7), 1e-12, opts);
        CHECK(warm.report.converged);
        const auto &as = warm.report.active_set_sizes;
        for (size_t i = 0; i + 1 < as.size(); ++i)
            CHECK(as[i] == as[i + 1]);
    }
}

TEST_CASE("CG and direct linear solvers agree") {
    const ZooInstance inst = box_qp(10, 4);
    SubproblemSolver cg, direct;
    cg.linear     = SubproblemSolver::Linear::CG;
    direct.linear = SubproblemSolver::Linear::Direct;
    const Vec w   = Vec::Constant(10, 0.3);
    const NewtonResult a =
        solve_unconstrained(inst.problem, w, 5.0, Vec::Zero(10), 1e-11, cg);
    const NewtonResult b =
        solve_unconstrained(inst.problem, w, 5.0, Vec::Zero(10), 1e-11, direct);
    CHECK(a.report.converged);
    CHECK(b.report.converged);
    CHECK(inst.problem.x_space.dist(a.x, b.x) <= 1e-8);
}

TEST_CASE("scalar bound-constrained solve recovers the bound multiplier") {
    // minimize q^2/2 subject to q >= 0.1: solution q = 0.1, |mu| = 0.1
    VariationalProblem P;
    P.x_space = DiscreteSpace::euclidean(1);
    P.h_space = DiscreteSpace::euclidean(1);
    P.K       = ConvexSet::box(Vec::Constant(1, -kInf), Vec::Constant(1, kInf));
    P.eval_F  = [](const Vec &x) { return x; };
    P.eval_g  = [](const Vec &x) { return x; };
    P.apply_gprime         = [](const Vec &, const Vec &dx) { return dx; };
    P.apply_gprime_adjoint = [](const Vec &, const Vec &lam) { return lam; };
    P.apply_Fprime         = [](const Vec &, const Vec &dx) { return dx; };

    SubproblemSolver opts;
    opts.linear = SubproblemSolver::Linear::Direct;
    const Vec lower        = Vec::Constant(1, 0.1);
    const NewtonResult res = solve_box_constrained(P, Vec::Zero(1), 1.0,
                                                   Vec::Constant(1, 1.0), 1e-12, lower, opts);
    CHECK(res.report.converged);
    CHECK(res.x[0] == doctest::Approx(0.1));
    CHECK(std::abs(res.mu[0]) == doctest::Approx(0.1));
    // inner criterion: || L_rho + mu || below tolerance
    CHECK((aug_lagrangian(P, res.x, Vec::Zero(1), 1.0) + res.mu).norm() <= 1e-10);
}

TEST_CASE("inactive bound reduces to the unconstrained solve") {
    const VariationalProblem P = scalar_problem();
    SubproblemSolver opts;
    opts.linear     = SubproblemSolver::Linear::Direct;
    const Vec lower = Vec::Constant(1, -kInf);
    const NewtonResult boxed = solve_box_constrained(P, Vec::Zero(1), 1.0,
                                                     Vec::Constant(1, 2.0), 1e-12, lower, opts);
    CHECK(boxed.report.converged);
    CHECK(boxed.x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(boxed.mu.norm() == 0.0);
}
