#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vialm/solver.hpp"
#include "vialm/zoo.hpp"

using namespace vialm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// F(x) = x - 1, g(x) = x, K = (-inf, 0]; KKT point (0, 1).
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
    P.exact_solution       = KKTPair{Vec::Zero(1), Vec::Ones(1)};
    return P;
}

IterationHistory geometric_history(double ratio, int count, double rho) {
    IterationHistory h;
    h.outer_tol = 1e-30;
    for (int k = 0; k < count; ++k) {
        IterationRecord r;
        r.k     = k;
        r.rho   = rho;
        r.sigma = std::pow(ratio, k);
        h.records.push_back(r);
    }
    return h;
}

} // namespace

TEST_CASE("penalty decision rule") {
    SolverConfig cfg;
    cfg.tau   = 0.5;
    cfg.gamma = 10.0;

    // burn-in: no comparable utility pair exists before k = 2
    CHECK(penalty_decision(5.0, 1.0, 0, 1.0, cfg) == 1.0);
    CHECK(penalty_decision(5.0, 1.0, 1, 1.0, cfg) == 1.0);

    CHECK(penalty_decision(0.4, 1.0, 2, 1.0, cfg) == 1.0);
    CHECK(penalty_decision(0.5, 1.0, 2, 1.0, cfg) == 1.0); // boundary keeps rho
    CHECK(penalty_decision(0.6, 1.0, 2, 1.0, cfg) == 10.0);
    CHECK(penalty_decision(0.6, 1.0, 7, 3.0, cfg) == 30.0);

    CHECK_THROWS(penalty_decision(-0.1, 1.0, 2, 1.0, cfg));
    CHECK_THROWS(penalty_decision(0.1, -1.0, 2, 1.0, cfg));
}

TEST_CASE("scalar problem converges to the hand KKT point") {
    const VariationalProblem P = scalar_problem();
    SolverConfig cfg;
    cfg.outer_tol = 1e-8;
    const IterationHistory h = solve(P, cfg);
    CHECK(h.status == SolveStatus::Converged);
    CHECK(std::abs(h.x[0]) <= 1e-8);
    CHECK(h.lambda[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(h.records.back().sigma <= 1e-8);
    CHECK(check_history_laws(h).ok);
}

TEST_CASE("starting at the exact solution terminates immediately") {
    const VariationalProblem P = scalar_problem();
    SolverConfig cfg;
    cfg.x0      = Vec::Zero(1);
    cfg.lambda0 = Vec::Ones(1);
    const IterationHistory h = solve(P, cfg);
    CHECK(h.status == SolveStatus::Converged);
    CHECK(h.records.size() == 1);
    CHECK(h.records[0].sigma <= cfg.outer_tol);
}

TEST_CASE("invalid configurations are rejected up front") {
    SolverConfig cfg;
    cfg.tau = 1.5;
    CHECK_THROWS(cfg.validate());
    cfg.tau   = 0.5;
    cfg.gamma = 1.0;
    CHECK_THROWS(cfg.validate());
    cfg.gamma     = 10.0;
    cfg.outer_tol = 0.0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("box QP run: laws, V-sigma inequality, determinism") {
    const ZooInstance inst = box_qp(10, 7);
    SolverConfig cfg       = inst.default_config();
    const IterationHistory h1 = solve(inst.problem, cfg);
    const IterationHistory h2 = solve(inst.problem, cfg);

    CHECK(h1.status == SolveStatus::Converged);
    CHECK(check_history_laws(h1).ok);
    REQUIRE(h1.records.size() == h2.records.size());
    for (size_t k = 0; k < h1.records.size(); ++k) {
        CHECK(h1.records[k].sigma == h2.records[k].sigma);
        CHECK(h1.records[k].rho == h2.records[k].rho);
    }

    // inner inexactness accounts for the gap between V and sigma
    for (size_t k = 1; k < h1.records.size(); ++k) {
        const auto &r = h1.records[k];
        if (std::isfinite(r.V))
            CHECK(r.V + r.eps >= r.sigma * (1.0 - 1e-9));
    }

    // dist column tracks the exact solution
    CHECK(h1.records.back().dist.has_value());
    CHECK(*h1.records.back().dist <= 1e-6);
}

TEST_CASE("safeguard invariance when multipliers stay inside B") {
    const ZooInstance inst = box_qp(6, 2);
    SolverConfig tight     = inst.default_config();
    SolverConfig huge      = inst.default_config();
    huge.safeguard = ConvexSet::scalar_box(-1e12, 1e12, 6);
    const IterationHistory a = solve(inst.problem, tight);
    const IterationHistory b = solve(inst.problem, huge);
    REQUIRE(a.records.size() == b.records.size());
    for (size_t k = 0; k < a.records.size(); ++k)
        CHECK(a.records[k].sigma == b.records[k].sigma);
}

TEST_CASE("forcing mode keeps the inner tolerance below z_k sigma_k") {
    const ZooInstance inst = box_qp(10, 7);
    SolverConfig cfg       = inst.default_config();
    cfg.inner_tol_mode     = SolverConfig::InnerTolMode::Forcing;
    cfg.forcing_z0         = 0.1;
    cfg.forcing_theta      = 0.9;
    const IterationHistory h = solve(inst.problem, cfg);
    CHECK(h.status == SolveStatus::Converged);
    for (size_t k = 1; k < h.records.size(); ++k) {
        const double sig_prev = h.records[k - 1].sigma;
        const double z_prev   = 0.1 * std::pow(0.9, static_cast<double>(k - 1));
        if (sig_prev > 0)
            CHECK(h.records[k].eps <= z_prev * sig_prev * (1 + 1e-12));
        CHECK(h.records[k].eps <= cfg.inner_tol * (1 + 1e-12));
    }
}

TEST_CASE("rate estimation") {
    const IterationHistory geo = geometric_history(0.5, 12, 1.0);
    const RateEstimate est     = estimate_rate(geo);
    CHECK(est.q_hat == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(est.rho == 1.0);
    CHECK(est.n_ratios == 11);

    CHECK_THROWS(estimate_rate(geometric_history(0.5, 2, 1.0)));

    // only the final constant-rho segment counts
    IterationHistory mixed = geometric_history(0.5, 12, 1.0);
    for (int k = 0; k < 6; ++k)
        mixed.records[k].rho = 0.1; // earlier segment at another rho
    const RateEstimate tail = estimate_rate(mixed);
    CHECK(tail.n_ratios == 5);
    CHECK(tail.q_hat == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("history law violations are reported") {
    IterationHistory h = geometric_history(0.5, 5, 1.0);
    h.records[3].rho   = 2.0; // jump x2 under gamma = 10
    h.records[4].rho   = 2.0;
    h.gamma            = 10.0;
    const HistoryLawReport rep = check_history_laws(h);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].find("law(i)") != std::string::npos);

    IterationHistory dec = geometric_history(0.5, 5, 1.0);
    dec.records[2].rho   = 10.0;
    dec.records[3].rho   = 1.0; // decrease
    dec.records[4].rho   = 1.0;
    CHECK_FALSE(check_history_laws(dec).ok);

    // tau-decrease violation on a constant-rho stretch
    IterationHistory flat = geometric_history(0.5, 6, 1.0);
    flat.tau              = 0.5;
    for (auto &r : flat.records)
        r.V = 1.0; // no decrease at all
    const HistoryLawReport rep2 = check_history_laws(flat);
    CHECK_FALSE(rep2.ok);
    CHECK(rep2.violations[0].find("law(ii)") != std::string::npos);
}
