#include "vialm/solver.hpp"

#include <cmath>
#include <random>

namespace vialm {

namespace {

/// Deterministic sample of points in K for the approximate-normality probe.
std::vector<Vec> normality_sample(const ConvexSet &K, const Vec &g_now) {
    std::vector<Vec> ys;
    ys.push_back(K.project(Vec::Zero(K.dim())));
    ys.push_back(K.project(g_now));
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    for (int s = 0; s < 6; ++s) {
        Vec r(K.dim());
        for (int i = 0; i < r.size(); ++i)
            r[i] = gauss(rng);
        ys.push_back(K.project(g_now + r));
    }
    return ys;
}

double normality_value(const VariationalProblem &P, const Vec &x, const Vec &lambda) {
    const Vec g = P.eval_g(x);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto &y : normality_sample(P.K, g))
        worst = std::max(worst, P.h_space.inner(lambda, y - g));
    return worst;
}

} // namespace

void SolverConfig::validate() const {
    if (!(rho0 > 0)) throw std::invalid_argument("SolverConfig: rho0 must be positive");
    if (!(gamma > 1)) throw std::invalid_argument("SolverConfig: gamma must exceed 1");
    if (!(tau > 0 && tau < 1)) throw std::invalid_argument("SolverConfig: tau must be in (0,1)");
    if (!(outer_tol > 0)) throw std::invalid_argument("SolverConfig: outer_tol must be positive");
    if (!(inner_tol > 0)) throw std::invalid_argument("SolverConfig: inner_tol must be positive");
    if (max_outer < 1) throw std::invalid_argument("SolverConfig: max_outer must be >= 1");
    if (inner_tol_mode == InnerTolMode::Forcing) {
        if (!(forcing_z0 > 0) || !(forcing_theta > 0 && forcing_theta < 1))
            throw std::invalid_argument("SolverConfig: invalid forcing parameters");
    }
}

double penalty_decision(double V_new, double V_old, int k, double rho_k,
                        const SolverConfig &cfg) {
    if (V_new < 0 || (k > 1 && V_old < 0))
        throw std::invalid_argument("penalty_decision: V values must be nonnegative");
    // the k=1 comparison would pit a warm-started subproblem against the
    // cold-start one (w^0 need not resemble any multiplier); both burn-in
    // iterations keep rho, the test fires from k=2 on
    if (k <= 1 || V_new <= cfg.tau * V_old)
        return rho_k;
    return cfg.gamma * rho_k;
}

IterationHistory solve(const VariationalProblem &P, const SolverConfig &cfg,
                       const SubproblemSolver &inner) {
    cfg.validate();

    const bool partial = static_cast<bool>(P.partial);
    const VariationalProblem &Peff = partial ? *P.partial->equality : P;
    const int xdim   = P.x_space.dim();
    const int hdim   = P.h_space.dim();       // full multiplier dimension
    const int pendim = Peff.h_space.dim();    // penalized (augmented) block
    const int mudim  = partial ? P.partial->mu_dim : 0;

    IterationHistory hist;
    hist.gamma     = cfg.gamma;
    hist.tau       = cfg.tau;
    hist.outer_tol = cfg.outer_tol;

    Vec x = cfg.x0.value_or(Vec::Zero(xdim));
    P.x_space.check_dim(x);
    Vec lam = cfg.lambda0.value_or(Vec::Zero(pendim));
    Peff.h_space.check_dim(lam);
    Vec mu_x = Vec::Zero(xdim); // explicit-bound multiplier in x coordinates

    ConvexSet B = cfg.safeguard.value_or(ConvexSet::scalar_box(-1e6, 1e6, pendim));
    if (B.dim() != pendim)
        throw std::invalid_argument("solve: safeguard set dimension mismatch");

    auto full_lambda = [&]() -> Vec {
        if (!partial) return lam;
        Vec full(hdim);
        full.head(mudim) = mu_x.head(mudim);
        full.tail(pendim) = lam;
        return full;
    };

    double rho    = cfg.rho0;
    double V_prev = std::numeric_limits<double>::quiet_NaN();
    double V_cur  = std::numeric_limits<double>::quiet_NaN();
    double eps_used = std::numeric_limits<double>::quiet_NaN();
    int inner_iters = 0;

    hist.status = SolveStatus::MaxOuterReached;
    for (int k = 0; k <= cfg.max_outer; ++k) {
        const Vec lam_full = full_lambda();
        const double sig   = sigma(P, x, lam_full).sigma;

        IterationRecord rec;
        rec.k           = k;
        rec.rho         = rho;
        rec.sigma       = sig;
        rec.V           = V_cur;
        rec.eps         = eps_used;
        rec.inner_iters = inner_iters;
        const Vec g = P.eval_g(x);
        rec.feasibility = P.h_space.norm(g - P.K.project(g));
        rec.normality   = normality_value(P, x, lam_full);
        if (P.exact_solution)
            rec.dist = P.x_space.dist(x, P.exact_solution->x) +
                       P.h_space.dist(lam_full, P.exact_solution->lambda);
        hist.records.push_back(rec);

        if (sig <= cfg.outer_tol) {
            hist.status = SolveStatus::Converged;
            break;
        }
        if (k == cfg.max_outer)
            break;

        const Vec w = B.project(lam);
        double eps  = cfg.inner_tol;
        if (cfg.inner_tol_mode == SolverConfig::InnerTolMode::Forcing && sig > 0)
            eps = std::min(cfg.inner_tol,
                           cfg.forcing_z0 * std::pow(cfg.forcing_theta, k) * sig);

        auto run_inner = [&](double rho_try) {
            return partial ? solve_box_constrained(Peff, w, rho_try, x, eps,
                                                   P.partial->x_lower, inner)
                           : solve_unconstrained(Peff, w, rho_try, x, eps, inner);
        };

        NewtonResult nr = run_inner(rho);
        if (!nr.report.converged) {
            // a penalty increase can regularize the subproblem; one retry
            rho *= cfg.gamma;
            hist.penalty_retry_used = true;
            nr = run_inner(rho);
            if (!nr.report.converged) {
                hist.status = SolveStatus::InnerFailure;
                break;
            }
        }

        const Vec x_new   = nr.x;
        const Vec lam_new = multiplier_update(Peff, x_new, w, rho);
        mu_x              = nr.mu;

        double V_new = utility_V(Peff, x_new, w, rho);
        if (partial) {
            // account for the explicit-bound multiplier: stationarity of the
            // subproblem holds for L_rho + mu, and the unpenalized block
            // contributes its own feasibility-complementarity measure
            V_new = P.x_space.norm(aug_lagrangian(Peff, x_new, w, rho) + mu_x);
            const Vec g2 = Peff.eval_g(x_new);
            V_new += Peff.h_space.norm(g2 - Peff.K.project(g2 + w / rho));
            const Vec g1  = P.eval_g(x_new).head(mudim);
            const Vec mu1 = mu_x.head(mudim);
            V_new += (g1 - (g1 + mu1).cwiseMax(0.0)).norm();
        }

        const double rho_next = penalty_decision(V_new, V_prev, k, rho, cfg);
        V_prev = V_new;
        V_cur  = V_new;
        eps_used    = eps;
        inner_iters = nr.report.iterations;
        x   = x_new;
        lam = lam_new;
        rho = rho_next;
    }

    hist.x      = x;
    hist.lambda = full_lambda();
    if (partial)
        hist.mu = mu_x.head(mudim);
    return hist;
}

RateEstimate estimate_rate(const IterationHistory &history) {
    const auto &rec = history.records;
    if (rec.size() < 2)
        throw std::invalid_argument("estimate_rate: insufficient history");

    // final maximal segment of constant rho
    int seg_start = static_cast<int>(rec.size()) - 1;
    while (seg_start > 0 && rec[seg_start - 1].rho == rec.back().rho)
        --seg_start;

    const double thresh = 10.0 * history.outer_tol;
    std::vector<double> ratios;
    int first = -1, last = -1;
    for (int k = seg_start; k + 1 < static_cast<int>(rec.size()); ++k) {
        if (rec[k].sigma > thresh && rec[k + 1].sigma > thresh) {
            ratios.push_back(rec[k + 1].sigma / rec[k].sigma);
            if (first < 0) first = k;
            last = k + 1;
        }
    }
    if (ratios.size() < 2)
        throw std::invalid_argument(
            "estimate_rate: need at least 3 tail records above 10*outer_tol");

    double log_sum = 0;
    for (double r : ratios)
        log_sum += std::log(r);
    RateEstimate est;
    est.q_hat    = std::exp(log_sum / static_cast<double>(ratios.size()));
    est.rho      = rec.back().rho;
    est.first_k  = first;
    est.last_k   = last;
    est.n_ratios = static_cast<int>(ratios.size());
    return est;
}

HistoryLawReport check_history_laws(const IterationHistory &history) {
    HistoryLawReport rep;
    const auto &rec = history.records;
    auto fail = [&](const std::string &msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };

    for (size_t k = 0; k + 1 < rec.size(); ++k) {
        const double r0 = rec[k].rho, r1 = rec[k + 1].rho;
        if (r1 < r0)
            fail("law(i): rho decreased at iteration " + std::to_string(k + 1));
        else if (r1 != r0) {
            const double jump = r1 / r0;
            if (std::abs(jump - history.gamma) > 1e-9 * history.gamma &&
                std::abs(jump - history.gamma * history.gamma) > 1e-9)
                fail("law(i): rho jump is not a gamma multiple at iteration " +
                     std::to_string(k + 1));
        }
    }
    for (size_t k = 2; k + 1 < rec.size(); ++k) {
        if (rec[k].rho == rec[k + 1].rho && std::isfinite(rec[k].V) &&
            std::isfinite(rec[k + 1].V)) {
            if (rec[k + 1].V > history.tau * rec[k].V * (1 + 1e-12))
                fail("law(ii): tau-decrease violated at iteration " + std::to_string(k + 1));
        }
    }
    if (!rec.empty() && history.status == SolveStatus::Converged) {
        if (rec.back().feasibility > 10.0 * history.outer_tol)
            fail("law(iii): terminal infeasibility above tolerance");
        const double lam_scale = 1.0 + history.lambda.cwiseAbs().maxCoeff();
        if (rec.back().normality > 1e-6 * lam_scale)
            fail("law(iv): approximate normality did not decay");
    }
    return rep;
}

} // namespace vialm
