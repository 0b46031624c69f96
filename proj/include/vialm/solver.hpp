#pragma once

#include "vialm/newton.hpp"
#include "vialm/problem.hpp"

#include <optional>
#include <string>
#include <vector>

namespace vialm {

struct SolverConfig {
    double rho0      = 1.0;
    double gamma     = 10.0;
    double tau       = 0.5;
    double outer_tol = 1e-8;
    int max_outer    = 100;

    enum class InnerTolMode { Fixed, Forcing };
    InnerTolMode inner_tol_mode = InnerTolMode::Fixed;
    double inner_tol = 1e-10; // fixed tolerance, also the cap in forcing mode
    double forcing_z0    = 0.1;
    double forcing_theta = 0.9;

    /// Safeguard set B; defaults to the box [-1e6, 1e6]^dim when unset.
    std::optional<ConvexSet> safeguard;

    std::optional<Vec> x0;
    std::optional<Vec> lambda0;

    SubproblemSolver newton;

    void validate() const;
};

struct IterationRecord {
    int k         = 0;
    double rho    = 0;
    double sigma  = 0;
    double V      = std::numeric_limits<double>::quiet_NaN(); // V(x^k, w^{k-1}, rho_{k-1})
    double eps    = std::numeric_limits<double>::quiet_NaN(); // inner tolerance used for x^k
    int inner_iters = 0;
    std::optional<double> dist; // ||x-xbar||_X + ||lambda-lbar||_H when known
    double feasibility = 0;     // d_K(g(x^k))
    double normality   = 0;     // max sampled <lambda^k, y - g(x^k)>, y in K
};

enum class SolveStatus { Converged, MaxOuterReached, InnerFailure };

struct IterationHistory {
    std::vector<IterationRecord> records;
    SolveStatus status = SolveStatus::MaxOuterReached;
    Vec x;
    Vec lambda; // full multiplier (includes the explicit-block part, if any)
    Vec mu;     // explicit-bound multiplier, empty unless partially penalized
    bool penalty_retry_used = false;

    // config echoes used by history checks
    double gamma     = 10.0;
    double tau       = 0.5;
    double outer_tol = 1e-8;
};

struct RateEstimate {
    double q_hat = 0; // geometric mean of tail ratios sigma_{k+1}/sigma_k
    double rho   = 0; // penalty level of the segment
    int first_k  = 0;
    int last_k   = 0;
    int n_ratios = 0;
};

struct HistoryLawReport {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Safeguarded augmented Lagrangian loop with penalty control and full
/// history recording.
IterationHistory solve(const VariationalProblem &P, const SolverConfig &cfg,
                       const SubproblemSolver &inner);

inline IterationHistory solve(const VariationalProblem &P, const SolverConfig &cfg) {
    return solve(P, cfg, cfg.newton);
}

/// rho_{k+1} = rho_k if k <= 1 or V_new <= tau * V_old, else gamma * rho_k.
/// The first two iterations are burn-in: no comparable V pair exists yet.
double penalty_decision(double V_new, double V_old, int k, double rho_k,
                        const SolverConfig &cfg);

/// Q-linear rate estimate over the final constant-rho segment; requires
/// at least 3 records with sigma > 10 * outer_tol there.
RateEstimate estimate_rate(const IterationHistory &history);

/// Structural checks on a completed history: penalty monotonicity with
/// exact gamma jumps, the tau-decrease rule, terminal feasibility, and
/// approximate normality decay.
HistoryLawReport check_history_laws(const IterationHistory &history);

} // namespace vialm
