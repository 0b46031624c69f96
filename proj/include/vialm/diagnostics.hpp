#pragma once

#include "vialm/zoo.hpp"

namespace vialm {

/// Sampled estimate of the two-sided error bound
///   c1 * sigma(x, lambda) <= ||x - xbar|| + ||lambda - lbar|| <= c2 * sigma
/// near a known KKT pair.
struct ErrorBoundReport {
    int samples      = 0;
    double ratio_min = 0; // min dist/sigma, estimates c1
    double ratio_max = 0; // max dist/sigma, estimates c2
    double c1_hat    = 0;
    double c2_hat    = 0;
    double radius    = 0;
    /// least-squares slope of log(ratio) against log(dist); a markedly
    /// negative slope means ratios blow up as samples approach the solution
    double scaling_slope = 0;
    bool unbounded       = false;
};

struct PerturbationSample {
    Vec alpha, beta;
    Vec x_p, lambda_p;
    double p_norm = 0; // ||alpha|| + ||beta||
    double sigma  = 0;
    double dist   = 0; // ||x_p - xbar|| + ||lambda_p - lbar||
    bool ok       = false;
    std::string reason;
};

struct SoscReport {
    double min_quotient = 0; // min <DL(xbar,lbar) d, d> / ||d||^2 over samples
    double eta          = 0; // critical-cone slack used in the filter
    int samples_accepted = 0;
};

/// Samples primal-dual pairs in a ball of the given radius around the exact
/// solution (log-uniform scales, plus any structured probe family of the
/// instance) and reports dist/sigma statistics. Deterministic given seed.
ErrorBoundReport probe_error_bound(const ZooInstance &inst, double radius,
                                   int n_samples, unsigned seed);

/// Solves the perturbed KKT system L(x,lambda) = alpha,
/// lambda in N_K(g(x) - beta) exactly for a box QP instance (substituting
/// y = x - beta reduces it to a shifted box VI) and verifies the solution.
PerturbationSample perturbed_kkt_roundtrip(const ZooInstance &inst, const Vec &alpha,
                                           const Vec &beta);

/// Min Rayleigh quotient of the Lagrangian derivative over sampled
/// approximate-critical directions; positive values are evidence (not
/// proof) of the second-order sufficient condition.
SoscReport sosc_probe(const ZooInstance &inst, int n_dirs, unsigned seed);

} // namespace vialm
