#include "vialm/diagnostics.hpp"

#include <cmath>
#include <random>

namespace vialm {

namespace {

Vec gaussian(std::mt19937 &rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = g(rng);
    return v;
}

/// Componentwise bounds of a box-like set (Box, cones, products thereof).
void component_bounds(const ConvexSet &K, int offset, Vec &lo, Vec &up) {
    switch (K.kind()) {
    case ConvexSet::Kind::Box:
        lo.segment(offset, K.dim()) = K.lower();
        up.segment(offset, K.dim()) = K.upper();
        break;
    case ConvexSet::Kind::NonnegativeCone:
        lo.segment(offset, K.dim()).setZero();
        up.segment(offset, K.dim()).setConstant(std::numeric_limits<double>::infinity());
        break;
    case ConvexSet::Kind::ZeroSet:
        lo.segment(offset, K.dim()).setZero();
        up.segment(offset, K.dim()).setZero();
        break;
    case ConvexSet::Kind::Product:
        for (const auto &f : K.factors())
            component_bounds(f.set, offset + f.start, lo, up);
        break;
    default:
        throw std::invalid_argument("sosc_probe: set has no componentwise bounds");
    }
}

} // namespace

ErrorBoundReport probe_error_bound(const ZooInstance &inst, double radius,
                                   int n_samples, unsigned seed) {
    if (!inst.problem.exact_solution)
        throw std::invalid_argument("probe_error_bound: instance lacks exact_solution");
    if (!(radius > 0) || n_samples < 1)
        throw std::invalid_argument("probe_error_bound: invalid radius or sample count");

    const VariationalProblem &P = inst.problem;
    const Vec &xbar = P.exact_solution->x;
    const Vec &lbar = P.exact_solution->lambda;

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<std::pair<double, double>> pts;    // (dist, ratio)
    std::vector<std::pair<double, double>> family; // structured subset
    auto add_point = [&](const Vec &x, const Vec &lam, bool structured) {
        const double s = sigma(P, x, lam).sigma;
        if (s <= 1e-14)
            return;
        const double dist = P.x_space.dist(x, xbar) + P.h_space.dist(lam, lbar);
        if (dist > radius)
            return;
        pts.emplace_back(dist, dist / s);
        if (structured)
            family.emplace_back(dist, dist / s);
    };

    for (int i = 0; i < n_samples; ++i) {
        Vec ux = gaussian(rng, P.x_space.dim());
        Vec ul = gaussian(rng, P.h_space.dim());
        const double nx = P.x_space.norm(ux), nl = P.h_space.norm(ul);
        if (nx > 0) ux /= nx;
        if (nl > 0) ul /= nl;
        // log-uniform scales over [radius/100, radius] so the fit below can
        // see how ratios behave as samples approach the solution
        const double s = 0.5 * radius * std::pow(10.0, -2.0 * uni(rng));
        add_point(xbar + s * ux, lbar + s * ul, false);
    }
    for (const auto &pt : inst.probe_family)
        add_point(pt.x, pt.lambda, true);

    ErrorBoundReport rep;
    rep.radius  = radius;
    rep.samples = static_cast<int>(pts.size());
    if (pts.empty())
        return rep;

    rep.ratio_min = std::numeric_limits<double>::infinity();
    rep.ratio_max = 0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (const auto &[dist, ratio] : pts) {
        rep.ratio_min = std::min(rep.ratio_min, ratio);
        rep.ratio_max = std::max(rep.ratio_max, ratio);
        lo = std::min(lo, dist);
        hi = std::max(hi, dist);
    }
    rep.c1_hat = rep.ratio_min;
    rep.c2_hat = rep.ratio_max;

    // slope of log(ratio) against log(dist). A structured family is the
    // instance's own near-solution curve and is fitted directly; random
    // clouds use the per-bin worst ratio so dense well-behaved samples
    // cannot mask a thin run of exploding ratios.
    if (family.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto &[dist, ratio] : family) {
            const double lx = std::log(dist), ly = std::log(ratio);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        }
        const double n     = static_cast<double>(family.size());
        const double denom = n * sxx - sx * sx;
        if (denom > 1e-12)
            rep.scaling_slope = (n * sxy - sx * sy) / denom;
    } else if (hi > lo * (1 + 1e-12)) {
        constexpr int kBins = 6;
        const double llo = std::log(lo), lhi = std::log(hi);
        std::vector<double> bin_max(kBins, 0.0);
        for (const auto &[dist, ratio] : pts) {
            int b = static_cast<int>(kBins * (std::log(dist) - llo) / (lhi - llo));
            b = std::min(b, kBins - 1);
            bin_max[b] = std::max(bin_max[b], ratio);
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int b = 0; b < kBins; ++b) {
            if (bin_max[b] <= 0)
                continue;
            const double lx = llo + (b + 0.5) * (lhi - llo) / kBins;
            const double ly = std::log(bin_max[b]);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        const double denom = n * sxx - sx * sx;
        if (n >= 2 && denom > 1e-12)
            rep.scaling_slope = (n * sxy - sx * sy) / denom;
    }
    rep.unbounded = rep.scaling_slope < -0.5;
    return rep;
}

PerturbationSample perturbed_kkt_roundtrip(const ZooInstance &inst, const Vec &alpha,
                                           const Vec &beta) {
    if (!inst.qp_data)
        throw std::invalid_argument("perturbed_kkt_roundtrip: box QP instance required");
    const auto &qp = *inst.qp_data;
    const VariationalProblem &P = inst.problem;
    P.x_space.check_dim(alpha);
    P.h_space.check_dim(beta);

    PerturbationSample smp;
    smp.alpha  = alpha;
    smp.beta   = beta;
    smp.p_norm = P.x_space.norm(alpha) + P.h_space.norm(beta);

    // substituting y = x - beta turns the perturbed system into the box VI
    // with shifted linear term b + alpha - A beta
    const Vec b_shift = qp.b + alpha - qp.A * beta;
    const KKTPair sol = box_vi_solve(qp.A, b_shift, qp.lower, qp.upper);
    smp.x_p      = sol.x + beta;
    smp.lambda_p = sol.lambda;

    const Vec L_res = qp.A * smp.x_p - qp.b + smp.lambda_p - alpha;
    const Vec y     = smp.x_p - beta;
    const Vec comp  = y - (y + smp.lambda_p).cwiseMax(qp.lower).cwiseMin(qp.upper);
    if (L_res.norm() > 1e-10)
        smp.reason = "stationarity residual of the perturbed system too large";
    else if (comp.norm() > 1e-10)
        smp.reason = "complementarity of the perturbed system violated";
    else
        smp.ok = true;

    smp.sigma = sigma(P, smp.x_p, smp.lambda_p).sigma;
    if (P.exact_solution)
        smp.dist = P.x_space.dist(smp.x_p, P.exact_solution->x) +
                   P.h_space.dist(smp.lambda_p, P.exact_solution->lambda);
    return smp;
}

SoscReport sosc_probe(const ZooInstance &inst, int n_dirs, unsigned seed) {
    const VariationalProblem &P = inst.problem;
    if (!P.exact_solution)
        throw std::invalid_argument("sosc_probe: instance lacks exact_solution");
    if (!P.apply_Fprime)
        throw std::invalid_argument("sosc_probe: instance lacks apply_Fprime");
    if (P.h_space.dim() != P.x_space.dim())
        throw std::invalid_argument("sosc_probe: needs componentwise constraint block");

    const Vec &xbar = P.exact_solution->x;
    const Vec &lbar = P.exact_solution->lambda;
    const Vec Fbar  = P.eval_F(xbar);
    const Vec gbar  = P.eval_g(xbar);
    const int dim   = P.x_space.dim();

    Vec lo(dim), up(dim);
    component_bounds(P.K, 0, lo, up);

    SoscReport rep;
    rep.eta = 1e-6 * std::max(P.x_space.norm(Fbar), 1e-6);
    rep.min_quotient = std::numeric_limits<double>::infinity();

    std::mt19937 rng(seed);
    const double act_tol = 1e-10;
    int attempts = 0;
    while (rep.samples_accepted < n_dirs && attempts < 100 * n_dirs) {
        ++attempts;
        Vec d = gaussian(rng, dim);
        // force g'(xbar) d into the tangent cone: zero on strongly active
        // bounds, inward-pointing on weakly active ones (g' is diagonal
        // with positive entries on every probed instance)
        for (int i = 0; i < dim; ++i) {
            const bool at_lo = gbar[i] <= lo[i] + act_tol;
            const bool at_up = gbar[i] >= up[i] - act_tol;
            if ((at_lo && lbar[i] < -act_tol) || (at_up && lbar[i] > act_tol))
                d[i] = 0;
            else if (at_lo)
                d[i] = std::abs(d[i]);
            else if (at_up)
                d[i] = -std::abs(d[i]);
        }
        const double nd = P.x_space.norm(d);
        if (nd < 1e-12)
            continue;
        if (P.x_space.inner(Fbar, d) > rep.eta * nd)
            continue;

        Vec DLd = P.apply_Fprime(xbar, d);
        if (P.second_order_term)
            DLd += P.second_order_term(xbar, lbar, d);
        rep.min_quotient = std::min(rep.min_quotient, P.x_space.inner(DLd, d) / (nd * nd));
        ++rep.samples_accepted;
    }
    if (rep.samples_accepted == 0)
        rep.min_quotient = 0;
    return rep;
}

} // namespace vialm
