#pragma once

#include "vialm/sets.hpp"
#include "vialm/space.hpp"

#include <memory>
#include <optional>

namespace vialm {

struct KKTPair {
    Vec x;
    Vec lambda;
};

struct PartialPenalization; // forward, see below

/// Variational problem: find x with <F(x), v> >= 0 on the tangent cone of
/// M = {x : g(x) in K}. Dual elements are identified with primal vectors
/// through the x_space inner product (Riesz representatives throughout).
struct VariationalProblem {
    DiscreteSpace x_space;
    DiscreteSpace h_space;
    ConvexSet K;

    std::function<Vec(const Vec &x)> eval_F;
    /// Optional scalar potential with Riesz gradient F; enables objective
    /// line searches in the bound-constrained subproblem solver.
    std::function<double(const Vec &x)> eval_J;
    std::function<Vec(const Vec &x)> eval_g;
    std::function<Vec(const Vec &x, const Vec &dx)> apply_gprime;
    std::function<Vec(const Vec &x, const Vec &lam)> apply_gprime_adjoint;

    // optional second-order data
    std::function<Vec(const Vec &x, const Vec &dx)> apply_Fprime;
    std::function<Vec(const Vec &x, const Vec &lam, const Vec &dx)> second_order_term;

    std::optional<KKTPair> exact_solution;

    /// Set when only part of the constraint is augmented; the remaining
    /// inequality is handled explicitly by the inner solver.
    std::shared_ptr<PartialPenalization> partial;
};

/// Equality-only augmentation with an explicit componentwise lower bound
/// on a sub-block of x. `equality` shares x with the full problem but its
/// constraint is the augmented block alone.
struct PartialPenalization {
    std::shared_ptr<VariationalProblem> equality;
    Vec x_lower;          // -inf where unconstrained
    int mu_dim = 0;       // H-dimension of the explicit block in the full problem
};

struct ResidualReport {
    double stationarity   = 0; // ||L(x,lambda)||_{X*}
    double complementarity = 0; // ||g(x) - P_K(g(x)+lambda)||_H
    double sigma          = 0; // their sum
};

/// L(x,lambda) = F(x) + g'(x)^* lambda (Riesz representative).
Vec lagrangian(const VariationalProblem &P, const Vec &x, const Vec &lambda);

/// KKT residual; zero exactly at KKT points.
ResidualReport sigma(const VariationalProblem &P, const Vec &x, const Vec &lambda);

/// L_rho(x,lambda) = F(x) + rho g'(x)^* [g + lambda/rho - P_K(g + lambda/rho)].
Vec aug_lagrangian(const VariationalProblem &P, const Vec &x, const Vec &lambda, double rho);

/// lambda^+ = rho [g(x) + w/rho - P_K(g(x) + w/rho)]; lies in the polar
/// of K_inf, and equals P_{K_polar}(w + rho g(x)) when K is a cone.
Vec multiplier_update(const VariationalProblem &P, const Vec &x, const Vec &w, double rho);

/// V(x,w,rho) = ||L_rho(x,w)||_{X*} + ||g(x) - P_K(g(x)+w/rho)||_H.
double utility_V(const VariationalProblem &P, const Vec &x, const Vec &w, double rho);

} // namespace vialm
