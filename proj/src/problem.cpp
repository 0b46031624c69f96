#include "vialm/problem.hpp"

namespace vialm {

namespace {
void require_rho(double rho) {
    if (!(rho > 0))
        throw std::invalid_argument("penalty parameter must be positive");
}
} // namespace

Vec lagrangian(const VariationalProblem &P, const Vec &x, const Vec &lambda) {
    P.x_space.check_dim(x);
    P.h_space.check_dim(lambda);
    return P.eval_F(x) + P.apply_gprime_adjoint(x, lambda);
}

ResidualReport sigma(const VariationalProblem &P, const Vec &x, const Vec &lambda) {
    ResidualReport r;
    r.stationarity = P.x_space.norm(lagrangian(P, x, lambda));
    const Vec g    = P.eval_g(x);
    r.complementarity = P.h_space.norm(g - P.K.project(g + lambda));
    r.sigma           = r.stationarity + r.complementarity;
    return r;
}

Vec aug_lagrangian(const VariationalProblem &P, const Vec &x, const Vec &lambda, double rho) {
    require_rho(rho);
    P.x_space.check_dim(x);
    P.h_space.check_dim(lambda);
    const Vec y = P.eval_g(x) + lambda / rho;
    return P.eval_F(x) + rho * P.apply_gprime_adjoint(x, y - P.K.project(y));
}

Vec multiplier_update(const VariationalProblem &P, const Vec &x, const Vec &w, double rho) {
    require_rho(rho);
    const Vec y = P.eval_g(x) + w / rho;
    return rho * (y - P.K.project(y));
}

double utility_V(const VariationalProblem &P, const Vec &x, const Vec &w, double rho) {
    require_rho(rho);
    const Vec g = P.eval_g(x);
    return P.x_space.norm(aug_lagrangian(P, x, w, rho)) +
           P.h_space.norm(g - P.K.project(g + w / rho));
}

} // namespace vialm
