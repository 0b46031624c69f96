#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vialm/problem.hpp"
#include "vialm/zoo.hpp"

#include <random>

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
    return P;
}

Vec scalar(double v) { return Vec::Constant(1, v); }

} // namespace

TEST_CASE("scalar hand values") {
    const VariationalProblem P = scalar_problem();

    CHECK(lagrangian(P, scalar(0.1), scalar(0.9))[0] == doctest::Approx(0.0));
    CHECK(lagrangian(P, scalar(0.3), scalar(0.0))[0] == doctest::Approx(-0.7));

    // y = 0.1 + 0.9/2 = 0.55, P_K(y) = 0, bracket = 0.55
    CHECK(aug_lagrangian(P, scalar(0.1), scalar(0.9), 2.0)[0] == doctest::Approx(0.2));
    CHECK(multiplier_update(P, scalar(0.1), scalar(0.9), 2.0)[0] == doctest::Approx(1.1));
    CHECK(utility_V(P, scalar(0.1), scalar(0.9), 2.0) == doctest::Approx(0.3));

    // the KKT point annihilates everything at any rho
    for (double rho : {1.0, 10.0, 100.0}) {
        CHECK(aug_lagrangian(P, scalar(0.0), scalar(1.0), rho).norm() <= 1e-14);
        CHECK(utility_V(P, scalar(0.0), scalar(1.0), rho) <= 1e-14);
    }
    const ResidualReport r = sigma(P, scalar(0.0), scalar(1.0));
    CHECK(r.sigma <= 1e-14);
    CHECK(r.sigma == r.stationarity + r.complementarity);
}

TEST_CASE("rho must be positive") {
    const VariationalProblem P = scalar_problem();
    CHECK_THROWS(aug_lagrangian(P, scalar(0.1), scalar(0.9), 0.0));
    CHECK_THROWS(aug_lagrangian(P, scalar(0.1), scalar(0.9), -1.0));
    CHECK_THROWS(multiplier_update(P, scalar(0.1), scalar(0.9), 0.0));
    CHECK_THROWS(utility_V(P, scalar(0.1), scalar(0.9), -2.0));
}

TEST_CASE("augmented Lagrangian equals Lagrangian at the updated multiplier") {
    std::mt19937 rng(2024);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> rho_draw(0.1, 100.0);

    int cases = 0;
    for (unsigned seed = 1; cases < 500; ++seed) {
        const int dim           = 2 + static_cast<int>(seed % 7);
        const ZooInstance inst  = box_qp(dim, seed);
        const auto &P           = inst.problem;
        for (int rep = 0; rep < 5; ++rep, ++cases) {
            Vec x(dim), w(dim);
            for (int i = 0; i < dim; ++i) {
                x[i] = 2.0 * g(rng);
                w[i] = 2.0 * g(rng);
            }
            const double rho = rho_draw(rng);
            const Vec lhs    = aug_lagrangian(P, x, w, rho);
            const Vec rhs    = lagrangian(P, x, multiplier_update(P, x, w, rho));
            CHECK(P.x_space.dist(lhs, rhs) <= 1e-12 * (1.0 + lhs.norm()));
        }
    }
}

TEST_CASE("cone constraints: Moreau form of the update") {
    // for cone K the update equals P_{K_polar}(w + rho g(x))
    const ZooInstance inst = l2_counterexample(8);
    const auto &P          = inst.problem;
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        Vec x(8), w(8);
        for (int i = 0; i < 8; ++i) {
            x[i] = g(rng);
            w[i] = g(rng);
        }
        const double rho = 0.5 + trial % 5;
        const Vec upd    = multiplier_update(P, x, w, rho);
        const Vec moreau = P.K.project_polar(w + rho * P.eval_g(x));
        CHECK((upd - moreau).norm() <= 1e-12 * (1.0 + upd.norm()));

        // the update lands in the polar of the recession cone
        const RecessionProbe probe = RecessionProbe::from_set(P.K);
        CHECK(polar_residual(P.K, P.eval_g(x) + w / rho, probe, P.h_space) <= 1e-10);
    }
}

TEST_CASE("sigma on the truncated sequence example") {
    const int m            = 20;
    const ZooInstance inst = l2_counterexample(m);
    const auto &P          = inst.problem;
    for (int k = 1; k <= m; ++k) {
        Vec x = Vec::Zero(m), lam = Vec::Zero(m);
        x[k - 1]   = 1.0 / k;
        lam[k - 1] = -1.0;
        CHECK(sigma(P, x, lam).sigma ==
              doctest::Approx(1.0 / (double(k) * k)).epsilon(1e-14));

        x[k - 1]   = 1.0 / (double(k) * k);
        lam[k - 1] = -1.0 / k;
        CHECK(sigma(P, x, lam).sigma ==
              doctest::Approx(1.0 / (double(k) * k * k)).epsilon(1e-14));
    }
}

TEST_CASE("one-sided Lipschitz behavior of sigma in the multiplier") {
    // for g = identity instances ||g'(x)*|| = 1, so the bound is 2||dlam||
    const ZooInstance inst = box_qp(6, 3);
    const auto &P          = inst.problem;
    std::mt19937 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        Vec x(6), l1(6), l2(6);
        for (int i = 0; i < 6; ++i) {
            x[i]  = g(rng);
            l1[i] = g(rng);
            l2[i] = g(rng);
        }
        const double s1 = sigma(P, x, l1).sigma;
        const double s2 = sigma(P, x, l2).sigma;
        CHECK(std::abs(s1 - s2) <= 2.0 * P.h_space.dist(l1, l2) + 1e-12);
    }
}
