#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "vialm/config.hpp"

#include <sstream>

using namespace vialm;

namespace {

SolverConfig parse(const std::string &text) {
    SolverConfig cfg;
    std::istringstream in(text);
    apply_config_stream(in, cfg);
    return cfg;
}

} // namespace

TEST_CASE("identity overrides leave defaults unchanged") {
    const SolverConfig def;
    const SolverConfig cfg = parse("gamma=10\ntau=0.5\n");
    CHECK(cfg.gamma == def.gamma);
    CHECK(cfg.tau == def.tau);
    CHECK(cfg.rho0 == def.rho0);
    CHECK(cfg.inner_tol_mode == SolverConfig::InnerTolMode::Fixed);
}

TEST_CASE("all keys roundtrip") {
    const SolverConfig cfg = parse("rho0=2.5\n"
                                   "gamma=4\n"
                                   "tau=0.25\n"
                                   "outer_tol=1e-6\n"
                                   "inner_tol=1e-9\n"
                                   "max_outer=33\n"
                                   "inner_tol_mode=forcing\n"
                                   "z0=0.2\n"
                                   "theta=0.8\n");
    CHECK(cfg.rho0 == 2.5);
    CHECK(cfg.gamma == 4.0);
    CHECK(cfg.tau == 0.25);
    CHECK(cfg.outer_tol == 1e-6);
    CHECK(cfg.inner_tol == 1e-9);
    CHECK(cfg.max_outer == 33);
    CHECK(cfg.inner_tol_mode == SolverConfig::InnerTolMode::Forcing);
    CHECK(cfg.forcing_z0 == 0.2);
    CHECK(cfg.forcing_theta == 0.8);
}

TEST_CASE("comments and blank lines are ignored") {
    const SolverConfig cfg = parse("# solver overrides\n"
                                   "\n"
                                   "rho0 = 3   # trailing comment\n");
    CHECK(cfg.rho0 == 3.0);
}

TEST_CASE("out-of-range values are rejected") {
    CHECK_THROWS_AS(parse("tau=1.5\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("tau=0\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("gamma=0.5\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("rho0=-1\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("max_outer=0\n"), std::runtime_error);
    CHECK_THROWS_AS(parse("inner_tol_mode=sometimes\n"), std::runtime_error);
}

TEST_CASE("unknown keys list the valid ones with a line number") {
    try {
        parse("rho0=1\nbogus=3\n");
        FAIL("expected a parse error");
    } catch (const std::runtime_error &e) {
        const std::string msg = e.what();
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("2") != std::string::npos);    // offending line
        CHECK(msg.find("rho0") != std::string::npos); // the valid-key list
        CHECK(msg.find("inner_tol_mode") != std::string::npos);
    }
}

TEST_CASE("malformed lines report their line number") {
    try {
        parse("gamma=10\nnot a pair\n");
        FAIL("expected a parse error");
    } catch (const std::runtime_error &e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("gamma=ten\n"), std::runtime_error);
}

TEST_CASE("missing files are reported") {
    SolverConfig cfg;
    CHECK_THROWS_AS(apply_config_file("/nonexistent/overrides.cfg", cfg),
                    std::runtime_error);
}
