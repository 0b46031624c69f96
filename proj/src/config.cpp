#include "vialm/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vialm {

namespace {

std::string trim(const std::string &s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string &msg) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string &v) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            fail(line, "trailing characters in numeric value '" + v + "'");
        return d;
    } catch (const std::invalid_argument &) {
        fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range &) {
        fail(line, "numeric value out of range: '" + v + "'");
    }
}

constexpr const char *kValidKeys =
    "rho0, gamma, tau, outer_tol, inner_tol, max_outer, inner_tol_mode, z0, theta";

} // namespace

void apply_config_stream(std::istream &in, SolverConfig &cfg) {
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(lineno, "expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.empty())
            fail(lineno, "empty value for key '" + key + "'");

        if (key == "rho0") {
            cfg.rho0 = parse_double(lineno, val);
            if (!(cfg.rho0 > 0)) fail(lineno, "rho0 must be positive");
        } else if (key == "gamma") {
            cfg.gamma = parse_double(lineno, val);
            if (!(cfg.gamma > 1)) fail(lineno, "gamma must exceed 1");
        } else if (key == "tau") {
            cfg.tau = parse_double(lineno, val);
            if (!(cfg.tau > 0 && cfg.tau < 1)) fail(lineno, "tau must be in (0,1)");
        } else if (key == "outer_tol") {
            cfg.outer_tol = parse_double(lineno, val);
            if (!(cfg.outer_tol > 0)) fail(lineno, "outer_tol must be positive");
        } else if (key == "inner_tol") {
            cfg.inner_tol = parse_double(lineno, val);
            if (!(cfg.inner_tol > 0)) fail(lineno, "inner_tol must be positive");
        } else if (key == "max_outer") {
            const double d = parse_double(lineno, val);
            if (d < 1 || d != static_cast<int>(d))
                fail(lineno, "max_outer must be a positive integer");
            cfg.max_outer = static_cast<int>(d);
        } else if (key == "inner_tol_mode") {
            if (val == "fixed")
                cfg.inner_tol_mode = SolverConfig::InnerTolMode::Fixed;
            else if (val == "forcing")
                cfg.inner_tol_mode = SolverConfig::InnerTolMode::Forcing;
            else
                fail(lineno, "inner_tol_mode must be 'fixed' or 'forcing'");
        } else if (key == "z0") {
            cfg.forcing_z0 = parse_double(lineno, val);
            if (!(cfg.forcing_z0 > 0)) fail(lineno, "z0 must be positive");
        } else if (key == "theta") {
            cfg.forcing_theta = parse_double(lineno, val);
            if (!(cfg.forcing_theta > 0 && cfg.forcing_theta < 1))
                fail(lineno, "theta must be in (0,1)");
        } else {
            fail(lineno, "unknown key '" + key + "'; valid keys: " + kValidKeys);
        }
    }
    cfg.validate();
}

void apply_config_file(const std::string &path, SolverConfig &cfg) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    apply_config_stream(in, cfg);
}

} // namespace vialm
