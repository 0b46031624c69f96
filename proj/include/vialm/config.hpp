#pragma once

#include "vialm/solver.hpp"

#include <iosfwd>
#include <string>

namespace vialm {

/// Applies key=value overrides from a flat text file to a SolverConfig.
/// One pair per line, '#' starts a comment. Recognized keys: rho0, gamma,
/// tau, outer_tol, inner_tol, max_outer, inner_tol_mode (fixed|forcing),
/// z0, theta. Unknown keys and malformed or out-of-range values raise
/// std::runtime_error with the offending line number.
void apply_config_file(const std::string &path, SolverConfig &cfg);
void apply_config_stream(std::istream &in, SolverConfig &cfg);

} // namespace vialm
