#pragma once

#include "vialm/solver.hpp"

#include <iosfwd>

namespace vialm {

/// Per-iteration table in the three-significant-digit scientific style of
/// the reference runs (e.g. 5.08e-01). Columns: k, rho, sigma, V, dist
/// (dist only when an exact solution is attached).
void write_history_text(std::ostream &os, const IterationHistory &hist);

/// Header row plus one full-precision row per iteration; output is
/// locale-independent and byte-stable across runs.
void write_history_csv(std::ostream &os, const IterationHistory &hist);

std::string format_sci3(double v);

} // namespace vialm
