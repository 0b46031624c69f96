#include "vialm/tables.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace vialm {

std::string format_sci3(double v) {
    if (std::isnan(v))
        return "-";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

namespace {

std::string format_full(double v) {
    if (std::isnan(v))
        return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_history_text(std::ostream &os, const IterationHistory &hist) {
    const bool has_dist =
        !hist.records.empty() && hist.records.front().dist.has_value();
    os << "  k        rho      sigma          V";
    if (has_dist)
        os << "       dist";
    os << "\n";
    for (const auto &r : hist.records) {
        char head[16];
        std::snprintf(head, sizeof(head), "%3d", r.k);
        os << head << "   " << format_sci3(r.rho) << "   " << format_sci3(r.sigma)
           << "   " << format_sci3(r.V);
        if (has_dist)
            os << "   " << (r.dist ? format_sci3(*r.dist) : "-");
        os << "\n";
    }
}

void write_history_csv(std::ostream &os, const IterationHistory &hist) {
    os << "k,rho,sigma,V,eps,inner_iters,dist,feasibility,normality\n";
    for (const auto &r : hist.records) {
        os << r.k << ',' << format_full(r.rho) << ',' << format_full(r.sigma) << ','
           << format_full(r.V) << ',' << format_full(r.eps) << ',' << r.inner_iters
           << ',' << (r.dist ? format_full(*r.dist) : "") << ','
           << format_full(r.feasibility) << ',' << format_full(r.normality) << "\n";
    }
}

} // namespace vialm
