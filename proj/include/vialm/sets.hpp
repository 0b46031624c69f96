#pragma once

#include "vialm/space.hpp"

#include <limits>
#include <memory>
#include <vector>

namespace vialm {

/// Closed convex subset of a discrete space. Box bounds may be +/-inf;
/// Product factors must partition the ambient dimension.
class ConvexSet {
  public:
    enum class Kind { Box, NonnegativeCone, ZeroSet, Ball, Product };

    struct Factor; // set + index range, defined below

    static ConvexSet box(Vec lower, Vec upper);
    static ConvexSet scalar_box(double lower, double upper, int dim);
    static ConvexSet nonnegative_cone(int dim);
    static ConvexSet zero_set(int dim);
    static ConvexSet ball(Vec center, double radius, DiscreteSpace metric);
    static ConvexSet product(std::vector<Factor> factors);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_cone() const;

    const Vec &lower() const { return lower_; }
    const Vec &upper() const { return upper_; }
    const std::vector<Factor> &factors() const { return *factors_; }

    /// Metric-free projection; exact for Box/cones under any diagonal metric.
    Vec project(const Vec &y) const;
    /// Projection onto the polar cone; requires is_cone().
    Vec project_polar(const Vec &y) const;
    bool contains(const Vec &y, double tol = 1e-12) const;

    /// Diagonal element of a generalized derivative of the projection at y:
    /// 1 where the projection is locally the identity, 0 where clamped
    /// (components exactly at a bound count as clamped).
    Vec projection_derivative_mask(const Vec &y) const;

    /// Directions spanning (a sample of) the recession cone K_inf.
    std::vector<Vec> recession_directions() const;

  private:
    Kind kind_ = Kind::Box;
    int dim_   = 0;
    Vec lower_, upper_;                  // Box
    Vec center_;                         // Ball
    double radius_ = 0;                  // Ball
    std::shared_ptr<DiscreteSpace> ball_metric_;
    std::shared_ptr<std::vector<Factor>> factors_;
};

struct ConvexSet::Factor {
    ConvexSet set;
    int start = 0;
    int len   = 0;
};

struct RecessionProbe {
    std::vector<Vec> directions;

    static RecessionProbe from_set(const ConvexSet &K) { return {K.recession_directions()}; }
};

/// Projection in the given space metric. Box/cone variants require a
/// diagonal metric (componentwise clamp is then exact); Ball projects
/// radially in its own metric.
Vec project(const ConvexSet &K, const Vec &y, const DiscreteSpace &space);

/// dist(y, K) = ||y - P_K(y)|| in the space metric.
double distance(const ConvexSet &K, const Vec &y, const DiscreteSpace &space);

/// max_d <y - P_K(y), d> over probe directions; <= 0 up to roundoff for
/// directions in K_inf, since y - P_K(y) lies in the polar of K_inf.
double polar_residual(const ConvexSet &K, const Vec &y, const RecessionProbe &probe,
                      const DiscreteSpace &space);

/// ||y - P_K(y) - P_{K_polar}(y)||; zero for closed convex cones.
double moreau_check(const ConvexSet &K, const Vec &y, const DiscreteSpace &space);

} // namespace vialm
