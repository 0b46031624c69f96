#include "vialm/sets.hpp"

#include <algorithm>
#include <cmath>

namespace vialm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
    if (lower.size() != upper.size() || lower.size() == 0)
        throw std::invalid_argument("Box: bound dimension mismatch");
    for (int i = 0; i < lower.size(); ++i)
        if (!(lower[i] <= upper[i]))
            throw std::invalid_argument("Box: requires lower <= upper componentwise");
    ConvexSet s;
    s.kind_  = Kind::Box;
    s.dim_   = static_cast<int>(lower.size());
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
}

ConvexSet ConvexSet::scalar_box(double lower, double upper, int dim) {
    return box(Vec::Constant(dim, lower), Vec::Constant(dim, upper));
}

ConvexSet ConvexSet::nonnegative_cone(int dim) {
    ConvexSet s;
    s.kind_ = Kind::NonnegativeCone;
    s.dim_  = dim;
    return s;
}

ConvexSet ConvexSet::zero_set(int dim) {
    ConvexSet s;
    s.kind_ = Kind::ZeroSet;
    s.dim_  = dim;
    return s;
}

ConvexSet ConvexSet::ball(Vec center, double radius, DiscreteSpace metric) {
    if (radius <= 0)
        throw std::invalid_argument("Ball: radius must be positive");
    metric.check_dim(center);
    ConvexSet s;
    s.kind_        = Kind::Ball;
    s.dim_         = static_cast<int>(center.size());
    s.center_      = std::move(center);
    s.radius_      = radius;
    s.ball_metric_ = std::make_shared<DiscreteSpace>(std::move(metric));
    return s;
}

ConvexSet ConvexSet::product(std::vector<Factor> factors) {
    if (factors.empty())
        throw std::invalid_argument("Product: no factors");
    int dim = 0;
    for (const auto &f : factors) {
        if (f.start != dim || f.len != f.set.dim())
            throw std::invalid_argument("Product: index ranges must partition the dimension");
        dim += f.len;
    }
    ConvexSet s;
    s.kind_    = Kind::Product;
    s.dim_     = dim;
    s.factors_ = std::make_shared<std::vector<Factor>>(std::move(factors));
    return s;
}

bool ConvexSet::is_cone() const {
    switch (kind_) {
    case Kind::NonnegativeCone:
    case Kind::ZeroSet: return true;
    case Kind::Product:
        return std::all_of(factors_->begin(), factors_->end(),
                           [](const Factor &f) { return f.set.is_cone(); });
    default: return false;
    }
}

Vec ConvexSet::project(const Vec &y) const {
    if (y.size() != dim_)
        throw std::invalid_argument("ConvexSet::project: dimension mismatch");
    switch (kind_) {
    case Kind::Box: return y.cwiseMax(lower_).cwiseMin(upper_);
    case Kind::NonnegativeCone: return y.cwiseMax(0.0);
    case Kind::ZeroSet: return Vec::Zero(dim_);
    case Kind::Ball: {
        const double d = ball_metric_->norm(y - center_);
        if (d <= radius_) return y;
        return center_ + (radius_ / d) * (y - center_);
    }
    case Kind::Product: {
        Vec p(dim_);
        for (const auto &f : *factors_)
            p.segment(f.start, f.len) = f.set.project(y.segment(f.start, f.len));
        return p;
    }
    }
    throw std::logic_error("unreachable");
}

Vec ConvexSet::project_polar(const Vec &y) const {
    if (!is_cone())
        throw std::invalid_argument("project_polar: set is not a cone");
    switch (kind_) {
    case Kind::NonnegativeCone: return y.cwiseMin(0.0);
    case Kind::ZeroSet: return y; // polar of {0} is the whole space
    case Kind::Product: {
        Vec p(dim_);
        for (const auto &f : *factors_)
            p.segment(f.start, f.len) = f.set.project_polar(y.segment(f.start, f.len));
        return p;
    }
    default: throw std::logic_error("unreachable");
    }
}

bool ConvexSet::contains(const Vec &y, double tol) const {
    return (y - project(y)).cwiseAbs().maxCoeff() <= tol;
}

Vec ConvexSet::projection_derivative_mask(const Vec &y) const {
    if (y.size() != dim_)
        throw std::invalid_argument("projection_derivative_mask: dimension mismatch");
    switch (kind_) {
    case Kind::Box: {
        Vec m(dim_);
        for (int i = 0; i < dim_; ++i)
            m[i] = (y[i] > lower_[i] && y[i] < upper_[i]) ? 1.0 : 0.0;
        return m;
    }
    case Kind::NonnegativeCone: return (y.array() > 0.0).cast<double>();
    case Kind::ZeroSet: return Vec::Zero(dim_);
    case Kind::Product: {
        Vec m(dim_);
        for (const auto &f : *factors_)
            m.segment(f.start, f.len) =
                f.set.projection_derivative_mask(y.segment(f.start, f.len));
        return m;
    }
    case Kind::Ball:
        throw std::invalid_argument("projection_derivative_mask: unsupported for Ball");
    }
    throw std::logic_error("unreachable");
}

std::vector<Vec> ConvexSet::recession_directions() const {
    std::vector<Vec> dirs;
    switch (kind_) {
    case Kind::Box:
        for (int i = 0; i < dim_; ++i) {
            if (lower_[i] == -kInf) {
                Vec d = Vec::Zero(dim_);
                d[i]  = -1.0;
                dirs.push_back(d);
            }
            if (upper_[i] == kInf) {
                Vec d = Vec::Zero(dim_);
                d[i]  = 1.0;
                dirs.push_back(d);
            }
        }
        break;
    case Kind::NonnegativeCone:
        for (int i = 0; i < dim_; ++i) {
            Vec d = Vec::Zero(dim_);
            d[i]  = 1.0;
            dirs.push_back(d);
        }
        break;
    case Kind::ZeroSet:
    case Kind::Ball: break; // K_inf = {0}
    case Kind::Product:
        for (const auto &f : *factors_)
            for (const auto &sub : f.set.recession_directions()) {
                Vec d                    = Vec::Zero(dim_);
                d.segment(f.start, f.len) = sub;
                dirs.push_back(d);
            }
        break;
    }
    return dirs;
}

Vec project(const ConvexSet &K, const Vec &y, const DiscreteSpace &space) {
    space.check_dim(y);
    if (y.size() != K.dim())
        throw std::invalid_argument("project: dimension mismatch");
    if (!space.diagonal() && K.kind() != ConvexSet::Kind::Ball)
        throw std::invalid_argument(
            "project: componentwise sets require a diagonal (lumped) metric");
    return K.project(y);
}

double distance(const ConvexSet &K, const Vec &y, const DiscreteSpace &space) {
    return space.norm(y - project(K, y, space));
}

double polar_residual(const ConvexSet &K, const Vec &y, const RecessionProbe &probe,
                      const DiscreteSpace &space) {
    const Vec r = y - project(K, y, space);
    double worst = 0.0;
    for (const auto &d : probe.directions)
        worst = std::max(worst, space.inner(r, d));
    return worst;
}

double moreau_check(const ConvexSet &K, const Vec &y, const DiscreteSpace &space) {
    if (!K.is_cone())
        throw std::invalid_argument("moreau_check: set is not a cone");
    space.check_dim(y);
    return space.norm(y - K.project(y) - K.project_polar(y));
}

} // namespace vialm
