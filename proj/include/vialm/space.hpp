#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <utility>

namespace vialm {

using Vec = Eigen::VectorXd;

/// Finite-dimensional inner-product space. Either a lumped (diagonal)
/// metric given by positive quadrature weights, or a general SPD metric
/// given through its operator application u -> M u.
class DiscreteSpace {
  public:
    enum class Metric { Lumped, Operator };

    static DiscreteSpace lumped(Vec weights) {
        if (weights.size() == 0 || (weights.array() <= 0).any())
            throw std::invalid_argument("DiscreteSpace: weights must be positive");
        DiscreteSpace s;
        s.dim_     = static_cast<int>(weights.size());
        s.weights_ = std::move(weights);
        s.metric_  = Metric::Lumped;
        return s;
    }

    static DiscreteSpace euclidean(int dim) { return lumped(Vec::Ones(dim)); }

    static DiscreteSpace with_operator(int dim, std::function<Vec(const Vec &)> apply) {
        if (dim <= 0 || !apply)
            throw std::invalid_argument("DiscreteSpace: invalid operator metric");
        DiscreteSpace s;
        s.dim_    = dim;
        s.apply_  = std::move(apply);
        s.metric_ = Metric::Operator;
        return s;
    }

    int dim() const { return dim_; }
    Metric metric() const { return metric_; }
    bool diagonal() const { return metric_ == Metric::Lumped; }
    const Vec &weights() const { return weights_; }

    double inner(const Vec &u, const Vec &v) const {
        check_dim(u);
        check_dim(v);
        if (metric_ == Metric::Lumped)
            return (weights_.array() * u.array() * v.array()).sum();
        return u.dot(apply_(v));
    }

    double norm(const Vec &u) const { return std::sqrt(std::max(0.0, inner(u, u))); }
    double dist(const Vec &u, const Vec &v) const { return norm(u - v); }

    void check_dim(const Vec &u) const {
        if (u.size() != dim_)
            throw std::invalid_argument("DiscreteSpace: dimension mismatch");
    }

  private:
    int dim_ = 0;
    Vec weights_;
    std::function<Vec(const Vec &)> apply_;
    Metric metric_ = Metric::Lumped;
};

} // namespace vialm
