#pragma once

#include <stdexcept>
#include <string>

namespace geoheat {

/// Metric evaluation produced a matrix that is not symmetric positive
/// definite. Usually means the curve left the valid coordinate chart.
class NonSpdError : public std::runtime_error {
public:
    explicit NonSpdError(std::string msg, int node = -1, double tau = -1.0)
        : std::runtime_error(std::move(msg)), node_(node), tau_(tau) {}

    int node() const { return node_; }
    double tau() const { return tau_; }

private:
    int node_;
    double tau_;
};

/// Flow ran past max_tau without meeting the convergence threshold.
class DivergedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or Inf appeared in the solver state.
class NonFiniteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Gradient descent hit its iteration budget before the gradient tolerance.
class MaxItersError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace geoheat
