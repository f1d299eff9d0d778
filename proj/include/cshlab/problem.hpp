#pragma once

#include "cshlab/graph.hpp"
#include "cshlab/scalar_model.hpp"
#include "cshlab/system_model.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace cshlab {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// A root-finding problem together with the variational structure needed to
/// classify its roots.
///
/// `residual` is the map whose zeros are sought (F for the scalar model, the
/// pair G for the system) and `jacobian` its derivative. `gradient_jacobian`
/// is the derivative of the energy's gradient map, which differs from
/// `jacobian` only by a block swap for the system. Scaling by `metric`
/// (μ per coordinate) turns it into the energy Hessian; `orientation` is
/// sign det(gradient_jacobian) / sign det(jacobian).
struct Problem {
    std::size_t dim = 0;
    ResidualFn residual;
    JacobianFn jacobian;
    JacobianFn gradient_jacobian;
    Eigen::VectorXd metric;
    int orientation = 1;
    /// Norm defining the degree ball: sup norm (scalar) or ‖u‖_∞ + ‖v‖_∞.
    std::function<double(const Eigen::VectorXd&)> ball_norm;
    /// Exact or near-exact roots to seed alongside the grid.
    std::vector<Eigen::VectorXd> anchors;
};

Problem scalar_problem(const WeightedGraph& g, const ScalarModel& m);
Problem system_problem(const WeightedGraph& g, const SystemModel& s);

}  // namespace cshlab
