#include "cshlab/problem.hpp"

#include <cmath>

namespace cshlab {

Problem scalar_problem(const WeightedGraph& g, const ScalarModel& m) {
    validate(g, m);
    auto graph = std::make_shared<const WeightedGraph>(g);
    auto model = std::make_shared<const ScalarModel>(m);

    Problem pb;
    pb.dim = g.size();
    pb.residual = [graph, model](const Eigen::VectorXd& u) { return residual(*graph, *model, u); };
    pb.jacobian = [graph, model](const Eigen::VectorXd& u) { return jacobian(*graph, *model, u); };
    pb.gradient_jacobian = pb.jacobian;
    pb.metric = g.mu();
    pb.orientation = 1;
    pb.ball_norm = [](const Eigen::VectorXd& u) { return sup_norm(u); };

    // Constant roots for the mean source are exact when f is constant and
    // serve as seeds otherwise.
    if (m.lambda != 0.0) {
        const double c = average(g, m.f);
        if (!(c == 0.0 && m.lambda == 0.0)) {
            for (double t : constant_solutions(m.lambda, m.p, m.sigma, c)) {
                pb.anchors.push_back(constant_function(g, t));
            }
        }
    }
    return pb;
}

Problem system_problem(const WeightedGraph& g, const SystemModel& s) {
    validate(g, s);
    auto graph = std::make_shared<const WeightedGraph>(g);
    auto model = std::make_shared<const SystemModel>(s);
    const auto n = static_cast<Eigen::Index>(g.size());

    Problem pb;
    pb.dim = 2 * g.size();
    pb.residual = [graph, model](const Eigen::VectorXd& x) {
        auto [first, second] = residual_pair(*graph, *model, first_half(x), second_half(x));
        return join(first, second);
    };
    pb.jacobian = [graph, model](const Eigen::VectorXd& x) {
        return jacobian_system(*graph, *model, first_half(x), second_half(x));
    };
    // ∂𝒢/∂u pairs with the second residual and ∂𝒢/∂v with the first.
    pb.gradient_jacobian = [graph, model, n](const Eigen::VectorXd& x) {
        const Eigen::MatrixXd jac = jacobian_system(*graph, *model, first_half(x), second_half(x));
        Eigen::MatrixXd swapped(2 * n, 2 * n);
        swapped.topRows(n) = jac.bottomRows(n);
        swapped.bottomRows(n) = jac.topRows(n);
        return swapped;
    };
    pb.metric = join(g.mu(), g.mu());
    pb.orientation = (g.size() % 2 == 0) ? 1 : -1;
    pb.ball_norm = [](const Eigen::VectorXd& x) { return sup_norm(first_half(x)) + sup_norm(second_half(x)); };
    return pb;
}

}  // namespace cshlab
