#include "cshlab/errors.hpp"
#include "cshlab/graph.hpp"
#include "cshlab/graph_io.hpp"
#include "cshlab/random_graph.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cshlab;

namespace {

GraphSpec two_vertex_spec(double w12, double w21) {
    return {{{"x1", 1.0}, {"x2", 1.0}}, {{"x1", "x2", w12}, {"x2", "x1", w21}}};
}

}  // namespace

TEST_CASE("build_graph caches sizes") {
    const WeightedGraph k2 = complete_graph_k2();
    CHECK(k2.size() == 2);
    CHECK(k2.volume() == 2.0);
    CHECK(k2.mu_min() == 1.0);
    CHECK(k2.w_min() == 1.0);
    CHECK(path_graph(3).volume() == 3.0);
    CHECK(cycle_graph(4).edge_count() == 4);
}

TEST_CASE("build_graph rejects invalid specs") {
    CHECK_THROWS_WITH_AS(WeightedGraph::build(two_vertex_spec(1.0, 2.0)), doctest::Contains("asymmetric weights"),
                         InputError);
    CHECK_NOTHROW(WeightedGraph::build(two_vertex_spec(1.0, 1.0)));
    CHECK_THROWS_AS(WeightedGraph::build({{{"a", 1}, {"b", 1}, {"c", 1}}, {{"a", "b", 1}}}), InputError);
    CHECK_THROWS_AS(WeightedGraph::build({{{"a", 1}, {"b", 1}}, {{"a", "a", 1}, {"a", "b", 1}}}), InputError);
    CHECK_THROWS_AS(WeightedGraph::build({{{"a", 0}, {"b", 1}}, {{"a", "b", 1}}}), InputError);
    CHECK_THROWS_AS(WeightedGraph::build({{{"a", 1}, {"b", 1}}, {{"a", "b", -1}}}), InputError);
    CHECK_THROWS_AS(WeightedGraph::build({{{"a", 1}}, {}}), InputError);
}

TEST_CASE("graph files reject duplicate or asymmetric listings") {
    const auto doc = nlohmann::json::parse(R"({"vertices":[{"id":"a","mu":1},{"id":"b","mu":1}],
        "edges":[{"a":"a","b":"b","w":1},{"a":"b","b":"a","w":2}]})");
    CHECK_THROWS_WITH_AS(graph_from_json(doc), doctest::Contains("asymmetric"), InputError);
    const WeightedGraph g = load_graph(CSHLAB_DATA_DIR "/graphs/weighted_p3.json");
    const WeightedGraph back = graph_from_json(graph_to_json(g));
    CHECK(back.ids() == g.ids());
    CHECK((back.weight_matrix() - g.weight_matrix()).norm() == 0.0);
    CHECK((back.mu() - g.mu()).norm() == 0.0);
}

TEST_CASE("laplacian matches hand values and the brute-force oracle") {
    const WeightedGraph k2 = complete_graph_k2();
    CHECK(laplacian(k2, Eigen::Vector2d(0, 1)).isApprox(Eigen::Vector2d(1, -1)));
    CHECK(sup_norm(laplacian(k2, constant_function(k2, 4.2))) == 0.0);

    const WeightedGraph c4 = cycle_graph(4);
    const Eigen::Vector4d u(1, 0, -1, 0);
    CHECK(laplacian(c4, u).isApprox(Eigen::Vector4d(-2, 0, 2, 0)));

    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
        const WeightedGraph g = random_connected_graph(rng, 6);
        oracle::Matrix w(6, std::vector<double>(6));
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) w[i][j] = g.weight(i, j);
        const VertexFunction v = random_function(rng, 6, -3, 3);
        const auto expected = oracle::laplacian(w, oracle::to_std(g.mu()), oracle::to_std(v));
        const VertexFunction got = laplacian(g, v);
        for (std::size_t i = 0; i < 6; ++i) CHECK(got[static_cast<Eigen::Index>(i)] == doctest::Approx(expected[i]).epsilon(1e-12));
        CHECK((g.laplacian_matrix() * v - got).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(laplacian(k2, Eigen::Vector3d(1, 2, 3)), InputError);
}

TEST_CASE("gradient form") {
    const WeightedGraph k2 = complete_graph_k2();
    CHECK(grad_norm_sq(k2, Eigen::Vector2d(0, 1)).isApprox(Eigen::Vector2d(0.5, 0.5)));
    CHECK(sup_norm(grad_norm_sq(k2, constant_function(k2, 3))) == 0.0);
    std::mt19937_64 rng(3);
    const WeightedGraph g = random_connected_graph(rng, 5);
    for (int k = 0; k < 10; ++k) {
        const VertexFunction u = random_function(rng, 5, -1, 1);
        const VertexFunction v = random_function(rng, 5, -1, 1);
        CHECK((grad_form(g, u, v) - grad_form(g, v, u)).cwiseAbs().maxCoeff() < 1e-14);
        // ∫Γ(u,v) = −∫vΔu
        CHECK(integrate(g, grad_form(g, u, v)) ==
              doctest::Approx(-integrate(g, v.cwiseProduct(laplacian(g, u)))).epsilon(1e-12));
        CHECK(dirichlet_pairing(g, u, v) == doctest::Approx(integrate(g, grad_form(g, u, v))).epsilon(1e-12));
    }
}

TEST_CASE("integrals and norms") {
    const WeightedGraph k2 = complete_graph_k2();
    CHECK(integrate(k2, Eigen::Vector2d(1, 3)) == 4.0);
    CHECK(average(k2, Eigen::Vector2d(1, 3)) == 2.0);
    CHECK(sup_norm(Eigen::Vector2d(1, -3)) == 3.0);
    CHECK(integrate(k2, Eigen::Vector2d::Zero()) == 0.0);
    const WeightedGraph p3 = path_graph(3, {1.0, 2.0, 1.0});
    CHECK(integrate(p3, Eigen::Vector3d(1, 1, 1)) == 4.0);
    CHECK(average(p3, Eigen::Vector3d(1, 1, 1)) == 1.0);
}

TEST_CASE("spectral gap and elliptic constant") {
    // K2: −Δ has eigenvalues 0 and 2; C = sqrt(1·2/(1·2)) = 1.
    const SpectralData k2 = spectral_gap(complete_graph_k2());
    CHECK(k2.lambda1 == doctest::Approx(2.0));
    CHECK(k2.elliptic_constant == doctest::Approx(1.0));
    // C4: eigenvalues 0, 2, 2, 4.
    CHECK(spectral_gap(cycle_graph(4)).lambda1 == doctest::Approx(2.0));
    // P3 with unit data: eigenvalues 0, 1, 3.
    CHECK(spectral_gap(path_graph(3)).lambda1 == doctest::Approx(1.0));

    const WeightedGraph g = complete_graph_k2();
    const Eigen::Vector2d u(0, 1);
    CHECK(u.maxCoeff() - u.minCoeff() <= k2.elliptic_constant * sup_norm(laplacian(g, u)) + 1e-15);
}

TEST_CASE("elliptic estimate on random graphs") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 10; ++k) {
        const WeightedGraph g = random_connected_graph(rng, 2 + k % 6);
        const double C = spectral_gap(g).elliptic_constant;
        for (int j = 0; j < 50; ++j) {
            const VertexFunction u = random_function(rng, g.size(), -4, 4);
            CHECK(u.maxCoeff() - u.minCoeff() <= C * sup_norm(laplacian(g, u)) * (1 + 1e-12));
        }
    }
}

TEST_CASE("poisson solve") {
    const WeightedGraph k2 = complete_graph_k2();
    const VertexFunction phi = solve_poisson(k2, Eigen::Vector2d(1, -1));
    CHECK(phi.isApprox(Eigen::Vector2d(-0.5, 0.5)));
    CHECK_THROWS_AS(solve_poisson(k2, Eigen::Vector2d(1, 1)), SolveError);

    std::mt19937_64 rng(5);
    const WeightedGraph g = random_connected_graph(rng, 7);
    const VertexFunction h = random_mean_zero(rng, g);
    const VertexFunction sol = solve_poisson(g, h);
    CHECK(sup_norm(laplacian(g, sol) - h) < 1e-10);
    CHECK(std::abs(average(g, sol)) < 1e-13);
}

TEST_CASE("dirac sources") {
    const WeightedGraph p3 = path_graph(3, {1.0, 2.0, 1.0});
    const VertexFunction f = dirac_source(p3, {"x2", "x2", "x3"}, 1.5);
    CHECK(f.isApprox(Eigen::Vector3d(0, 1.5, 1.5)));
    CHECK(integrate(p3, f) == doctest::Approx(4.5));
    CHECK_THROWS_AS(dirac_source(p3, {"nope"}, 1.0), InputError);
}
