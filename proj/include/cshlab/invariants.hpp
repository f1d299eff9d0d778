#pragma once

#include "cshlab/graph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cshlab {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

// Invariant suites behind the check command. Each runs a fixed number of
// randomized cases on `g` from `seed` and never throws for a failed check;
// library errors are reported as failures.

std::vector<CheckResult> check_graph_core(const WeightedGraph& g, std::uint64_t seed);
std::vector<CheckResult> check_scalar_model(const WeightedGraph& g, std::uint64_t seed);
std::vector<CheckResult> check_system_model(const WeightedGraph& g, std::uint64_t seed);
std::vector<CheckResult> check_solver(const WeightedGraph& g, std::uint64_t seed, unsigned jobs);
std::vector<CheckResult> check_degree(const WeightedGraph& g, unsigned jobs);
std::vector<CheckResult> check_continuation(const WeightedGraph& g, unsigned jobs);

/// All suites on `g`.
std::vector<CheckResult> run_invariant_suites(const WeightedGraph& g, std::uint64_t seed, unsigned jobs);

}  // namespace cshlab
