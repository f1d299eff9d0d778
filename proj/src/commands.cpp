#include "cshlab/commands.hpp"

#include "cshlab/errors.hpp"
#include "cshlab/graph_io.hpp"
#include "cshlab/invariants.hpp"
#include "cshlab/records.hpp"

#include <cmath>
#include <fstream>

namespace cshlab {

namespace {

using nlohmann::json;

constexpr const char* kModule = "cli";

bool is_system(const ExperimentConfig& cfg) { return cfg.model == "system"; }

DegreeOptions degree_options(const ExperimentConfig& cfg) {
    DegreeOptions opts;
    opts.solve = cfg.solve;
    opts.radius = cfg.radius;
    opts.check_refinement = cfg.check_refinement;
    opts.perturbation = cfg.perturbation;
    return opts;
}

SweepOptions sweep_options(const ExperimentConfig& cfg) {
    SweepOptions opts;
    opts.solve = cfg.solve;
    opts.radius = cfg.radius;
    opts.p = static_cast<int>(std::round(cfg.p.value_or(1.0)));
    opts.sigma = cfg.sigma;
    return opts;
}

json root_record(const ClassifiedSolution& r, const WeightedGraph& g, bool system, std::size_t index) {
    json rec = to_json(r, g, system);
    rec["type"] = "root";
    rec["index"] = index;
    return rec;
}

std::vector<double> sigma_path_of(const json& sweep) {
    if (sweep.contains("path")) return sweep["path"].get<std::vector<double>>();
    const double from = sweep.at("from").get<double>();
    const double to = sweep.at("to").get<double>();
    const int steps = sweep.at("steps").get<int>();
    if (steps < 1) throw InputError(kModule, "cmd_sweep", "'sweep.steps' must be >= 1");
    std::vector<double> path;
    for (int k = 0; k <= steps; ++k) path.push_back(from + (to - from) * k / steps);
    return path;
}

std::optional<ExperimentConfig> with_graph(const ExperimentConfig& cfg) {
    if (cfg.graph_inline || cfg.graph_path) return cfg;
    return std::nullopt;
}

}  // namespace

ExperimentConfig apply_settings(ExperimentConfig cfg, const RunSettings& settings) {
    if (settings.graph) {
        cfg.graph_path = settings.graph;
        cfg.graph_inline.reset();
    }
    if (settings.jobs) cfg.solve.jobs = *settings.jobs;
    if (settings.seed) cfg.solve.seed = *settings.seed;
    if (settings.tol) {
        if (!(*settings.tol > 0.0)) throw InputError(kModule, "apply_settings", "--tol must be positive");
        cfg.solve.tol_residual = *settings.tol;
    }
    return cfg;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
    const WeightedGraph g = resolve_graph(cfg);
    if (is_system(cfg)) {
        const SystemModel s = system_model_of(cfg, g);
        const VertexFunction start = resolve_source(cfg.start, g, "start", 0.0);
        NewtonStats stats;
        const auto sol = newton(system_problem(g, s), join(start, start), cfg.solve, &stats);
        if (!sol) {
            write_record(out, {{"type", "solve"}, {"status", "failed"}, {"reason", stats.failure}});
            return kExitSolver;
        }
        json rec = root_record(*sol, g, true, 0);
        rec["iterations"] = stats.iterations;
        write_record(out, rec);
        return kExitOk;
    }

    const ScalarModel m = scalar_model_of(cfg, g);
    if (m.lambda == 0.0) {
        const double fbar = average(g, m.f);
        if (std::abs(fbar) > 1e-12 * (1.0 + sup_norm(m.f))) {
            write_record(out, {{"type", "solve"},
                               {"status", "insolvable"},
                               {"reason", "mean obstruction: lambda = 0 requires mean(f) = 0"},
                               {"mean_f", fbar}});
            return kExitSolver;
        }
        // Δu = f with f̄ = 0: u = φ + c for the mean-zero φ.
        VertexFunction centered = m.f;
        centered.array() -= fbar;
        const VertexFunction u = solve_poisson(g, centered).array() + cfg.shift;
        const double res = sup_norm(residual(g, m, u));
        const bool ok = res <= std::max(cfg.solve.tol_residual, 1e-10);
        write_record(out, {{"type", "root"},
                           {"index", 0},
                           {"status", ok ? "solved" : "failed"},
                           {"family", "phi + c"},
                           {"shift", cfg.shift},
                           {"point", point_to_json(u, g, false)},
                           {"residual_norm", res}});
        return ok ? kExitOk : kExitSolver;
    }

    const VertexFunction start = resolve_source(cfg.start, g, "start", 0.0);
    NewtonStats stats;
    const auto sol = newton(scalar_problem(g, m), start, cfg.solve, &stats);
    if (!sol) {
        write_record(out, {{"type", "solve"}, {"status", "failed"}, {"reason", stats.failure}});
        return kExitSolver;
    }
    json rec = root_record(*sol, g, false, 0);
    rec["status"] = "solved";
    rec["iterations"] = stats.iterations;
    rec["solution_identity_defect"] = solution_identity_defect(g, m, sol->point);
    write_record(out, rec);
    return kExitOk;
}

int cmd_enumerate(const ExperimentConfig& cfg, std::ostream& out) {
    const WeightedGraph g = resolve_graph(cfg);
    const bool system = is_system(cfg);
    std::vector<std::string> warnings;
    Problem pb;
    double radius = kFallbackRadius;
    std::optional<double> hint;
    std::optional<double> apriori;
    if (system) {
        const SystemModel s = system_model_of(cfg, g);
        pb = system_problem(g, s);
        if (average(g, s.f) > 0.0 && average(g, s.g) > 0.0) {
            const auto [l1, l2] = admissible_lambdas(g, s);
            apriori = apriori_bound_system(g, s, cfg.Lambda1.value_or(l1), cfg.Lambda2.value_or(l2)).bound;
        }
    } else {
        const ScalarModel m = scalar_model_of(cfg, g);
        pb = scalar_problem(g, m);
        if (const auto a = scalar_apriori(g, m)) {
            apriori = a->radius;
            hint = a->upper;
        }
    }
    if (cfg.radius) {
        radius = *cfg.radius;
        if (apriori && radius < *apriori) warnings.push_back("box smaller than the a priori radius");
    } else if (apriori) {
        radius = *apriori;
    } else {
        warnings.push_back("no a priori bound; using fallback radius 20");
    }
    const double search = std::min(radius, kOverflowGuard);
    if (search < radius) warnings.push_back("radius exceeds the overflow guard; seeds clipped to [-700, 700]");

    EnumerationStats stats;
    const auto roots = enumerate_solutions(pb, seed_plan(pb.dim, search, cfg.solve.grid, hint), cfg.solve, {}, &stats);
    for (std::size_t i = 0; i < roots.size(); ++i) write_record(out, root_record(roots[i], g, system, i));
    warnings.insert(warnings.end(), stats.warnings.begin(), stats.warnings.end());
    write_record(out, {{"type", "summary"},
                       {"count", roots.size()},
                       {"seeds", stats.seeds},
                       {"converged_seeds", stats.converged},
                       {"radius", radius},
                       {"search_radius", search},
                       {"apriori_radius", apriori ? json(*apriori) : json(nullptr)},
                       {"grid", to_json(cfg.solve.grid)},
                       {"warnings", warnings}});
    return kExitOk;
}

int cmd_degree(const ExperimentConfig& cfg, std::ostream& out) {
    const WeightedGraph g = resolve_graph(cfg);
    const DegreeOptions opts = degree_options(cfg);
    if (is_system(cfg)) {
        const DegreeReport rep = degree_by_enumeration(g, system_model_of(cfg, g), opts);
        write_record(out, to_json(rep, g, true));
        write_record(out, to_json(second_root_replay(rep.roots)));
        return kExitOk;
    }
    const ScalarModel m = scalar_model_of(cfg, g);
    const DegreeReport rep = degree_by_enumeration(g, m, opts);
    write_record(out, to_json(rep, g, false));
    if (rep.expected_degree) write_record(out, to_json(multiplicity_replay(g.size(), rep.expected_degree, rep.roots)));
    return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const RunSettings& settings, std::ostream& out) {
    const char* op = "cmd_sweep";
    const WeightedGraph g = resolve_graph(cfg);
    const bool system = is_system(cfg);
    if (cfg.sweep.is_null() && cfg.threshold.is_null()) {
        throw InputError(kModule, op, "config needs a \"sweep\" or \"threshold\" section");
    }
    int code = kExitOk;
    std::vector<BranchRecord> records;
    try {
        if (!cfg.sweep.is_null()) {
            const std::string parameter = cfg.sweep.value("parameter", std::string("lambda"));
            if (parameter == "lambda") {
                if (system) throw InputError(kModule, op, "lambda sweeps apply to the scalar model");
                const VertexFunction f = resolve_source(cfg.f, g, "f");
                records = sweep_lambda(g, f, cfg.sweep.at("from").get<double>(), cfg.sweep.at("to").get<double>(),
                                       cfg.sweep.at("steps").get<int>(), sweep_options(cfg));
            } else if (parameter == "sigma") {
                const auto path = sigma_path_of(cfg.sweep);
                if (system) {
                    const SystemSigmaSweep sweep = sigma_homotopy(g, system_model_of(cfg, g), path, cfg.solve);
                    records = sweep.records;
                    write_record(out, {{"type", "system_sigma_sweep"},
                                       {"bound", sweep.bound},
                                       {"contained", sweep.contained},
                                       {"dies_at_zero", sweep.dies_at_zero}});
                    if (!sweep.contained) code = kExitInvariant;
                } else {
                    const SigmaTrack track = sigma_homotopy(g, scalar_model_of(cfg, g), path, cfg.solve);
                    records = track.records;
                    write_record(out, to_json(track));
                    if (track.lost) code = kExitSolver;
                }
            } else {
                throw InputError(kModule, op, "'sweep.parameter' must be \"lambda\" or \"sigma\"");
            }
            for (const auto& rec : records) write_record(out, to_json(rec, g, system));
        }
        if (!cfg.threshold.is_null()) {
            if (system) throw InputError(kModule, op, "thresholds apply to the scalar model");
            const auto bracket = cfg.threshold.at("bracket").get<std::vector<double>>();
            if (bracket.size() != 2) throw InputError(kModule, op, "'threshold.bracket' must be [a, b]");
            const ThresholdEstimate est =
                estimate_threshold(g, resolve_source(cfg.f, g, "f"), parse_threshold(cfg.threshold.at("which").get<std::string>()),
                                   bracket[0], bracket[1], cfg.threshold.value("tol", 1e-3), sweep_options(cfg));
            write_record(out, to_json(est));
            if (!est.consistent()) code = kExitInvariant;
        }
    } catch (const json::exception& e) {
        throw InputError(kModule, op, std::string("malformed sweep/threshold section: ") + e.what());
    }
    if (settings.csv && !records.empty()) {
        std::ofstream csv(*settings.csv);
        if (!csv) throw InputError(kModule, op, "cannot write '" + settings.csv->string() + "'");
        write_sweep_csv(csv, records, g, system);
    }
    return code;
}

int cmd_system(const ExperimentConfig& cfg, std::ostream& out) {
    const char* op = "cmd_system";
    if (!is_system(cfg)) throw InputError(kModule, op, "the system command needs \"model\": \"system\"");
    const WeightedGraph g = resolve_graph(cfg);
    const SystemModel s = system_model_of(cfg, g);
    const DegreeOptions opts = degree_options(cfg);
    const bool positive = average(g, s.f) > 0.0 && average(g, s.g) > 0.0;
    if (positive) {
        const auto [l1, l2] = admissible_lambdas(g, s);
        write_record(out, to_json(apriori_bound_system(g, s, cfg.Lambda1.value_or(l1), cfg.Lambda2.value_or(l2))));
    }
    const DegreeReport rep = degree_by_enumeration(g, s, opts);
    write_record(out, to_json(rep, g, true));
    write_record(out, to_json(second_root_replay(rep.roots)));
    if (!positive) return kExitOk;
    const HomotopyAudit audit = homotopy_audit(g, s, cfg.sigma_grid, opts);
    write_record(out, to_json(audit));
    return audit.contained && audit.degree_constant && audit.zero_slice_empty ? kExitOk : kExitInvariant;
}

int cmd_check(const ExperimentConfig& cfg, const RunSettings& settings, std::ostream& out) {
    const auto with = with_graph(cfg);
    std::vector<std::pair<std::string, WeightedGraph>> graphs;
    if (with) {
        graphs.emplace_back("config", resolve_graph(cfg));
    } else {
        graphs.emplace_back("K2", complete_graph_k2());
        graphs.emplace_back("P3", path_graph(3));
        graphs.emplace_back("C4", cycle_graph(4));
    }
    std::size_t failed = 0;
    std::size_t total = 0;
    for (const auto& [name, g] : graphs) {
        for (const auto& c : run_invariant_suites(g, cfg.solve.seed, cfg.solve.jobs)) {
            json rec = to_json(c);
            rec["graph"] = name;
            write_record(out, rec);
            ++total;
            if (!c.passed) ++failed;
        }
    }

    if (settings.roots) {
        if (!with) throw InputError(kModule, "cmd_check", "--roots needs the graph and model the roots came from");
        const WeightedGraph g = resolve_graph(cfg);
        const bool system = is_system(cfg);
        const Problem pb = system ? system_problem(g, system_model_of(cfg, g)) : scalar_problem(g, scalar_model_of(cfg, g));
        std::ifstream in(*settings.roots);
        if (!in) throw InputError(kModule, "cmd_check", "cannot read '" + settings.roots->string() + "'");
        std::string line;
        std::size_t index = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json doc;
            try {
                doc = json::parse(line);
            } catch (const json::exception& e) {
                throw InputError(kModule, "cmd_check", std::string("bad JSON line in roots file: ") + e.what());
            }
            if (doc.value("type", std::string()) != "root") continue;
            const Eigen::VectorXd x = point_from_json(doc.at("point"), g, system);
            const double res = sup_norm(pb.residual(x));
            const double tol = std::max(cfg.solve.tol_residual, 1e-10);
            CheckResult c{"cli", "root record " + std::to_string(index++) + " re-verifies", res <= tol,
                          res <= tol ? "" : "residual " + std::to_string(res)};
            write_record(out, to_json(c));
            ++total;
            if (!c.passed) ++failed;
        }
    }
    write_record(out, {{"type", "check_summary"}, {"checks", total}, {"failed", failed}});
    return failed == 0 ? kExitOk : kExitInvariant;
}

int run_command(const std::string& name, const ExperimentConfig& cfg_in, const RunSettings& settings, std::ostream& out,
                std::ostream& err) {
    auto report = [&](const std::string& kind, const std::string& module, const std::string& operation,
                      const std::string& message) {
        write_record(err, {{"error", kind}, {"module", module}, {"operation", operation}, {"message", message}});
    };
    try {
        const ExperimentConfig cfg = apply_settings(cfg_in, settings);
        if (name == "solve") return cmd_solve(cfg, out);
        if (name == "enumerate") return cmd_enumerate(cfg, out);
        if (name == "degree") return cmd_degree(cfg, out);
        if (name == "sweep") return cmd_sweep(cfg, settings, out);
        if (name == "system") return cmd_system(cfg, out);
        if (name == "check") return cmd_check(cfg, settings, out);
        throw InputError(kModule, "run_command", "unknown command '" + name + "'");
    } catch (const InputError& e) {
        report("config", e.module(), e.operation(), e.what());
        return kExitConfig;
    } catch (const SolveError& e) {
        report("solver", e.module(), e.operation(), e.what());
        return kExitSolver;
    } catch (const InvariantError& e) {
        report("invariant", e.module(), e.operation(), e.what());
        return kExitInvariant;
    } catch (const nlohmann::json::exception& e) {
        report("config", kModule, name, e.what());
        return kExitConfig;
    }
}

}  // namespace cshlab
