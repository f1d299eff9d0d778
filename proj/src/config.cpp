#include "cshlab/config.hpp"

#include "cshlab/errors.hpp"
#include "cshlab/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace cshlab {

namespace {

constexpr const char* kModule = "cli";

using nlohmann::json;

double number(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw InputError(kModule, "parse_config", std::string("'") + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(kModule, "parse_config", std::string("'") + key + "' must be finite");
    return x;
}

int integer(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) throw InputError(kModule, "parse_config", std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

void reject_unknown(const json& doc, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw InputError(kModule, "parse_config", "unknown key '" + key + "' in " + where);
    }
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
    const char* op = "parse_config";
    if (!doc.is_object()) throw InputError(kModule, op, "config must be a JSON object");
    reject_unknown(doc,
                   {"graph", "model", "lambda", "p", "q", "sigma", "f", "g", "start", "shift", "radius", "grid",
                    "check_refinement", "perturbation", "sweep", "threshold", "sigma_grid", "Lambda1", "Lambda2",
                    "tolerances", "jobs", "seed"},
                   "config");
    ExperimentConfig cfg;
    try {
        if (doc.contains("graph")) {
            const json& gr = doc["graph"];
            if (gr.is_string()) {
                std::filesystem::path p = gr.get<std::string>();
                cfg.graph_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
            } else if (gr.is_object()) {
                cfg.graph_inline = gr;
            } else {
                throw InputError(kModule, op, "'graph' must be a path or an inline graph object");
            }
        }
        if (doc.contains("model")) {
            cfg.model = doc["model"].get<std::string>();
            if (cfg.model != "scalar" && cfg.model != "system") {
                throw InputError(kModule, op, "'model' must be \"scalar\" or \"system\"");
            }
        }
        if (doc.contains("lambda")) cfg.lambda = number(doc, "lambda");
        if (doc.contains("p")) cfg.p = number(doc, "p");
        if (doc.contains("q")) cfg.q = number(doc, "q");
        if (doc.contains("sigma")) cfg.sigma = number(doc, "sigma");
        if (doc.contains("f")) cfg.f = doc["f"];
        if (doc.contains("g")) cfg.g = doc["g"];
        if (doc.contains("start")) cfg.start = doc["start"];
        if (doc.contains("shift")) cfg.shift = number(doc, "shift");
        if (doc.contains("radius")) {
            cfg.radius = number(doc, "radius");
            if (!(*cfg.radius > 0.0)) throw InputError(kModule, op, "'radius' must be positive");
        }
        if (doc.contains("grid")) {
            const json& gr = doc["grid"];
            reject_unknown(gr, {"points", "core", "outer_points", "refined_points"}, "grid");
            if (gr.contains("points")) cfg.grid.points = integer(gr, "points");
            if (gr.contains("outer_points")) cfg.grid.outer_points = integer(gr, "outer_points");
            if (gr.contains("refined_points")) cfg.grid.refined_points = integer(gr, "refined_points");
            if (gr.contains("core")) {
                const auto core = gr["core"].get<std::vector<double>>();
                if (core.size() != 2 || !(core[0] < core[1])) {
                    throw InputError(kModule, op, "'grid.core' must be [lo, hi] with lo < hi");
                }
                cfg.grid.core_lower = core[0];
                cfg.grid.core_upper = core[1];
            }
            if (cfg.grid.points < 2) throw InputError(kModule, op, "'grid.points' must be >= 2");
        }
        if (doc.contains("check_refinement")) cfg.check_refinement = doc["check_refinement"].get<bool>();
        if (doc.contains("perturbation")) cfg.perturbation = number(doc, "perturbation");
        if (doc.contains("sweep")) {
            cfg.sweep = doc["sweep"];
            reject_unknown(cfg.sweep, {"parameter", "from", "to", "steps", "path"}, "sweep");
        }
        if (doc.contains("threshold")) {
            cfg.threshold = doc["threshold"];
            reject_unknown(cfg.threshold, {"which", "bracket", "tol"}, "threshold");
        }
        if (doc.contains("sigma_grid")) cfg.sigma_grid = doc["sigma_grid"].get<std::vector<double>>();
        if (doc.contains("Lambda1")) cfg.Lambda1 = number(doc, "Lambda1");
        if (doc.contains("Lambda2")) cfg.Lambda2 = number(doc, "Lambda2");
        if (doc.contains("tolerances")) {
            const json& t = doc["tolerances"];
            reject_unknown(t, {"residual", "step", "dedup", "max_iter"}, "tolerances");
            if (t.contains("residual")) cfg.solve.tol_residual = number(t, "residual");
            if (t.contains("step")) cfg.solve.tol_step = number(t, "step");
            if (t.contains("dedup")) cfg.solve.dedup_tol = number(t, "dedup");
            if (t.contains("max_iter")) cfg.solve.max_iter = integer(t, "max_iter");
            if (!(cfg.solve.tol_residual > 0.0)) throw InputError(kModule, op, "'tolerances.residual' must be positive");
        }
        if (doc.contains("jobs")) cfg.solve.jobs = static_cast<unsigned>(integer(doc, "jobs"));
        if (doc.contains("seed")) cfg.solve.seed = doc["seed"].get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw InputError(kModule, op, std::string("malformed config: ") + e.what());
    }
    cfg.solve.grid = cfg.grid;
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(kModule, "load_config", "cannot read config '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(kModule, "load_config", "invalid JSON in '" + path.string() + "': " + e.what());
    }
    return parse_config(doc, path.parent_path());
}

VertexFunction resolve_source(const json& spec, const WeightedGraph& g, const std::string& name,
                              std::optional<double> fallback) {
    const char* op = "resolve_source";
    if (spec.is_null()) {
        if (fallback) return constant_function(g, *fallback);
        throw InputError(kModule, op, "missing source '" + name + "'");
    }
    if (!spec.is_object() || spec.size() != 1) {
        throw InputError(kModule, op,
                         "source '" + name + "' needs exactly one of \"constant\", \"values\", \"dirac\"");
    }
    try {
        if (spec.contains("constant")) return constant_function(g, spec["constant"].get<double>());
        if (spec.contains("values")) {
            const json& vals = spec["values"];
            VertexFunction out(static_cast<Eigen::Index>(g.size()));
            if (vals.is_array()) {
                if (vals.size() != g.size()) throw InputError(kModule, op, "source '" + name + "' has wrong length");
                for (std::size_t i = 0; i < g.size(); ++i) out[static_cast<Eigen::Index>(i)] = vals[i].get<double>();
            } else if (vals.is_object()) {
                if (vals.size() != g.size()) {
                    throw InputError(kModule, op, "source '" + name + "' must give a value for every vertex");
                }
                for (const auto& [id, value] : vals.items()) {
                    if (!g.contains(id)) throw InputError(kModule, op, "unknown vertex id '" + id + "' in '" + name + "'");
                    out[static_cast<Eigen::Index>(g.index_of(id))] = value.get<double>();
                }
            } else {
                throw InputError(kModule, op, "'values' must be an array or an object");
            }
            if (!out.allFinite()) throw InputError(kModule, op, "source '" + name + "' has non-finite values");
            return out;
        }
        if (spec.contains("dirac")) {
            const json& d = spec["dirac"];
            return dirac_source(g, d.at("points").get<std::vector<std::string>>(), d.at("coefficient").get<double>());
        }
    } catch (const json::exception& e) {
        throw InputError(kModule, op, "malformed source '" + name + "': " + e.what());
    }
    throw InputError(kModule, op, "source '" + name + "' needs exactly one of \"constant\", \"values\", \"dirac\"");
}

WeightedGraph resolve_graph(const ExperimentConfig& cfg) {
    if (cfg.graph_inline) return graph_from_json(*cfg.graph_inline);
    if (cfg.graph_path) return load_graph(*cfg.graph_path);
    throw InputError(kModule, "resolve_graph", "no graph given (use --graph or the config's \"graph\" key)");
}

ScalarModel scalar_model_of(const ExperimentConfig& cfg, const WeightedGraph& g) {
    const double p = cfg.p.value_or(1.0);
    const double rounded = std::round(p);
    if (p != rounded || rounded < 1.0) throw InputError(kModule, "scalar_model_of", "'p' must be an integer >= 1");
    ScalarModel m{cfg.lambda, static_cast<int>(rounded), cfg.sigma, resolve_source(cfg.f, g, "f")};
    validate(g, m);
    return m;
}

SystemModel system_model_of(const ExperimentConfig& cfg, const WeightedGraph& g) {
    SystemModel s{HalfOdd::from_value(cfg.p.value_or(0.5)), HalfOdd::from_value(cfg.q), cfg.sigma, resolve_source(cfg.f, g, "f"),
                  resolve_source(cfg.g, g, "g")};
    validate(g, s);
    return s;
}

}  // namespace cshlab
