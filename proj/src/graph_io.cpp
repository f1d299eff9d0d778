#include "cshlab/graph_io.hpp"

#include "cshlab/errors.hpp"

#include <fstream>
#include <map>
#include <set>

namespace cshlab {

namespace {

constexpr const char* kModule = "graph-core";

double number_field(const nlohmann::json& obj, const char* key, const char* what) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_number()) {
        throw InputError(kModule, "load_graph", std::string(what) + " entry needs numeric '" + key + "'");
    }
    return obj.at(key).get<double>();
}

std::string string_field(const nlohmann::json& obj, const char* key, const char* what) {
    if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_string()) {
        throw InputError(kModule, "load_graph", std::string(what) + " entry needs string '" + key + "'");
    }
    return obj.at(key).get<std::string>();
}

}  // namespace

GraphSpec parse_graph_spec(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("edges") ||
        !doc.at("vertices").is_array() || !doc.at("edges").is_array()) {
        throw InputError(kModule, "load_graph", "graph document needs 'vertices' and 'edges' arrays");
    }
    GraphSpec spec;
    for (const auto& v : doc.at("vertices")) {
        spec.vertices.push_back({string_field(v, "id", "vertex"), number_field(v, "mu", "vertex")});
    }
    std::map<std::pair<std::string, std::string>, double> seen;
    for (const auto& e : doc.at("edges")) {
        EdgeSpec edge{string_field(e, "a", "edge"), string_field(e, "b", "edge"), number_field(e, "w", "edge")};
        auto key = edge.a < edge.b ? std::make_pair(edge.a, edge.b) : std::make_pair(edge.b, edge.a);
        auto [it, inserted] = seen.emplace(key, edge.w);
        if (!inserted) {
            if (it->second != edge.w) {
                throw InputError(kModule, "load_graph", "asymmetric weights between '" + edge.a + "' and '" + edge.b + "'");
            }
            throw InputError(kModule, "load_graph", "duplicate edge " + edge.a + "-" + edge.b);
        }
        spec.edges.push_back(std::move(edge));
    }
    return spec;
}

WeightedGraph graph_from_json(const nlohmann::json& doc) { return WeightedGraph::build(parse_graph_spec(doc)); }

WeightedGraph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(kModule, "load_graph", "cannot open " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(kModule, "load_graph", path.string() + ": " + e.what());
    }
    return graph_from_json(doc);
}

nlohmann::json graph_to_json(const WeightedGraph& g) {
    const GraphSpec spec = g.to_spec();
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    doc["edges"] = nlohmann::json::array();
    for (const auto& v : spec.vertices) doc["vertices"].push_back({{"id", v.id}, {"mu", v.mu}});
    for (const auto& e : spec.edges) doc["edges"].push_back({{"a", e.a}, {"b", e.b}, {"w", e.w}});
    return doc;
}

WeightedGraph complete_graph_k2() { return path_graph(2); }

WeightedGraph path_graph(std::size_t n, const std::vector<double>& mu) {
    GraphSpec spec;
    for (std::size_t i = 0; i < n; ++i) {
        spec.vertices.push_back({"x" + std::to_string(i + 1), mu.empty() ? 1.0 : mu.at(i)});
    }
    for (std::size_t i = 0; i + 1 < n; ++i) spec.edges.push_back({spec.vertices[i].id, spec.vertices[i + 1].id, 1.0});
    return WeightedGraph::build(spec);
}

WeightedGraph cycle_graph(std::size_t n) {
    GraphSpec spec;
    for (std::size_t i = 0; i < n; ++i) spec.vertices.push_back({"x" + std::to_string(i + 1), 1.0});
    for (std::size_t i = 0; i < n; ++i) spec.edges.push_back({spec.vertices[i].id, spec.vertices[(i + 1) % n].id, 1.0});
    return WeightedGraph::build(spec);
}

}  // namespace cshlab
