#include "cshlab/records.hpp"

#include "cshlab/errors.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

namespace cshlab {

namespace {

using nlohmann::json;

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real(v[i]));
    return out;
}

json vertex_map(const Eigen::VectorXd& v, const WeightedGraph& g) {
    json out = json::object();
    for (std::size_t i = 0; i < g.size(); ++i) out[g.ids()[i]] = real(v[static_cast<Eigen::Index>(i)]);
    return out;
}

VertexFunction vertex_values(const json& doc, const WeightedGraph& g) {
    const char* op = "point_from_json";
    if (!doc.is_object() || doc.size() != g.size()) {
        throw InputError("cli", op, "point must map every vertex id to a value");
    }
    VertexFunction out(static_cast<Eigen::Index>(g.size()));
    for (const auto& [id, value] : doc.items()) {
        if (!g.contains(id)) throw InputError("cli", op, "unknown vertex id '" + id + "'");
        if (!value.is_number()) throw InputError("cli", op, "value for '" + id + "' is not a number");
        out[static_cast<Eigen::Index>(g.index_of(id))] = value.get<double>();
    }
    return out;
}

json root_list(const std::vector<ClassifiedSolution>& roots, const WeightedGraph& g, bool system) {
    json out = json::array();
    for (const auto& r : roots) out.push_back(to_json(r, g, system));
    return out;
}

}  // namespace

json point_to_json(const Eigen::VectorXd& point, const WeightedGraph& g, bool system) {
    if (!system) return vertex_map(point, g);
    return {{"u", vertex_map(first_half(point), g)}, {"v", vertex_map(second_half(point), g)}};
}

Eigen::VectorXd point_from_json(const json& doc, const WeightedGraph& g, bool system) {
    if (!system) return vertex_values(doc, g);
    if (!doc.is_object() || !doc.contains("u") || !doc.contains("v")) {
        throw InputError("cli", "point_from_json", "system point needs \"u\" and \"v\"");
    }
    return join(vertex_values(doc["u"], g), vertex_values(doc["v"], g));
}

json to_json(const ClassifiedSolution& r, const WeightedGraph& g, bool system) {
    return {{"point", point_to_json(r.point, g, system)},
            {"residual_norm", real(r.residual_norm)},
            {"sign_det", r.sign_det},
            {"map_sign", r.map_sign},
            {"morse_index", r.morse_index},
            {"nondegenerate", r.nondegenerate},
            {"critical_group_ranks", r.critical_group_ranks},
            {"eigenvalues", vector_json(r.eigenvalues)},
            {"pseudo_inverse_step", r.used_pseudo_inverse}};
}

json to_json(const SeedGrid& grid) {
    return {{"points", grid.points},
            {"core", {grid.core_lower, grid.core_upper}},
            {"outer_points", grid.outer_points},
            {"refined_points", grid.refined_points > 0 ? grid.refined_points : 2 * grid.points - 1}};
}

json to_json(const DegreeReport& rep, const WeightedGraph& g, bool system) {
    json runs = json::array();
    for (const auto& run : rep.runs) {
        runs.push_back({{"computed", run.computed_degree},
                        {"morse_sum", run.morse_sum},
                        {"degenerate_roots", run.degenerate_roots},
                        {"roots_found", run.roots.size()},
                        {"roots_outside_ball", run.roots_outside_ball},
                        {"seeds", run.seeds},
                        {"grid_stable", run.grid_stable},
                        {"refined_root_count", run.refined_root_count},
                        {"perturbation", run.perturbation}});
    }
    return {{"type", "degree"},
            {"computed", rep.computed_degree},
            {"expected", rep.expected_degree ? json(*rep.expected_degree) : json(nullptr)},
            {"consistent", rep.consistent},
            {"radius", real(rep.radius_used)},
            {"search_radius", real(rep.search_radius)},
            {"apriori_radius", rep.apriori_radius ? real(*rep.apriori_radius) : json(nullptr)},
            {"radius_below_bound", rep.radius_below_bound},
            {"morse_sum", rep.morse_sum},
            {"degenerate_roots", rep.degenerate_roots},
            {"grid", to_json(rep.grid)},
            {"runs", runs},
            {"warnings", rep.warnings},
            {"roots", root_list(rep.roots, g, system)}};
}

json to_json(const MultiplicityAudit& a) {
    return {{"type", "multiplicity"},
            {"ell", a.ell},
            {"expected", a.expected_degree ? json(*a.expected_degree) : json(nullptr)},
            {"strict_max", a.strict_max},
            {"strict_min", a.strict_min},
            {"extremum_sum", a.extremum_sum},
            {"contradiction", a.contradiction},
            {"forced_minimum", a.forced_minimum},
            {"observed", a.observed},
            {"satisfied", a.satisfied}};
}

json to_json(const SecondRootAudit& a) {
    return {{"type", "second_root"},
            {"trigger", a.trigger},
            {"forced_minimum", a.forced_minimum},
            {"observed", a.observed},
            {"satisfied", a.satisfied}};
}

json to_json(const HomotopyAudit& a) {
    json slices = json::array();
    for (const auto& s : a.slices) {
        slices.push_back({{"sigma", s.sigma},
                          {"roots", s.root_count},
                          {"degree", s.degree},
                          {"degenerate_roots", s.degenerate_roots},
                          {"margin", real(s.margin)}});
    }
    return {{"type", "homotopy"},
            {"radius", real(a.radius)},
            {"bound", real(a.bound)},
            {"search_radius", real(a.search_radius)},
            {"radius_below_bound", a.radius_below_bound},
            {"contained", a.contained},
            {"degree_constant", a.degree_constant},
            {"zero_slice_empty", a.zero_slice_empty},
            {"passed", a.passed},
            {"slices", slices},
            {"warnings", a.warnings}};
}

json to_json(const SystemBound& b) {
    return {{"type", "system_bound"}, {"Lambda1", real(b.Lambda1)}, {"Lambda2", real(b.Lambda2)},
            {"Lambda3", real(b.Lambda3)}, {"Ctilde", real(b.Ctilde)},   {"b", real(b.b)},
            {"c", real(b.c)},             {"C1", real(b.C1)},           {"C2", real(b.C2)},
            {"bound", real(b.bound)}};
}

json to_json(const AprioriData& a) {
    return {{"type", "apriori"}, {"a1", real(a.a1)},       {"b1", real(a.b1)},       {"c0", real(a.c0)},
            {"c1", real(a.c1)},   {"A1", real(a.A1)},       {"upper", real(a.upper)}, {"lower", real(a.lower)},
            {"radius", real(a.radius)}};
}

json to_json(const BranchRecord& rec, const WeightedGraph& g, bool system) {
    return {{"type", "branch"},
            {"parameter", rec.parameter},
            {"count", rec.roots.size()},
            {"strict_min", rec.strict_min},
            {"strict_max", rec.strict_max},
            {"saddles", rec.saddles},
            {"degenerate", rec.degenerate},
            {"events", rec.events},
            {"roots", root_list(rec.roots, g, system)}};
}

json to_json(const ThresholdEstimate& est) {
    return {{"type", "threshold"},
            {"which", threshold_name(est.which)},
            {"lo", est.lo},
            {"hi", est.hi},
            {"certificate_lo", est.certificate_lo},
            {"certificate_hi", est.certificate_hi},
            {"evaluations", est.evaluations},
            {"mean_f", est.fbar},
            {"consistent", est.consistent()},
            {"flags", est.flags}};
}

json to_json(const SigmaTrack& track) {
    json sigmas = json::array();
    for (const auto& r : track.records) sigmas.push_back(r.parameter);
    return {{"type", "sigma_track"},
            {"sigma", sigmas},
            {"norms", track.norms},
            {"lost", track.lost},
            {"last_good_sigma", track.last_good_sigma ? json(*track.last_good_sigma) : json(nullptr)},
            {"failure", track.failure},
            {"log_gap", real(track.log_gap)},
            {"divergence_rate", real(track.divergence_rate)}};
}

json to_json(const CheckResult& c) {
    return {{"type", "check"}, {"module", c.module}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}

void write_record(std::ostream& out, const json& doc) { out << doc.dump() << '\n'; }

void write_sweep_csv(std::ostream& out, const std::vector<BranchRecord>& records, const WeightedGraph& g, bool system) {
    out << "parameter,root_id";
    for (const char* prefix : system ? std::vector<const char*>{"u_", "v_"} : std::vector<const char*>{"v_"}) {
        for (const auto& id : g.ids()) out << ',' << prefix << id;
    }
    out << ",morse_index,sign_det\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& rec : records) {
        for (std::size_t k = 0; k < rec.roots.size(); ++k) {
            const auto& r = rec.roots[k];
            out << rec.parameter << ',' << k;
            for (Eigen::Index i = 0; i < r.point.size(); ++i) out << ',' << r.point[i];
            out << ',' << r.morse_index << ',' << r.sign_det << '\n';
        }
    }
}

}  // namespace cshlab
