#pragma once

#include "cshlab/continuation.hpp"
#include "cshlab/invariants.hpp"

#include <json.hpp>

#include <ostream>

namespace cshlab {

// JSON forms of result types. Points are keyed by vertex id; system points
// are {"u": {...}, "v": {...}}. Non-finite reals become null.

nlohmann::json point_to_json(const Eigen::VectorXd& point, const WeightedGraph& g, bool system);
/// Inverse of point_to_json; throws InputError on missing or unknown ids.
Eigen::VectorXd point_from_json(const nlohmann::json& doc, const WeightedGraph& g, bool system);

nlohmann::json to_json(const ClassifiedSolution& r, const WeightedGraph& g, bool system);
nlohmann::json to_json(const DegreeReport& rep, const WeightedGraph& g, bool system);
nlohmann::json to_json(const MultiplicityAudit& a);
nlohmann::json to_json(const SecondRootAudit& a);
nlohmann::json to_json(const HomotopyAudit& a);
nlohmann::json to_json(const SystemBound& b);
nlohmann::json to_json(const AprioriData& a);
nlohmann::json to_json(const BranchRecord& rec, const WeightedGraph& g, bool system);
nlohmann::json to_json(const ThresholdEstimate& est);
nlohmann::json to_json(const SigmaTrack& track);
nlohmann::json to_json(const CheckResult& c);
nlohmann::json to_json(const SeedGrid& grid);

/// Writes `doc` as one line.
void write_record(std::ostream& out, const nlohmann::json& doc);

/// Sweep table with header parameter,root_id,v_<id>...,morse_index,sign_det.
/// System columns are u_<id> then v_<id>.
void write_sweep_csv(std::ostream& out, const std::vector<BranchRecord>& records, const WeightedGraph& g, bool system);

}  // namespace cshlab
