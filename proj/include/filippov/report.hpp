#pragma once

#include <string>

#include "filippov/limitset.hpp"
#include "json.hpp"

namespace filippov {

using Json = nlohmann::ordered_json;

/// Indented JSON with short scalar arrays kept on one line; newline-terminated.
std::string render_json(const Json& j);

Json to_json(Vec2 p);
Json to_json(const SigmaAnalysis& a, const PiecewiseSystem& sys);
Json to_json(const OmegaReport& r);
Json to_json(const LambdaRegion& L);
Json to_json(const ChaosConditions& c);
Json to_json(const LinearChaosReport& r);
Json to_json(const Theorem2Report& r);
Json to_json(const MinimalityReport& r);
/// Summary of a trajectory (arcs, events, terminal) without the samples.
Json trajectory_summary(const Trajectory& traj);

}  // namespace filippov
