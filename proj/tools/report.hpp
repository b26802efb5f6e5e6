#pragma once

// JSON report fragments. Top-level report keys: alpha, scenario, bounds,
// norms, solver.

#include <json.hpp>

#include "vestokes/ellipticity.hpp"
#include "vestokes/mms.hpp"
#include "vestokes/properties.hpp"
#include "vestokes/solver.hpp"
#include "vestokes/verification.hpp"

namespace vestokes::cli {

using Json = nlohmann::ordered_json;

Json to_json(const Vec3& x);
Json to_json(const IntervalSet& s);
/// {id, statement, lhs, rhs, satisfied} or {id, statement, lhs, rhs, ratio}.
Json to_json(const BoundAudit& a, bool with_point = false);
Json to_json(const std::vector<BoundAudit>& audits, bool with_point = false);
Json to_json(const DataNorms& d);
Json to_json(const DiscreteNorms& d);
Json to_json(const FactorizationStats& s, double residual);
Json to_json(const EllipticityReport& r);
Json to_json(const ConvergenceTable& t);
Json to_json(const GuardResult& g);
Json to_json(const PropertyResult& r);

/// Report skeleton with the five top-level keys set to null.
Json empty_report(const std::string& command);

}  // namespace vestokes::cli
