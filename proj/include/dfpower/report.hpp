#pragma once

#include "dfpower/analysis.hpp"
#include "dfpower/periodic.hpp"
#include "dfpower/topology.hpp"
#include "dfpower/verify.hpp"

#include <json.hpp>

namespace dfpower {

using Json = nlohmann::ordered_json;

// Report documents. Node and matrix indices are 1-based.

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const Tolerances& tol);
Json to_json(const ContractionReport& report);
Json to_json(const PeriodicLimit& limit);
Json to_json(const VerifyReport& report);

/// Per-matrix gamma, star classification, radii, bounds and vertex
/// stability; for several matrices also the max-gamma profile with its
/// bounds, the switching rate and the shared-gamma class check. A single
/// non-star matrix also gets its fixed point and the contraction report at
/// that point.
Json analyze_program(const TopologyProgram& program, const Tolerances& tol = default_tolerances());

}  // namespace dfpower
