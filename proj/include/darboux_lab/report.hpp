#pragma once

#include <string>

#include <json.hpp>

#include "darboux_lab/darboux.hpp"
#include "darboux_lab/numerics.hpp"
#include "darboux_lab/series.hpp"

namespace dlab {

using Json = nlohmann::json;  // objects keep keys sorted

inline constexpr const char* kToolName = "darboux-lab";
inline constexpr const char* kToolVersion = "0.1.0";

Json field_json(const VectorField& field);
Json lattice_json(const CofactorLattice& lattice);
Json to_json(const DarbouxCert& cert);
Json to_json(const ExpFactorCert& cert);
Json to_json(const DarbouxFunction& fn);
Json to_json(const RationalObstruction& obstruction);
Json to_json(const SeriesSpace& space);
Json to_json(const DriftReport& drift);

// {"command", "config", "field", "result", "tool": {"name", "version"}}.
Json make_report(const std::string& command, Json config, const VectorField& field, Json result);

// Human-readable rendering of a report made by make_report.
std::string render_text(const Json& report);

}  // namespace dlab
