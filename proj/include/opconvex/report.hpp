#pragma once

#include <nlohmann/json.hpp>

#include "opconvex/counterexample.hpp"
#include "opconvex/hull.hpp"
#include "opconvex/lab.hpp"

namespace opconvex {

nlohmann::json to_json(const ToleranceConfig& tol);
nlohmann::json to_json(const Counterexample& ce);
Counterexample counterexample_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TestVerdict& v);
nlohmann::json to_json(const HullWitness& w);
nlohmann::json to_json(const FeasibilityResult& r);

/// Wording attached to every NoViolationFound verdict.
inline constexpr const char* kEvidenceNote =
    "no violation found within the sample budget; this is evidence, not a proof";

}  // namespace opconvex
