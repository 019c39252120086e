#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "ramulus/chains.hpp"
#include "ramulus/experiments.hpp"
#include "ramulus/local_branch.hpp"
#include "ramulus/measures.hpp"
#include "ramulus/solver.hpp"

namespace ramulus {

using Json = nlohmann::json;

// Readers throw DomainError with a description of the offending field.

/// {"atoms": [{"x": [...], "w": real}, ...]}
AtomicMeasure measure_from_json(const Json& j);
Boundary boundary_from_json(const Json& j);
/// {"vertices": [[...], ...], "edges": [{"tail": i, "head": j, "w": real}, ...]}
PolyChain chain_from_json(const Json& j);
/// {"A": [...], "B": [...], "C": [...], "D": [...], "theta": real, "k": int}
/// plus an optional "alpha".
FourPointInstance four_point_from_json(const Json& j, double alpha);

Json to_json(const Point& p);
Json to_json(const AtomicMeasure& m);
Json to_json(const PolyChain& c);
Json to_json(const Certificates& c);
Json to_json(const SolveResult& r);
Json to_json(const ProbeResult& r);
Json to_json(const FourPointResult& r);
Json to_json(const DyadicReport& r);
Json to_json(const PerturbationReport& r);
Json to_json(const StabilityReport& r);

/// Parses text, rethrowing syntax errors as DomainError with the byte
/// offset of the failure.
Json parse_json(const std::string& text);

/// Keys sorted, shortest round-trip floats, two-space indent, final newline.
std::string dump(const Json& j);

}  // namespace ramulus
