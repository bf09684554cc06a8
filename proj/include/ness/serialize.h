// JSON and Graphviz renderings of traces and causal reports.

#ifndef NESS_SERIALIZE_H_
#define NESS_SERIALIZE_H_

#include <string>

#include <json.hpp>

#include "ness/causation.h"
#include "ness/domain.h"
#include "ness/simulator.h"

namespace ness {

/// {"domain", "horizon", "events": [{"t", "events"}], "states": [{"t", "literals"}]}.
nlohmann::json to_json(const Context& ctx, const Trace& trace);

nlohmann::json to_json(const Occurrence& o);
nlohmann::json to_json(const OccurrenceSet& occurrences);
nlohmann::json to_json(const DirectRelation& r);

/// Full report: direct relations, rejected backings, expansions, cause sets
/// and the "answer" / "expanded" / "decisional" summaries.
nlohmann::json to_json(const CausalReport& report);

/// Causal graph: boxes for occurrences ("e:name@t"), ellipses for literals
/// ("l:lit@t") and diamonds for formulas ("f:psi@t"). Decisional actions get
/// a dashed edge into the target.
std::string to_dot(const CausalReport& report);

}  // namespace ness

#endif  // NESS_SERIALIZE_H_
