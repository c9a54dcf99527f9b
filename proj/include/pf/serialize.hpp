#ifndef PF_SERIALIZE_HPP
#define PF_SERIALIZE_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "pf/expansion.hpp"
#include "pf/matcher.hpp"
#include "pf/pattern.hpp"

namespace pf {

using Json = nlohmann::ordered_json;

/// Quotes and escapes a string for the document formats.
std::string quoted(const std::string& s);

/// Renders a graph in the textual model format; parsing the result
/// reproduces the graph exactly (raw node/edge declarations, every
/// attribute written out, explicit edge ids).
std::string write_model(const TypedGraph& g);

/// Renders a pattern in the DSL; parsing the result yields an
/// equivalent pattern (same parts, equations, constraints, roles).
std::string write_pattern(const Pattern& p);

/// "a >= 0, b > 0" — the relations joined by commas.
std::string equations_to_string(const std::vector<CountRelation>& rels);

Json value_to_json(const AttributeValue& v);
Json assignment_to_json(const ReplicaAssignment& a);

/// {"pattern", "assignment", "bindings": [{"element","role","part","replica"}]}
Json occurrence_to_json(const Occurrence& occ);

/// {"occurrences": [...]} — machine-readable occurrence list.
Json occurrences_document(const std::vector<Occurrence>& occs);

/// Occurrence list as a human-readable role listing.
std::string occurrences_table(const std::vector<Occurrence>& occs);

/// {"model": ..., "occurrences": [...]} — annotation document tying a
/// model file to everything found in it.
Json annotation_document(const std::string& model_name,
                         const std::vector<Occurrence>& occs);

/// {"assignment", "nodes", "edges", "roles"} — which part instance
/// produced each element of an expansion.
Json provenance_json(const Expansion& e);

Json violation_to_json(const ConstraintViolation& v);

} // namespace pf

#endif // PF_SERIALIZE_HPP
