#ifndef PF_DSL_HPP
#define PF_DSL_HPP

#include <string>

#include "pf/pattern.hpp"

namespace pf {

/// Parses a pattern document. `filename` is used in diagnostics only.
/// Throws ParseError on syntax or construction errors; the result still
/// needs validate_pattern for semantic checks.
Pattern parse_pattern(const std::string& text, const std::string& filename);

/// Parses a model document into a typed graph.
GraphPtr parse_model(const std::string& text, const std::string& filename);

/// File-reading conveniences; throw PfError when the file cannot be
/// read and ParseError on bad content.
Pattern parse_pattern_file(const std::string& path);
GraphPtr parse_model_file(const std::string& path);

/// Deep copy of a graph (same metamodel, ids, attributes, conditions).
std::shared_ptr<TypedGraph> clone_graph(const TypedGraph& g);

/// Identity inclusion of `sub` into `super`; every element of `sub`
/// must exist in `super` under the same id.
GraphMorphism inclusion_morphism(GraphPtr sub, GraphPtr super);

} // namespace pf

#endif // PF_DSL_HPP
