#ifndef PF_MATCH_HPP
#define PF_MATCH_HPP

#include <set>
#include <string>
#include <vector>

#include "pf/graph.hpp"

namespace pf {

struct MatchOptions {
    /// Host elements the match may not use (treated as already occupied).
    std::set<std::string> blocked_nodes;
    std::set<std::string> blocked_edges;
    /// Require every pattern variable to bind to a host variable (used
    /// for isomorphism checks between two symbolic graphs).
    bool vars_to_vars_only = false;
    /// Stop after this many results; 0 means unlimited.
    std::size_t limit = 0;
};

/// All total injective morphisms pattern -> host that extend `seed`
/// (a partial node map, may be empty). Pattern variables bind to host
/// slot values; a bound variable must agree everywhere it occurs. A
/// relational condition of the pattern must either evaluate to true
/// under the binding or appear verbatim among the host's conditions.
/// Results are sorted by (node_map, edge_map), so the enumeration is
/// deterministic for equal inputs.
std::vector<GraphMorphism> find_injective_morphisms(
    GraphPtr pattern, GraphPtr host,
    const std::map<std::string, std::string>& seed = {},
    const MatchOptions& options = {});

/// True when some morphism a -> b is a bijection on nodes, edges and
/// variables and maps the condition set of `a` exactly onto that of `b`.
bool is_isomorphic(GraphPtr a, GraphPtr b);

} // namespace pf

#endif // PF_MATCH_HPP
