#ifndef PF_EXPANSION_HPP
#define PF_EXPANSION_HPP

#include <map>
#include <string>
#include <vector>

#include "pf/colimit.hpp"
#include "pf/pattern.hpp"

namespace pf {

/// Which part instance introduced an element of an expansion.
struct Provenance {
    std::string part;    // "root" or a part name
    long long replica = 0; // index within the parent instance
    std::string local_id;  // the element's id inside the part graph
};

/// One member of a pattern's expansion family: the glued graph for a
/// fixed count assignment, with provenance and role annotations carried
/// over from the parts.
struct Expansion {
    GraphPtr graph;
    ReplicaAssignment assignment;
    std::map<std::string, Provenance> node_provenance;
    std::map<std::string, Provenance> edge_provenance;
    std::map<std::string, std::string> role_map; // node id -> role
};

/// Id of a part-local element inside a replica. `path` is the instance
/// path such as "leaves#2." or "absProducts#0.concProducts#1." (empty
/// for the root instance).
std::string replica_element_id(const std::string& path, const std::string& local_id);

/// Renamed variable for a part-local variable of a replica; the root's
/// variables keep their names.
std::string replica_var_id(const std::string& path, const std::string& base);

/// How one part instance's elements and variables are named inside the
/// expansion: part-graph id -> global id. Inherited elements reuse the
/// parent instance's names; local ones get the path prefix.
struct InstanceRenaming {
    std::map<std::string, std::string> nodes;
    std::map<std::string, std::string> edges;
    std::map<std::string, std::string> vars;
};

InstanceRenaming root_renaming(const VariablePart& root);

/// Renaming for a replica of `child` under a parent instance renamed by
/// `parent`. `path` is the replica's full instance path ("a#0." form).
InstanceRenaming child_renaming(const VariablePart& child, const InstanceRenaming& parent,
                                const std::string& path);

/// Glues the replicated part tree for one count assignment. The root
/// occurs once; a part with count n contributes n copies per instance
/// of its parent. Every element id of the result is the id scheme
/// above, so the colimit injections are identities on ids.
Expansion expand(const Pattern& p, const ReplicaAssignment& assignment);

/// Expansions for every in-bound solution of the replication system,
/// in lexicographic solution order.
std::vector<Expansion> enumerate_expansions(const Pattern& p, long long bound);

/// Replaces every variable slot by a concrete value: strings by the
/// variable's own name, booleans by false, integers by 1, 2, ... in
/// variable-name order, enums by the declared default. Conditions
/// that the chosen integers falsify raise PfError.
Expansion ground_expansion(const Expansion& e);

} // namespace pf

#endif // PF_EXPANSION_HPP
