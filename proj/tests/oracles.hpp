#ifndef PF_TESTS_ORACLES_HPP
#define PF_TESTS_ORACLES_HPP

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pf/colimit.hpp"
#include "pf/graph.hpp"
#include "pf/natsolve.hpp"

/// Independent reference implementations the engine is cross-checked
/// against. Everything here favours exhaustive filtering over the
/// engine's incremental algorithms on purpose; keep the two code bases
/// from sharing logic.
namespace pf::oracle {

/// Canonical text form of a node+edge mapping, usable as a set key.
std::string morphism_key(const std::map<std::string, std::string>& node_map,
                         const std::map<std::string, std::string>& edge_map);

std::string morphism_key(const GraphMorphism& m);

/// Every total injective morphism pattern -> host, computed by filtering
/// all injective node placements (type-compatible per node) and, per
/// placement, all injective edge placements; attribute bindings and
/// relational conditions are checked on the completed candidate only.
std::set<std::string> all_morphism_keys(const GraphPtr& pattern, const GraphPtr& host);

/// Does at least one total injective morphism exist? Same filtering as
/// all_morphism_keys with an early exit.
bool some_morphism(const GraphPtr& pattern, const GraphPtr& host);

/// Structural-recursion evaluation of count terms and relations,
/// independent of CountTerm::evaluate.
long long eval_term(const CountTerm& t, const ReplicaAssignment& a);
bool eval_relation(const CountRelation& r, const ReplicaAssignment& a);

/// All assignments over `vars` with values in [0, bound] satisfying all
/// relations, by plain odometer enumeration; lexicographic in the order
/// of `vars`.
std::vector<ReplicaAssignment> grid_solutions(const std::vector<CountRelation>& rels,
                                              const std::vector<std::string>& vars,
                                              long long bound);

/// Pareto-minimal elements by pairwise dominance comparison.
std::vector<ReplicaAssignment> pareto_filter(const std::vector<ReplicaAssignment>& all);

/// Element classes of the glued graph of a tree diagram, computed by
/// union-then-quotient: start from the disjoint elements (diagram node
/// index, element id) and merge along every embedding, then close
/// variable classes under embedding substitutions and identified slots.
struct GluedClasses {
    std::vector<std::set<std::pair<std::size_t, std::string>>> node_classes;
    std::vector<std::set<std::pair<std::size_t, std::string>>> edge_classes;
    std::vector<std::set<std::pair<std::size_t, std::string>>> var_classes;
};

GluedClasses glue_classes(const TreeDiagram& diagram);

/// True when the engine colimit realizes exactly the oracle's quotient:
/// the injections identify two elements iff the oracle does, the glued
/// graph has no extra elements, and types, attribute values, endpoints,
/// variable sharing and conditions all agree. On mismatch `why` (when
/// given) receives a description.
bool colimit_matches(const TreeDiagram& diagram, const ColimitResult& engine,
                     std::string* why = nullptr);

} // namespace pf::oracle

#endif // PF_TESTS_ORACLES_HPP
