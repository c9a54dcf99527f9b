#ifndef PF_COLIMIT_HPP
#define PF_COLIMIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "pf/graph.hpp"

namespace pf {

/// Result of gluing two graphs along a shared interface.
struct PushoutResult {
    GraphPtr graph;
    GraphMorphism from_left;  // A -> P, identity on ids
    GraphMorphism from_right; // B -> P
};

/// Pushout of the span A <-left- K -right-> B. Both legs must be total,
/// injective and share the same source graph object. The result reuses
/// A's element ids; elements only in B keep their ids unless taken, in
/// which case apostrophes are appended until fresh. Identified attribute
/// slots are unified: variables may be renamed or bound to constants;
/// two distinct constants in one slot raise a PfError (attribute clash),
/// as does a relational condition falsified by the unification.
PushoutResult pushout(const GraphMorphism& left, const GraphMorphism& right);

/// Pushout over the empty interface: both graphs side by side, with B's
/// clashing ids and variable names freshened.
PushoutResult disjoint_union(GraphPtr a, GraphPtr b);

/// A tree-shaped diagram of graphs. Node 0 is the root; every other
/// node names a parent with a smaller index and carries the injective
/// embedding parent-graph -> this-graph (the embedding's source must be
/// the parent entry's graph object).
struct TreeDiagram {
    struct Node {
        GraphPtr graph;
        int parent = -1;                        // -1 for the root only
        std::optional<GraphMorphism> embedding; // absent for the root only
        std::string label;                      // used in error messages
    };
    std::vector<Node> nodes;
};

struct ColimitResult {
    GraphPtr graph;
    std::vector<GraphMorphism> injections; // one per diagram node, into graph
};

/// Colimit of a tree diagram, computed as iterated pushouts from the
/// root outward: each child is glued onto the accumulated graph along
/// its parent's image. For tree shapes this yields the categorical
/// colimit; the returned injections commute with the embeddings.
ColimitResult colimit_tree(const TreeDiagram& diagram);

/// Applies a variable substitution to a relational condition. Returns
/// the rewritten atom, std::nullopt when it became trivially true, and
/// throws PfError when it became trivially false.
std::optional<RelAtom> substitute_atom(const RelAtom& atom,
                                       const std::map<std::string, AttributeValue>& subst);

} // namespace pf

#endif // PF_COLIMIT_HPP
