#ifndef PF_PATTERN_HPP
#define PF_PATTERN_HPP

#include <optional>
#include <string>
#include <vector>

#include "pf/graph.hpp"
#include "pf/natsolve.hpp"

namespace pf {

/// One node of the variable-part tree. Every part graph extends its
/// parent's graph: the embedding is the inclusion (same element ids).
/// The root part has no embedding and is counted once per instance;
/// each other part is replicated according to the count assignment.
struct VariablePart {
    std::string name; // "root" for the root part
    GraphPtr graph;
    std::optional<GraphMorphism> embedding; // parent graph -> graph
    std::vector<VariablePart> children;
    std::map<std::string, std::string> role_labels; // node id -> role
};

/// Premise/consequence condition anchored at one part. The premise
/// graph extends the anchor part's graph; each consequence extends the
/// premise. Without consequences the premise is forbidden outright
/// (a negative condition); with consequences, every model extension
/// matching the premise must extend further to some consequence.
struct AtomicConstraint {
    struct Consequence {
        GraphPtr graph;
        GraphMorphism embedding; // premise -> graph
    };

    std::string anchor; // part name, or "root"
    std::string label;
    GraphPtr premise;
    GraphMorphism premise_embedding; // anchor graph -> premise
    std::vector<Consequence> consequences;

    bool is_nac() const { return consequences.empty(); }
};

/// Unresolved synchronization declaration as written in a pattern
/// document: the named companion pattern plus element links.
struct SyncDecl {
    struct Link {
        std::string primary_part;
        std::string primary_node;
        std::string secondary_part;
        std::string secondary_node;
    };
    std::string secondary;
    std::vector<Link> links;
};

class Pattern {
public:
    std::string name;
    std::string intent;
    MetamodelPtr meta;
    VariablePart root;
    std::vector<CountRelation> equations;
    std::vector<AtomicConstraint> constraints;
    std::vector<std::string> roles; // role vocabulary
    std::vector<SyncDecl> sync_decls;

    /// Parts in preorder, root first, children in declaration order.
    std::vector<const VariablePart*> parts_preorder() const;

    const VariablePart* find_part(const std::string& part_name) const;

    /// Part name -> parent part, absent for the root.
    const VariablePart* parent_of(const std::string& part_name) const;

    /// The equations that mention the pattern name: they constrain how
    /// often the whole pattern may occur and play no role in expansion.
    std::vector<CountRelation> root_relations() const;

    /// The replication system over the non-root part names. Every part
    /// name is a system variable even when unconstrained.
    EquationSystem part_system() const;
};

/// A primary pattern bundled with companion patterns over other diagram
/// kinds, plus the element links tying them together.
struct SyncLink {
    std::string secondary; // companion pattern name
    std::string primary_part;
    std::string primary_node;
    std::string secondary_part;
    std::string secondary_node;
};

struct SynchronizedPatternSet {
    Pattern primary;
    std::vector<Pattern> secondaries;
    std::vector<SyncLink> links;
};

/// Structural validation: part tree shape and embeddings, graph
/// well-formedness, equation variables, constraint anchors, role
/// labels, and rejection of provably empty replication systems.
ValidationReport validate_pattern(const Pattern& p);

/// Validation across a synchronized set: link endpoints must resolve,
/// part-variable vocabularies must not collide.
ValidationReport validate_sync_set(const SynchronizedPatternSet& set);

/// Joint replication system: all part systems side by side plus one
/// derived count equality per part-to-part link. Links touching a root
/// add no equation (the root is not replicated); their agreement is
/// enforced during sync checking instead.
EquationSystem joint_equation_system(const SynchronizedPatternSet& set);

struct RoleEntry {
    std::string role;
    std::string part;
    std::string node;
};

/// All role annotations of a pattern, parts in preorder.
std::vector<RoleEntry> list_roles(const Pattern& p);

} // namespace pf

#endif // PF_PATTERN_HPP
