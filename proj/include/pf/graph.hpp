#ifndef PF_GRAPH_HPP
#define PF_GRAPH_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pf/diagnostics.hpp"
#include "pf/metamodel.hpp"

namespace pf {

/// One attribute slot. A slot holds either a concrete constant of the
/// declared sort or a named variable that matching may bind.
struct AttributeValue {
    enum class Kind { Const, Var };

    Kind kind = Kind::Const;
    Sort sort = Sort::String;
    std::string text;    // constant text, enum member or variable name
    bool bvalue = false; // decoded boolean constant
    long long ivalue = 0; // decoded integer constant

    static AttributeValue string_const(std::string v);
    static AttributeValue bool_const(bool v);
    static AttributeValue int_const(long long v);
    static AttributeValue enum_const(std::string member);
    static AttributeValue var(std::string name, Sort sort);

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const { return kind == Kind::Const; }

    /// Constants compare by decoded value, variables by name; a constant
    /// never equals a variable.
    bool same_value(const AttributeValue& other) const;

    std::string display() const;
};

enum class RelOp { Lt, Le, Eq, Gt, Ge, Ne };

std::string rel_op_text(RelOp op);
RelOp flip_rel_op(RelOp op);
bool eval_rel_op(long long lhs, RelOp op, long long rhs);

/// A relational condition between an integer variable and either another
/// integer variable or a constant. Stored in canonical form: when both
/// sides are variables the lexicographically smaller name is on the left
/// (mirroring the operator as needed), so equal conditions compare equal.
struct RelAtom {
    std::string lhs_var;
    RelOp op = RelOp::Eq;
    bool rhs_is_var = false;
    std::string rhs_var;
    long long rhs_const = 0;

    static RelAtom var_const(std::string lhs, RelOp op, long long rhs);
    static RelAtom var_var(std::string lhs, RelOp op, std::string rhs);

    std::string display() const;
    auto operator<=>(const RelAtom&) const = default;
};

struct GraphNode {
    std::string id;
    std::string type;
    std::map<std::string, AttributeValue> attrs;
};

struct GraphEdge {
    std::string id;
    std::string type;
    std::string src;
    std::string dst;
};

/// A graph typed over a metamodel, with attribute slots that may hold
/// variables and an optional conjunction of relational atoms over the
/// integer variables. Node and edge ids are unique strings; iteration
/// order is id order throughout, which keeps every downstream algorithm
/// deterministic.
class TypedGraph {
public:
    explicit TypedGraph(MetamodelPtr meta);

    const MetamodelPtr& meta() const { return meta_; }

    /// Adds a node; every declared attribute slot missing from `attrs`
    /// must be filled by the caller beforehand (parsers apply defaults).
    void add_node(GraphNode node);
    void add_edge(GraphEdge edge);
    void add_atom(RelAtom atom);

    bool has_node(const std::string& id) const { return nodes_.count(id) > 0; }
    bool has_edge(const std::string& id) const { return edges_.count(id) > 0; }
    const GraphNode& node(const std::string& id) const;
    const GraphEdge& edge(const std::string& id) const;

    const std::map<std::string, GraphNode>& nodes() const { return nodes_; }
    const std::map<std::string, GraphEdge>& edges() const { return edges_; }
    const std::set<RelAtom>& atoms() const { return atoms_; }

    /// Edge ids incident to a node, in id order.
    const std::vector<std::string>& out_edges(const std::string& node_id) const;
    const std::vector<std::string>& in_edges(const std::string& node_id) const;

    std::size_t degree(const std::string& node_id) const;

    /// All variable names appearing in attribute slots, with their sorts.
    /// Atom-only variables are also included (as Integer).
    std::map<std::string, Sort> variables() const;

    bool empty() const { return nodes_.empty(); }

private:
    MetamodelPtr meta_;
    std::map<std::string, GraphNode> nodes_;
    std::map<std::string, GraphEdge> edges_;
    std::set<RelAtom> atoms_;
    std::map<std::string, std::vector<std::string>> out_;
    std::map<std::string, std::vector<std::string>> in_;
};

using GraphPtr = std::shared_ptr<const TypedGraph>;

/// Structure-preserving map between two graphs over the same metamodel.
/// `var_subst` records how variables of the source are renamed/bound in
/// the target's vocabulary (variable -> variable name or constant).
struct GraphMorphism {
    GraphPtr source;
    GraphPtr target;
    std::map<std::string, std::string> node_map;
    std::map<std::string, std::string> edge_map;
    std::map<std::string, AttributeValue> var_subst;

    std::string apply_node(const std::string& id) const;
    std::string apply_edge(const std::string& id) const;

    bool total() const;
    bool injective() const;

    /// Checks totality, typing, incidence preservation and attribute
    /// compatibility; returns issues (empty means valid).
    ValidationReport validate() const;

    static GraphMorphism identity(GraphPtr g);

    /// Composition g . f (apply f first); f.target must be g.source.
    static GraphMorphism compose(const GraphMorphism& f, const GraphMorphism& g);
};

/// Structural well-formedness of a graph against its metamodel: known
/// types, declared attributes present and sort-correct, endpoints typed
/// as the edge type demands, atom variables of integer sort.
ValidationReport validate_graph(const TypedGraph& g);

} // namespace pf

#endif // PF_GRAPH_HPP
