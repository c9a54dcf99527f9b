#ifndef PF_METAMODEL_HPP
#define PF_METAMODEL_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pf/diagnostics.hpp"

namespace pf {

enum class Sort { String, Boolean, Integer, Enum };

std::string sort_name(Sort s);

/// Declaration of one attribute slot on a node type.
struct AttrDecl {
    std::string name;
    Sort sort = Sort::String;
    std::vector<std::string> enum_values; // populated iff sort == Enum
    std::string default_value;            // textual default used by parsers

    bool valid_enum_member(const std::string& v) const;
};

struct NodeType {
    std::string name;
    std::vector<AttrDecl> attrs;

    const AttrDecl* find_attr(const std::string& attr) const;
};

/// Directed edge type with fixed endpoint node types.
struct EdgeType {
    std::string name;
    std::string source;
    std::string target;
};

/// A fixed vocabulary of node and edge types that graphs are typed over.
/// Instances are immutable after construction and shared by pointer.
class Metamodel {
public:
    Metamodel(std::string tag, std::vector<NodeType> node_types,
              std::vector<EdgeType> edge_types);

    const std::string& tag() const { return tag_; }
    const std::vector<NodeType>& node_types() const { return node_types_; }
    const std::vector<EdgeType>& edge_types() const { return edge_types_; }

    const NodeType* find_node_type(const std::string& name) const;
    const EdgeType* find_edge_type(const std::string& name) const;

private:
    std::string tag_;
    std::vector<NodeType> node_types_;
    std::vector<EdgeType> edge_types_;
    std::map<std::string, std::size_t> node_index_;
    std::map<std::string, std::size_t> edge_index_;
};

using MetamodelPtr = std::shared_ptr<const Metamodel>;

/// Built-in metamodel for structural class diagrams.
MetamodelPtr class_diagram_metamodel();

/// Built-in metamodel for collaboration (message sequence) diagrams.
MetamodelPtr collaboration_metamodel();

/// Lookup by the tag used in document headers ("classdiagram" or
/// "collaboration"); nullptr when unknown.
MetamodelPtr metamodel_by_tag(const std::string& tag);

} // namespace pf

#endif // PF_METAMODEL_HPP
