#include "pf/metamodel.hpp"

#include <algorithm>

namespace pf {

std::string sort_name(Sort s) {
    switch (s) {
    case Sort::String: return "string";
    case Sort::Boolean: return "boolean";
    case Sort::Integer: return "integer";
    case Sort::Enum: return "enum";
    }
    return "?";
}

bool AttrDecl::valid_enum_member(const std::string& v) const {
    return std::find(enum_values.begin(), enum_values.end(), v) != enum_values.end();
}

const AttrDecl* NodeType::find_attr(const std::string& attr) const {
    for (const auto& a : attrs)
        if (a.name == attr) return &a;
    return nullptr;
}

Metamodel::Metamodel(std::string tag, std::vector<NodeType> node_types,
                     std::vector<EdgeType> edge_types)
    : tag_(std::move(tag)), node_types_(std::move(node_types)),
      edge_types_(std::move(edge_types)) {
    for (std::size_t i = 0; i < node_types_.size(); ++i) {
        auto [it, fresh] = node_index_.emplace(node_types_[i].name, i);
        (void)it;
        if (!fresh) throw PfError("duplicate node type '" + node_types_[i].name + "'");
    }
    for (std::size_t i = 0; i < edge_types_.size(); ++i) {
        auto [it, fresh] = edge_index_.emplace(edge_types_[i].name, i);
        (void)it;
        if (!fresh) throw PfError("duplicate edge type '" + edge_types_[i].name + "'");
        if (!node_index_.count(edge_types_[i].source))
            throw PfError("edge type '" + edge_types_[i].name +
                          "' has unknown source type '" + edge_types_[i].source + "'");
        if (!node_index_.count(edge_types_[i].target))
            throw PfError("edge type '" + edge_types_[i].name +
                          "' has unknown target type '" + edge_types_[i].target + "'");
    }
}

const NodeType* Metamodel::find_node_type(const std::string& name) const {
    auto it = node_index_.find(name);
    return it == node_index_.end() ? nullptr : &node_types_[it->second];
}

const EdgeType* Metamodel::find_edge_type(const std::string& name) const {
    auto it = edge_index_.find(name);
    return it == edge_index_.end() ? nullptr : &edge_types_[it->second];
}

MetamodelPtr class_diagram_metamodel() {
    static const MetamodelPtr mm = [] {
        std::vector<NodeType> nodes;
        nodes.push_back(NodeType{
            "Class",
            {AttrDecl{"name", Sort::String, {}, ""},
             AttrDecl{"abstract", Sort::Boolean, {}, "false"}}});
        nodes.push_back(NodeType{
            "Operation",
            {AttrDecl{"name", Sort::String, {}, ""},
             AttrDecl{"visibility", Sort::Enum, {"public", "private", "protected"},
                      "public"},
             AttrDecl{"static", Sort::Boolean, {}, "false"},
             AttrDecl{"abstract", Sort::Boolean, {}, "false"}}});
        nodes.push_back(NodeType{
            "Attribute",
            {AttrDecl{"name", Sort::String, {}, ""},
             AttrDecl{"visibility", Sort::Enum, {"public", "private", "protected"},
                      "private"},
             AttrDecl{"static", Sort::Boolean, {}, "false"}}});
        nodes.push_back(NodeType{"Note", {AttrDecl{"name", Sort::String, {}, ""}}});
        std::vector<EdgeType> edges = {
            {"inherits", "Class", "Class"},   {"assoc", "Class", "Class"},
            {"aggregates", "Class", "Class"}, {"owns_op", "Class", "Operation"},
            {"owns_attr", "Class", "Attribute"}, {"creates", "Class", "Class"},
            {"annotates", "Note", "Class"},
        };
        return std::make_shared<const Metamodel>("classdiagram", std::move(nodes),
                                                 std::move(edges));
    }();
    return mm;
}

MetamodelPtr collaboration_metamodel() {
    static const MetamodelPtr mm = [] {
        std::vector<NodeType> nodes;
        nodes.push_back(NodeType{"Lifeline", {AttrDecl{"name", Sort::String, {}, ""}}});
        nodes.push_back(NodeType{
            "Message",
            {AttrDecl{"op_name", Sort::String, {}, ""},
             AttrDecl{"order", Sort::Integer, {}, "0"}}});
        std::vector<EdgeType> edges = {
            {"sends", "Lifeline", "Message"},
            {"receives", "Message", "Lifeline"},
            {"next", "Message", "Message"},
        };
        return std::make_shared<const Metamodel>("collaboration", std::move(nodes),
                                                 std::move(edges));
    }();
    return mm;
}

MetamodelPtr metamodel_by_tag(const std::string& tag) {
    if (tag == "classdiagram") return class_diagram_metamodel();
    if (tag == "collaboration") return collaboration_metamodel();
    return nullptr;
}

} // namespace pf
