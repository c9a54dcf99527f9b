#include "pf/expansion.hpp"

#include <algorithm>

namespace pf {

std::string replica_element_id(const std::string& path, const std::string& local_id) {
    return path + local_id;
}

std::string replica_var_id(const std::string& path, const std::string& base) {
    if (path.empty()) return base;
    std::string trimmed = path;
    if (!trimmed.empty() && trimmed.back() == '.') trimmed.pop_back();
    return base + "@" + trimmed;
}

InstanceRenaming root_renaming(const VariablePart& root) {
    InstanceRenaming r;
    for (const auto& [id, node] : root.graph->nodes()) r.nodes[id] = id;
    for (const auto& [id, edge] : root.graph->edges()) r.edges[id] = id;
    for (const auto& [v, s] : root.graph->variables()) r.vars[v] = v;
    return r;
}

InstanceRenaming child_renaming(const VariablePart& child, const InstanceRenaming& parent,
                                const std::string& path) {
    const GraphMorphism& emb = *child.embedding;
    std::map<std::string, std::string> inherited_node, inherited_edge, inherited_var;
    for (const auto& [pn, cn] : emb.node_map) inherited_node[cn] = pn;
    for (const auto& [pe, ce] : emb.edge_map) inherited_edge[ce] = pe;
    for (const auto& [pv, s] : emb.source->variables()) {
        auto it = emb.var_subst.find(pv);
        if (it == emb.var_subst.end())
            inherited_var[pv] = pv; // identity on untouched variables
        else if (it->second.is_var())
            inherited_var[it->second.text] = pv;
    }

    InstanceRenaming r;
    for (const auto& [id, node] : child.graph->nodes()) {
        auto it = inherited_node.find(id);
        r.nodes[id] = it != inherited_node.end() ? parent.nodes.at(it->second)
                                                 : replica_element_id(path, id);
    }
    for (const auto& [id, edge] : child.graph->edges()) {
        auto it = inherited_edge.find(id);
        r.edges[id] = it != inherited_edge.end() ? parent.edges.at(it->second)
                                                 : replica_element_id(path, id);
    }
    for (const auto& [v, s] : child.graph->variables()) {
        auto it = inherited_var.find(v);
        r.vars[v] = it != inherited_var.end() ? parent.vars.at(it->second)
                                              : replica_var_id(path, v);
    }
    return r;
}

namespace {

struct Instance {
    const VariablePart* part;
    std::string path;
    long long replica = 0;
    GraphPtr graph;
    int diagram_index = -1;
    InstanceRenaming rename;
};

AttributeValue rename_value(const AttributeValue& v,
                            const std::map<std::string, std::string>& var_rename) {
    if (v.is_const()) return v;
    auto it = var_rename.find(v.text);
    if (it == var_rename.end()) return v;
    return AttributeValue::var(it->second, v.sort);
}

GraphPtr build_replica_graph(const TypedGraph& part_graph, const InstanceRenaming& rename) {
    auto g = std::make_shared<TypedGraph>(part_graph.meta());
    for (const auto& [id, node] : part_graph.nodes()) {
        GraphNode copy = node;
        copy.id = rename.nodes.at(id);
        for (auto& [attr, value] : copy.attrs) value = rename_value(value, rename.vars);
        g->add_node(std::move(copy));
    }
    for (const auto& [id, edge] : part_graph.edges()) {
        GraphEdge copy = edge;
        copy.id = rename.edges.at(id);
        copy.src = rename.nodes.at(edge.src);
        copy.dst = rename.nodes.at(edge.dst);
        g->add_edge(std::move(copy));
    }
    std::map<std::string, AttributeValue> subst;
    for (const auto& [from, to] : rename.vars)
        if (from != to) subst.emplace(from, AttributeValue::var(to, Sort::Integer));
    for (const auto& atom : part_graph.atoms())
        if (auto rewritten = substitute_atom(atom, subst)) g->add_atom(*rewritten);
    return g;
}

} // namespace

Expansion expand(const Pattern& p, const ReplicaAssignment& assignment) {
    std::vector<Instance> instances;
    {
        Instance root;
        root.part = &p.root;
        root.path = "";
        root.replica = 0;
        root.rename = root_renaming(p.root);
        root.graph = p.root.graph;
        root.diagram_index = 0;
        instances.push_back(std::move(root));
    }

    TreeDiagram diagram;
    diagram.nodes.push_back(TreeDiagram::Node{instances[0].graph, -1, std::nullopt, "root"});

    auto grow = [&](auto&& self, std::size_t inst_index) -> void {
        const VariablePart* part = instances[inst_index].part;
        for (const auto& child : part->children) {
            auto count_it = assignment.find(child.name);
            if (count_it == assignment.end())
                throw PfError("assignment lacks a count for part '" + child.name + "'");
            if (count_it->second < 0)
                throw PfError("negative count for part '" + child.name + "'");
            const GraphMorphism& emb = *child.embedding;
            for (long long i = 0; i < count_it->second; ++i) {
                Instance inst;
                inst.part = &child;
                inst.replica = i;
                inst.path = instances[inst_index].path + child.name + "#" +
                            std::to_string(i) + ".";
                inst.rename =
                    child_renaming(child, instances[inst_index].rename, inst.path);
                inst.graph = build_replica_graph(*child.graph, inst.rename);

                // Diagram embedding: identity on the parent's global ids,
                // plus constant bindings the part embedding introduced.
                const Instance& parent = instances[inst_index];
                GraphMorphism demb;
                demb.source = parent.graph;
                demb.target = inst.graph;
                for (const auto& [pn, cn] : emb.node_map)
                    demb.node_map[parent.rename.nodes.at(pn)] = inst.rename.nodes.at(cn);
                for (const auto& [pe, ce] : emb.edge_map)
                    demb.edge_map[parent.rename.edges.at(pe)] = inst.rename.edges.at(ce);
                for (const auto& [pv, value] : emb.var_subst)
                    if (value.is_const())
                        demb.var_subst[parent.rename.vars.at(pv)] = value;

                inst.diagram_index = static_cast<int>(diagram.nodes.size());
                diagram.nodes.push_back(TreeDiagram::Node{
                    inst.graph, instances[inst_index].diagram_index, demb, inst.path});
                instances.push_back(std::move(inst));
                self(self, instances.size() - 1);
            }
        }
    };
    grow(grow, 0);

    ColimitResult colimit = colimit_tree(diagram);

    // The id scheme keeps every replica's ids globally unique, so the
    // colimit must not have renamed anything.
    for (const auto& inj : colimit.injections)
        for (const auto& [from, to] : inj.node_map)
            if (from != to)
                throw PfError("internal: expansion ids collided ('" + from + "' vs '" +
                              to + "')");

    Expansion result;
    result.graph = colimit.graph;
    result.assignment = assignment;

    for (const auto& inst : instances) {
        const std::string part_name = inst.path.empty() ? "root" : inst.part->name;
        std::set<std::string> inherited_nodes, inherited_edges;
        if (inst.part->embedding) {
            for (const auto& [pn, cn] : inst.part->embedding->node_map)
                inherited_nodes.insert(cn);
            for (const auto& [pe, ce] : inst.part->embedding->edge_map)
                inherited_edges.insert(ce);
        }
        for (const auto& [local, global] : inst.rename.nodes)
            if (!inherited_nodes.count(local))
                result.node_provenance[global] = Provenance{part_name, inst.replica, local};
        for (const auto& [local, global] : inst.rename.edges)
            if (!inherited_edges.count(local))
                result.edge_provenance[global] = Provenance{part_name, inst.replica, local};
        for (const auto& [node_id, role] : inst.part->role_labels)
            result.role_map[inst.rename.nodes.at(node_id)] = role;
    }
    return result;
}

std::vector<Expansion> enumerate_expansions(const Pattern& p, long long bound) {
    std::vector<Expansion> out;
    for (const auto& solution : p.part_system().enumerate_solutions(bound))
        out.push_back(expand(p, solution));
    return out;
}

Expansion ground_expansion(const Expansion& e) {
    const TypedGraph& g = *e.graph;
    auto vars = g.variables();

    // Locate an enum declaration for enum-sorted variables.
    auto enum_default = [&](const std::string& var) -> std::string {
        for (const auto& [id, node] : g.nodes()) {
            const NodeType* nt = g.meta()->find_node_type(node.type);
            if (!nt) continue;
            for (const auto& [attr, value] : node.attrs) {
                if (value.is_var() && value.text == var) {
                    const AttrDecl* decl = nt->find_attr(attr);
                    if (decl && decl->sort == Sort::Enum) {
                        if (!decl->default_value.empty()) return decl->default_value;
                        if (!decl->enum_values.empty()) return decl->enum_values.front();
                    }
                }
            }
        }
        throw PfError("no declaration found for enum variable '" + var + "'");
    };

    std::map<std::string, AttributeValue> subst;
    long long next_int = 1;
    for (const auto& [var, sort] : vars) { // map order = name order
        switch (sort) {
        case Sort::String: subst.emplace(var, AttributeValue::string_const(var)); break;
        case Sort::Boolean: subst.emplace(var, AttributeValue::bool_const(false)); break;
        case Sort::Integer:
            subst.emplace(var, AttributeValue::int_const(next_int++));
            break;
        case Sort::Enum:
            subst.emplace(var, AttributeValue::enum_const(enum_default(var)));
            break;
        }
    }

    auto ground = std::make_shared<TypedGraph>(g.meta());
    for (const auto& [id, node] : g.nodes()) {
        GraphNode copy = node;
        for (auto& [attr, value] : copy.attrs)
            if (value.is_var()) value = subst.at(value.text);
        ground->add_node(std::move(copy));
    }
    for (const auto& [id, edge] : g.edges()) ground->add_edge(edge);
    for (const auto& atom : g.atoms())
        if (auto rewritten = substitute_atom(atom, subst)) ground->add_atom(*rewritten);

    Expansion result = e;
    result.graph = ground;
    return result;
}

} // namespace pf
