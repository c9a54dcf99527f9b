#include "pf/graph.hpp"

#include <algorithm>

namespace pf {

AttributeValue AttributeValue::string_const(std::string v) {
    AttributeValue a;
    a.kind = Kind::Const;
    a.sort = Sort::String;
    a.text = std::move(v);
    return a;
}

AttributeValue AttributeValue::bool_const(bool v) {
    AttributeValue a;
    a.kind = Kind::Const;
    a.sort = Sort::Boolean;
    a.bvalue = v;
    a.text = v ? "true" : "false";
    return a;
}

AttributeValue AttributeValue::int_const(long long v) {
    AttributeValue a;
    a.kind = Kind::Const;
    a.sort = Sort::Integer;
    a.ivalue = v;
    a.text = std::to_string(v);
    return a;
}

AttributeValue AttributeValue::enum_const(std::string member) {
    AttributeValue a;
    a.kind = Kind::Const;
    a.sort = Sort::Enum;
    a.text = std::move(member);
    return a;
}

AttributeValue AttributeValue::var(std::string name, Sort sort) {
    AttributeValue a;
    a.kind = Kind::Var;
    a.sort = sort;
    a.text = std::move(name);
    return a;
}

bool AttributeValue::same_value(const AttributeValue& other) const {
    if (kind != other.kind) return false;
    if (kind == Kind::Var) return text == other.text;
    if (sort != other.sort) return false;
    switch (sort) {
    case Sort::Boolean: return bvalue == other.bvalue;
    case Sort::Integer: return ivalue == other.ivalue;
    default: return text == other.text;
    }
}

std::string AttributeValue::display() const {
    if (is_var()) return text;
    switch (sort) {
    case Sort::Boolean: return bvalue ? "true" : "false";
    case Sort::Integer: return std::to_string(ivalue);
    default: return text;
    }
}

std::string rel_op_text(RelOp op) {
    switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Eq: return "=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Ne: return "!=";
    }
    return "?";
}

RelOp flip_rel_op(RelOp op) {
    switch (op) {
    case RelOp::Lt: return RelOp::Gt;
    case RelOp::Le: return RelOp::Ge;
    case RelOp::Gt: return RelOp::Lt;
    case RelOp::Ge: return RelOp::Le;
    default: return op; // Eq and Ne are symmetric
    }
}

bool eval_rel_op(long long lhs, RelOp op, long long rhs) {
    switch (op) {
    case RelOp::Lt: return lhs < rhs;
    case RelOp::Le: return lhs <= rhs;
    case RelOp::Eq: return lhs == rhs;
    case RelOp::Gt: return lhs > rhs;
    case RelOp::Ge: return lhs >= rhs;
    case RelOp::Ne: return lhs != rhs;
    }
    return false;
}

RelAtom RelAtom::var_const(std::string lhs, RelOp op, long long rhs) {
    RelAtom a;
    a.lhs_var = std::move(lhs);
    a.op = op;
    a.rhs_is_var = false;
    a.rhs_const = rhs;
    return a;
}

RelAtom RelAtom::var_var(std::string lhs, RelOp op, std::string rhs) {
    RelAtom a;
    if (rhs < lhs) { // canonical orientation: smaller name on the left
        std::swap(lhs, rhs);
        op = flip_rel_op(op);
    }
    a.lhs_var = std::move(lhs);
    a.op = op;
    a.rhs_is_var = true;
    a.rhs_var = std::move(rhs);
    return a;
}

std::string RelAtom::display() const {
    std::string out = lhs_var + " " + rel_op_text(op) + " ";
    out += rhs_is_var ? rhs_var : std::to_string(rhs_const);
    return out;
}

TypedGraph::TypedGraph(MetamodelPtr meta) : meta_(std::move(meta)) {
    if (!meta_) throw PfError("graph requires a metamodel");
}

void TypedGraph::add_node(GraphNode node) {
    if (node.id.empty()) throw PfError("node id must be non-empty");
    if (nodes_.count(node.id)) throw PfError("duplicate node id '" + node.id + "'");
    out_.emplace(node.id, std::vector<std::string>{});
    in_.emplace(node.id, std::vector<std::string>{});
    nodes_.emplace(node.id, std::move(node));
}

void TypedGraph::add_edge(GraphEdge edge) {
    if (edge.id.empty()) throw PfError("edge id must be non-empty");
    if (edges_.count(edge.id)) throw PfError("duplicate edge id '" + edge.id + "'");
    if (!nodes_.count(edge.src))
        throw PfError("edge '" + edge.id + "' references unknown source node '" +
                      edge.src + "'");
    if (!nodes_.count(edge.dst))
        throw PfError("edge '" + edge.id + "' references unknown target node '" +
                      edge.dst + "'");
    auto& outs = out_[edge.src];
    outs.insert(std::upper_bound(outs.begin(), outs.end(), edge.id), edge.id);
    auto& ins = in_[edge.dst];
    ins.insert(std::upper_bound(ins.begin(), ins.end(), edge.id), edge.id);
    edges_.emplace(edge.id, std::move(edge));
}

void TypedGraph::add_atom(RelAtom atom) { atoms_.insert(std::move(atom)); }

const GraphNode& TypedGraph::node(const std::string& id) const {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw PfError("unknown node '" + id + "'");
    return it->second;
}

const GraphEdge& TypedGraph::edge(const std::string& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) throw PfError("unknown edge '" + id + "'");
    return it->second;
}

const std::vector<std::string>& TypedGraph::out_edges(const std::string& node_id) const {
    static const std::vector<std::string> empty;
    auto it = out_.find(node_id);
    return it == out_.end() ? empty : it->second;
}

const std::vector<std::string>& TypedGraph::in_edges(const std::string& node_id) const {
    static const std::vector<std::string> empty;
    auto it = in_.find(node_id);
    return it == in_.end() ? empty : it->second;
}

std::size_t TypedGraph::degree(const std::string& node_id) const {
    return out_edges(node_id).size() + in_edges(node_id).size();
}

std::map<std::string, Sort> TypedGraph::variables() const {
    std::map<std::string, Sort> vars;
    for (const auto& [id, node] : nodes_)
        for (const auto& [attr, value] : node.attrs)
            if (value.is_var()) vars.emplace(value.text, value.sort);
    for (const auto& atom : atoms_) {
        vars.emplace(atom.lhs_var, Sort::Integer);
        if (atom.rhs_is_var) vars.emplace(atom.rhs_var, Sort::Integer);
    }
    return vars;
}

std::string GraphMorphism::apply_node(const std::string& id) const {
    auto it = node_map.find(id);
    if (it == node_map.end())
        throw PfError("morphism has no image for node '" + id + "'");
    return it->second;
}

std::string GraphMorphism::apply_edge(const std::string& id) const {
    auto it = edge_map.find(id);
    if (it == edge_map.end())
        throw PfError("morphism has no image for edge '" + id + "'");
    return it->second;
}

bool GraphMorphism::total() const {
    if (!source) return false;
    for (const auto& [id, node] : source->nodes())
        if (!node_map.count(id)) return false;
    for (const auto& [id, edge] : source->edges())
        if (!edge_map.count(id)) return false;
    return true;
}

bool GraphMorphism::injective() const {
    std::set<std::string> seen;
    for (const auto& [from, to] : node_map)
        if (!seen.insert(to).second) return false;
    seen.clear();
    for (const auto& [from, to] : edge_map)
        if (!seen.insert(to).second) return false;
    return true;
}

namespace {

/// Image of a source-side attribute value under the substitution.
AttributeValue substituted(const AttributeValue& v,
                           const std::map<std::string, AttributeValue>& subst) {
    if (v.is_const()) return v;
    auto it = subst.find(v.text);
    return it == subst.end() ? v : it->second;
}

} // namespace

ValidationReport GraphMorphism::validate() const {
    ValidationReport report;
    if (!source || !target) {
        report.push_back({Severity::Error, "morphism", "source or target graph missing"});
        return report;
    }
    if (source->meta() != target->meta())
        report.push_back(
            {Severity::Error, "morphism", "source and target use different metamodels"});
    if (!total())
        report.push_back({Severity::Error, "morphism", "map is not total"});
    for (const auto& [from, to] : node_map) {
        if (!source->has_node(from)) {
            report.push_back({Severity::Error, from, "maps a node absent from the source"});
            continue;
        }
        if (!target->has_node(to)) {
            report.push_back({Severity::Error, from, "image node '" + to +
                                                         "' absent from the target"});
            continue;
        }
        const auto& sn = source->node(from);
        const auto& tn = target->node(to);
        if (sn.type != tn.type) {
            report.push_back({Severity::Error, from,
                              "image node '" + to + "' has type " + tn.type +
                                  ", expected " + sn.type});
            continue;
        }
        for (const auto& [attr, value] : sn.attrs) {
            auto jt = tn.attrs.find(attr);
            if (jt == tn.attrs.end()) {
                report.push_back({Severity::Error, from,
                                  "image node '" + to + "' lacks attribute '" + attr + "'"});
                continue;
            }
            AttributeValue expect = substituted(value, var_subst);
            if (!expect.same_value(jt->second))
                report.push_back({Severity::Error, from,
                                  "attribute '" + attr + "' maps to '" +
                                      expect.display() + "' but image holds '" +
                                      jt->second.display() + "'"});
        }
    }
    for (const auto& [from, to] : edge_map) {
        if (!source->has_edge(from)) {
            report.push_back({Severity::Error, from, "maps an edge absent from the source"});
            continue;
        }
        if (!target->has_edge(to)) {
            report.push_back({Severity::Error, from, "image edge '" + to +
                                                         "' absent from the target"});
            continue;
        }
        const auto& se = source->edge(from);
        const auto& te = target->edge(to);
        if (se.type != te.type)
            report.push_back({Severity::Error, from,
                              "image edge '" + to + "' has type " + te.type +
                                  ", expected " + se.type});
        auto ns = node_map.find(se.src);
        auto nd = node_map.find(se.dst);
        if (ns != node_map.end() && ns->second != te.src)
            report.push_back({Severity::Error, from,
                              "source endpoint not preserved ('" + ns->second +
                                  "' vs '" + te.src + "')"});
        if (nd != node_map.end() && nd->second != te.dst)
            report.push_back({Severity::Error, from,
                              "target endpoint not preserved ('" + nd->second +
                                  "' vs '" + te.dst + "')"});
    }
    return report;
}

GraphMorphism GraphMorphism::identity(GraphPtr g) {
    GraphMorphism m;
    m.source = g;
    m.target = g;
    if (g) {
        for (const auto& [id, node] : g->nodes()) m.node_map[id] = id;
        for (const auto& [id, edge] : g->edges()) m.edge_map[id] = id;
    }
    return m;
}

GraphMorphism GraphMorphism::compose(const GraphMorphism& f, const GraphMorphism& g) {
    if (f.target != g.source)
        throw PfError("morphism composition requires matching middle graph");
    GraphMorphism h;
    h.source = f.source;
    h.target = g.target;
    for (const auto& [from, mid] : f.node_map) h.node_map[from] = g.apply_node(mid);
    for (const auto& [from, mid] : f.edge_map) h.edge_map[from] = g.apply_edge(mid);
    for (const auto& [var, value] : f.var_subst)
        h.var_subst[var] = substituted(value, g.var_subst);
    // Variables f leaves untouched may still be bound by g.
    for (const auto& [var, value] : g.var_subst)
        if (!h.var_subst.count(var)) h.var_subst[var] = value;
    return h;
}

ValidationReport validate_graph(const TypedGraph& g) {
    ValidationReport report;
    const Metamodel& mm = *g.meta();
    for (const auto& [id, node] : g.nodes()) {
        const NodeType* nt = mm.find_node_type(node.type);
        if (!nt) {
            report.push_back({Severity::Error, id, "unknown node type '" + node.type + "'"});
            continue;
        }
        for (const auto& decl : nt->attrs)
            if (!node.attrs.count(decl.name))
                report.push_back(
                    {Severity::Error, id, "missing attribute '" + decl.name + "'"});
        for (const auto& [attr, value] : node.attrs) {
            const AttrDecl* decl = nt->find_attr(attr);
            if (!decl) {
                report.push_back({Severity::Error, id,
                                  "attribute '" + attr + "' not declared on " + node.type});
                continue;
            }
            if (value.sort != decl->sort)
                report.push_back({Severity::Error, id,
                                  "attribute '" + attr + "' holds a " +
                                      sort_name(value.sort) + " value but is declared " +
                                      sort_name(decl->sort)});
            else if (value.is_const() && decl->sort == Sort::Enum &&
                     !decl->valid_enum_member(value.text))
                report.push_back({Severity::Error, id,
                                  "'" + value.text + "' is not a member of enum '" +
                                      attr + "'"});
            else if (value.is_const() && decl->sort == Sort::Integer &&
                     value.ivalue < 0)
                report.push_back({Severity::Error, id,
                                  "attribute '" + attr + "' must be non-negative"});
        }
    }
    for (const auto& [id, edge] : g.edges()) {
        const EdgeType* et = mm.find_edge_type(edge.type);
        if (!et) {
            report.push_back({Severity::Error, id, "unknown edge type '" + edge.type + "'"});
            continue;
        }
        if (g.has_node(edge.src) && g.node(edge.src).type != et->source)
            report.push_back({Severity::Error, id,
                              "source must be a " + et->source + " node, got " +
                                  g.node(edge.src).type});
        if (g.has_node(edge.dst) && g.node(edge.dst).type != et->target)
            report.push_back({Severity::Error, id,
                              "target must be a " + et->target + " node, got " +
                                  g.node(edge.dst).type});
    }
    auto vars = g.variables();
    std::map<std::string, Sort> slot_sorts;
    for (const auto& [id, node] : g.nodes())
        for (const auto& [attr, value] : node.attrs)
            if (value.is_var()) {
                auto [it, fresh] = slot_sorts.emplace(value.text, value.sort);
                if (!fresh && it->second != value.sort)
                    report.push_back({Severity::Error, value.text,
                                      "variable used at two different sorts (" +
                                          sort_name(it->second) + " and " +
                                          sort_name(value.sort) + ")"});
            }
    for (const auto& atom : g.atoms()) {
        auto check_var = [&](const std::string& v) {
            auto it = slot_sorts.find(v);
            if (it != slot_sorts.end() && it->second != Sort::Integer)
                report.push_back({Severity::Error, atom.display(),
                                  "condition variable '" + v + "' has sort " +
                                      sort_name(it->second) + ", expected integer"});
        };
        check_var(atom.lhs_var);
        if (atom.rhs_is_var) check_var(atom.rhs_var);
    }
    return report;
}

} // namespace pf
