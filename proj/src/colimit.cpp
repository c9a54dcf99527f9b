#include "pf/colimit.hpp"

#include <algorithm>

namespace pf {

namespace {

/// Disjoint-set forest over variable tokens. Tokens are "a:" / "b:"
/// prefixed variable names so the two vocabularies never mix by accident.
class UnionFind {
public:
    void add(const std::string& token) { parent_.emplace(token, token); }

    std::string find(const std::string& token) {
        auto it = parent_.find(token);
        if (it == parent_.end()) throw PfError("unknown union-find token " + token);
        if (it->second == token) return token;
        std::string root = find(it->second);
        it->second = root;
        return root;
    }

    void unite(const std::string& x, const std::string& y) {
        std::string rx = find(x), ry = find(y);
        if (rx == ry) return;
        // Deterministic representative: the smaller token wins.
        if (ry < rx) std::swap(rx, ry);
        parent_[ry] = rx;
    }

    const std::map<std::string, std::string>& raw() const { return parent_; }

private:
    std::map<std::string, std::string> parent_;
};

std::string freshen(std::string candidate, const std::set<std::string>& taken) {
    while (taken.count(candidate)) candidate += '\'';
    return candidate;
}

void require_leg(const GraphMorphism& leg, const char* side) {
    if (!leg.source || !leg.target)
        throw PfError(std::string("pushout ") + side + " leg lacks a graph");
    if (!leg.total())
        throw PfError(std::string("pushout ") + side + " leg is not total");
    if (!leg.injective())
        throw PfError(std::string("pushout ") + side + " leg is not injective");
}

} // namespace

std::optional<RelAtom> substitute_atom(
    const RelAtom& atom, const std::map<std::string, AttributeValue>& subst) {
    auto resolve = [&](const std::string& var) -> AttributeValue {
        auto it = subst.find(var);
        if (it == subst.end()) return AttributeValue::var(var, Sort::Integer);
        return it->second;
    };
    AttributeValue lhs = resolve(atom.lhs_var);
    AttributeValue rhs = atom.rhs_is_var ? resolve(atom.rhs_var)
                                         : AttributeValue::int_const(atom.rhs_const);
    if (lhs.is_const() && rhs.is_const()) {
        if (eval_rel_op(lhs.ivalue, atom.op, rhs.ivalue)) return std::nullopt;
        throw PfError("condition '" + atom.display() + "' became false (" +
                      lhs.display() + " " + rel_op_text(atom.op) + " " + rhs.display() +
                      ")");
    }
    if (lhs.is_var() && rhs.is_var()) {
        if (lhs.text == rhs.text) {
            // x ? x: reflexive operators hold, strict ones cannot.
            if (atom.op == RelOp::Eq || atom.op == RelOp::Le || atom.op == RelOp::Ge)
                return std::nullopt;
            throw PfError("condition '" + atom.display() +
                          "' became false (both sides are '" + lhs.text + "')");
        }
        return RelAtom::var_var(lhs.text, atom.op, rhs.text);
    }
    if (lhs.is_var()) return RelAtom::var_const(lhs.text, atom.op, rhs.ivalue);
    // Constant on the left: mirror so the variable leads.
    return RelAtom::var_const(rhs.text, flip_rel_op(atom.op), lhs.ivalue);
}

PushoutResult pushout(const GraphMorphism& left, const GraphMorphism& right) {
    require_leg(left, "left");
    require_leg(right, "right");
    if (left.source != right.source)
        throw PfError("pushout legs must share one interface graph");
    const TypedGraph& K = *left.source;
    const TypedGraph& A = *left.target;
    const TypedGraph& B = *right.target;
    if (A.meta() != B.meta())
        throw PfError("pushout requires graphs over one metamodel");

    // ---- unify attribute variables along the interface ----------------
    UnionFind uf;
    auto a_token = [](const std::string& v) { return "a:" + v; };
    auto b_token = [](const std::string& v) { return "b:" + v; };
    std::map<std::string, Sort> a_vars = A.variables();
    std::map<std::string, Sort> b_vars = B.variables();
    for (const auto& [v, s] : a_vars) uf.add(a_token(v));
    for (const auto& [v, s] : b_vars) uf.add(b_token(v));

    // Each union class may carry at most one constant value.
    std::map<std::string, AttributeValue> class_const; // keyed by current root
    auto bind_const = [&](const std::string& token, const AttributeValue& c) {
        std::string root = uf.find(token);
        auto it = class_const.find(root);
        if (it == class_const.end()) {
            class_const.emplace(root, c);
        } else if (!it->second.same_value(c)) {
            throw PfError("attribute clash: variable bound to both '" +
                          it->second.display() + "' and '" + c.display() + "'");
        }
    };
    auto unite_tokens = [&](const std::string& x, const std::string& y) {
        std::string rx = uf.find(x), ry = uf.find(y);
        if (rx == ry) return;
        std::optional<AttributeValue> cx, cy;
        if (auto it = class_const.find(rx); it != class_const.end()) cx = it->second;
        if (auto it = class_const.find(ry); it != class_const.end()) cy = it->second;
        if (cx && cy && !cx->same_value(*cy))
            throw PfError("attribute clash: interface identifies '" + cx->display() +
                          "' with '" + cy->display() + "'");
        class_const.erase(rx);
        class_const.erase(ry);
        uf.unite(rx, ry);
        std::string root = uf.find(rx);
        if (cx) class_const.emplace(root, *cx);
        else if (cy) class_const.emplace(root, *cy);
    };

    for (const auto& [kid, knode] : K.nodes()) {
        const GraphNode& an = A.node(left.apply_node(kid));
        const GraphNode& bn = B.node(right.apply_node(kid));
        if (an.type != bn.type)
            throw PfError("interface node '" + kid + "' maps to nodes of types " +
                          an.type + " and " + bn.type);
        for (const auto& [attr, av] : an.attrs) {
            auto jt = bn.attrs.find(attr);
            if (jt == bn.attrs.end()) continue;
            const AttributeValue& bv = jt->second;
            if (av.is_const() && bv.is_const()) {
                if (!av.same_value(bv))
                    throw PfError("attribute clash on '" + attr + "': '" +
                                  av.display() + "' vs '" + bv.display() + "'");
            } else if (av.is_var() && bv.is_var()) {
                if (av.sort != bv.sort)
                    throw PfError("attribute clash on '" + attr + "': variables '" +
                                  av.text + "' and '" + bv.text + "' differ in sort");
                unite_tokens(a_token(av.text), b_token(bv.text));
            } else if (av.is_var()) {
                if (av.sort != bv.sort)
                    throw PfError("attribute clash on '" + attr + "': variable '" +
                                  av.text + "' vs " + sort_name(bv.sort) + " constant");
                bind_const(a_token(av.text), bv);
            } else {
                if (bv.sort != av.sort)
                    throw PfError("attribute clash on '" + attr + "': variable '" +
                                  bv.text + "' vs " + sort_name(av.sort) + " constant");
                bind_const(b_token(bv.text), av);
            }
        }
    }

    // ---- choose result-side names for every class ---------------------
    // A variables keep their names; a class whose members are all from B
    // takes its smallest member name, freshened against taken names.
    std::map<std::string, std::vector<std::string>> members; // root -> tokens
    for (const auto& [token, p] : uf.raw()) members[uf.find(token)].push_back(token);

    std::set<std::string> taken;
    for (const auto& [v, s] : a_vars) taken.insert(v);

    std::map<std::string, AttributeValue> class_value; // root -> result value
    // First pass: classes with a constant or with an A member.
    for (auto& [root, toks] : members) {
        std::sort(toks.begin(), toks.end());
        if (auto it = class_const.find(root); it != class_const.end()) {
            class_value.emplace(root, it->second);
            continue;
        }
        for (const auto& tok : toks) {
            if (tok.rfind("a:", 0) == 0) {
                std::string name = tok.substr(2);
                class_value.emplace(root, AttributeValue::var(name, a_vars.at(name)));
                break;
            }
        }
    }
    // Second pass: pure-B classes, in deterministic (root token) order.
    for (const auto& [root, toks] : members) {
        if (class_value.count(root)) continue;
        std::string base = toks.front().substr(2);
        std::string name = freshen(base, taken);
        taken.insert(name);
        class_value.emplace(root, AttributeValue::var(name, b_vars.at(base)));
    }

    std::map<std::string, AttributeValue> subst_a, subst_b;
    for (const auto& [v, s] : a_vars) {
        AttributeValue val = class_value.at(uf.find(a_token(v)));
        if (!(val.is_var() && val.text == v)) subst_a.emplace(v, val);
    }
    for (const auto& [v, s] : b_vars) {
        AttributeValue val = class_value.at(uf.find(b_token(v)));
        if (!(val.is_var() && val.text == v)) subst_b.emplace(v, val);
    }

    auto apply_subst = [](const AttributeValue& v,
                          const std::map<std::string, AttributeValue>& subst) {
        if (v.is_const()) return v;
        auto it = subst.find(v.text);
        return it == subst.end() ? v : it->second;
    };

    // ---- assemble the result graph ------------------------------------
    auto out = std::make_shared<TypedGraph>(A.meta());

    // Interface images, B side -> A side.
    std::map<std::string, std::string> glued_nodes, glued_edges;
    for (const auto& [kid, knode] : K.nodes())
        glued_nodes.emplace(right.apply_node(kid), left.apply_node(kid));
    for (const auto& [kid, kedge] : K.edges())
        glued_edges.emplace(right.apply_edge(kid), left.apply_edge(kid));

    GraphMorphism from_left, from_right;
    from_left.source = left.target;
    from_right.source = right.target;
    from_left.var_subst = subst_a;
    from_right.var_subst = subst_b;

    for (const auto& [id, node] : A.nodes()) {
        GraphNode copy = node;
        for (auto& [attr, value] : copy.attrs) value = apply_subst(value, subst_a);
        out->add_node(std::move(copy));
        from_left.node_map[id] = id;
    }
    std::set<std::string> node_ids_taken;
    for (const auto& [id, node] : A.nodes()) node_ids_taken.insert(id);
    for (const auto& [id, node] : B.nodes()) {
        if (auto it = glued_nodes.find(id); it != glued_nodes.end()) {
            from_right.node_map[id] = it->second;
            continue;
        }
        std::string fresh = freshen(id, node_ids_taken);
        node_ids_taken.insert(fresh);
        GraphNode copy = node;
        copy.id = fresh;
        for (auto& [attr, value] : copy.attrs) value = apply_subst(value, subst_b);
        out->add_node(std::move(copy));
        from_right.node_map[id] = fresh;
    }

    for (const auto& [id, edge] : A.edges()) {
        out->add_edge(edge);
        from_left.edge_map[id] = id;
    }
    std::set<std::string> edge_ids_taken;
    for (const auto& [id, edge] : A.edges()) edge_ids_taken.insert(id);
    for (const auto& [id, edge] : B.edges()) {
        if (auto it = glued_edges.find(id); it != glued_edges.end()) {
            from_right.edge_map[id] = it->second;
            continue;
        }
        std::string fresh = freshen(id, edge_ids_taken);
        edge_ids_taken.insert(fresh);
        GraphEdge copy = edge;
        copy.id = fresh;
        copy.src = from_right.node_map.at(edge.src);
        copy.dst = from_right.node_map.at(edge.dst);
        out->add_edge(std::move(copy));
        from_right.edge_map[id] = fresh;
    }

    for (const auto& atom : A.atoms())
        if (auto rewritten = substitute_atom(atom, subst_a)) out->add_atom(*rewritten);
    for (const auto& atom : B.atoms())
        if (auto rewritten = substitute_atom(atom, subst_b)) out->add_atom(*rewritten);

    PushoutResult result;
    result.graph = out;
    result.from_left = std::move(from_left);
    result.from_right = std::move(from_right);
    result.from_left.target = result.graph;
    result.from_right.target = result.graph;
    return result;
}

PushoutResult disjoint_union(GraphPtr a, GraphPtr b) {
    if (!a || !b) throw PfError("disjoint_union requires two graphs");
    auto empty = std::make_shared<TypedGraph>(a->meta());
    GraphMorphism to_a, to_b;
    to_a.source = empty;
    to_a.target = std::move(a);
    to_b.source = empty;
    to_b.target = std::move(b);
    return pushout(to_a, to_b);
}

ColimitResult colimit_tree(const TreeDiagram& diagram) {
    if (diagram.nodes.empty()) throw PfError("colimit of an empty diagram");
    const auto& nodes = diagram.nodes;
    if (nodes[0].parent != -1 || nodes[0].embedding.has_value())
        throw PfError("diagram node 0 must be the root");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        if (n.parent < 0 || static_cast<std::size_t>(n.parent) >= i)
            throw PfError("diagram node " + std::to_string(i) +
                          " must name an earlier parent");
        if (!n.embedding)
            throw PfError("diagram node " + std::to_string(i) + " lacks an embedding");
        if (n.embedding->source != nodes[n.parent].graph)
            throw PfError("embedding of diagram node " + std::to_string(i) +
                          " does not start at its parent's graph");
        if (n.embedding->target != n.graph)
            throw PfError("embedding of diagram node " + std::to_string(i) +
                          " does not end at its own graph");
    }

    ColimitResult result;
    result.graph = nodes[0].graph;
    result.injections.resize(nodes.size());
    result.injections[0] = GraphMorphism::identity(result.graph);

    for (std::size_t i = 1; i < nodes.size(); ++i) {
        // Glue child i onto the accumulated graph along its parent image:
        // span  current <- parent-graph -> child-graph.
        GraphMorphism left = result.injections[nodes[i].parent];
        PushoutResult po = pushout(left, *nodes[i].embedding);
        for (std::size_t j = 0; j < i; ++j)
            result.injections[j] =
                GraphMorphism::compose(result.injections[j], po.from_left);
        result.injections[i] = po.from_right;
        result.graph = po.graph;
    }
    return result;
}

} // namespace pf
