#include "pf/match.hpp"

#include <algorithm>

namespace pf {

namespace {

/// Backtracking state for one enumeration run.
struct Search {
    const TypedGraph& pat;
    const TypedGraph& host;
    const MatchOptions& opts;

    std::vector<std::string> order;                // pattern nodes still to assign
    std::map<std::string, std::string> node_map;   // pattern -> host
    std::set<std::string> used_hosts;              // images already taken
    std::map<std::string, AttributeValue> subst;   // variable bindings
    std::vector<GraphMorphism> results;

    bool done() const { return opts.limit != 0 && results.size() >= opts.limit; }

    /// Tries to bind pattern variable slots against a host value.
    /// Returns false on conflict; records new bindings in `undo`.
    bool bind_value(const AttributeValue& pv, const AttributeValue& hv,
                    std::vector<std::string>& undo) {
        if (pv.is_const()) return pv.same_value(hv);
        if (opts.vars_to_vars_only && !hv.is_var()) return false;
        if (hv.sort != pv.sort) return false;
        auto it = subst.find(pv.text);
        if (it != subst.end()) return it->second.same_value(hv);
        subst.emplace(pv.text, hv);
        undo.push_back(pv.text);
        return true;
    }

    bool node_compatible(const GraphNode& pn, const GraphNode& hn,
                         std::vector<std::string>& undo) {
        if (pn.type != hn.type) return false;
        for (const auto& [attr, pv] : pn.attrs) {
            auto it = hn.attrs.find(attr);
            if (it == hn.attrs.end()) return false;
            if (!bind_value(pv, it->second, undo)) return false;
        }
        return true;
    }

    /// Host edges of one type between two fixed endpoints.
    std::vector<std::string> host_edges_between(const std::string& type,
                                                const std::string& src,
                                                const std::string& dst) const {
        std::vector<std::string> out;
        for (const auto& eid : host.out_edges(src)) {
            const auto& e = host.edge(eid);
            if (e.type == type && e.dst == dst && !opts.blocked_edges.count(eid))
                out.push_back(eid);
        }
        return out; // already in id order
    }

    /// Checks that every pattern edge whose endpoints are both assigned
    /// has enough compatible host edges (a counting look-ahead; the
    /// exact assignment happens once all nodes are placed).
    bool edges_feasible(const std::string& just_assigned) {
        const std::string& img = node_map.at(just_assigned);
        auto check_bundle = [&](const std::string& psrc, const std::string& pdst) {
            std::map<std::string, int> needed; // edge type -> count
            for (const auto& eid : pat.out_edges(psrc)) {
                const auto& e = pat.edge(eid);
                if (e.dst == pdst) ++needed[e.type];
            }
            for (const auto& [type, count] : needed) {
                auto avail =
                    host_edges_between(type, node_map.at(psrc), node_map.at(pdst));
                if (static_cast<int>(avail.size()) < count) return false;
            }
            return true;
        };
        for (const auto& eid : pat.out_edges(just_assigned)) {
            const auto& e = pat.edge(eid);
            if (node_map.count(e.dst) && !check_bundle(just_assigned, e.dst))
                return false;
        }
        for (const auto& eid : pat.in_edges(just_assigned)) {
            const auto& e = pat.edge(eid);
            if (node_map.count(e.src) && !check_bundle(e.src, just_assigned))
                return false;
        }
        (void)img;
        return true;
    }

    /// A pattern condition holds when it evaluates to true under the
    /// current binding, or survives as the same condition in the host.
    bool atom_holds(const RelAtom& atom) const {
        auto resolve = [&](const std::string& var) -> AttributeValue {
            auto it = subst.find(var);
            if (it == subst.end()) return AttributeValue::var(var, Sort::Integer);
            return it->second;
        };
        AttributeValue lhs = resolve(atom.lhs_var);
        AttributeValue rhs = atom.rhs_is_var
                                 ? resolve(atom.rhs_var)
                                 : AttributeValue::int_const(atom.rhs_const);
        if (lhs.is_const() && rhs.is_const())
            return eval_rel_op(lhs.ivalue, atom.op, rhs.ivalue);
        if (lhs.is_var() && rhs.is_var() && lhs.text == rhs.text)
            return atom.op == RelOp::Eq || atom.op == RelOp::Le || atom.op == RelOp::Ge;
        RelAtom image = lhs.is_var() && rhs.is_var()
                            ? RelAtom::var_var(lhs.text, atom.op, rhs.text)
                        : lhs.is_var()
                            ? RelAtom::var_const(lhs.text, atom.op, rhs.ivalue)
                            : RelAtom::var_const(rhs.text, flip_rel_op(atom.op),
                                                 lhs.ivalue);
        return host.atoms().count(image) > 0;
    }

    /// Assigns pattern edges to host edges, backtracking over the edges
    /// of each parallel bundle, and emits a finished morphism per
    /// complete injective edge assignment.
    void assign_edges(std::vector<std::string>& pat_edges, std::size_t idx,
                      std::map<std::string, std::string>& edge_map,
                      std::set<std::string>& used_edges) {
        if (done()) return;
        if (idx == pat_edges.size()) {
            emit(edge_map);
            return;
        }
        const auto& pe = pat.edge(pat_edges[idx]);
        for (const auto& candidate :
             host_edges_between(pe.type, node_map.at(pe.src), node_map.at(pe.dst))) {
            if (used_edges.count(candidate)) continue;
            edge_map[pe.id] = candidate;
            used_edges.insert(candidate);
            assign_edges(pat_edges, idx + 1, edge_map, used_edges);
            used_edges.erase(candidate);
            edge_map.erase(pe.id);
            if (done()) return;
        }
    }

    void emit(const std::map<std::string, std::string>& edge_map) {
        GraphMorphism m;
        m.node_map = node_map;
        m.edge_map = edge_map;
        m.var_subst = subst;
        results.push_back(std::move(m));
    }

    void extend(std::size_t depth) {
        if (done()) return;
        if (depth == order.size()) {
            for (const auto& atom : pat.atoms())
                if (!atom_holds(atom)) return;
            std::vector<std::string> pat_edges;
            for (const auto& [id, e] : pat.edges()) pat_edges.push_back(id);
            std::map<std::string, std::string> edge_map;
            std::set<std::string> used_edges;
            assign_edges(pat_edges, 0, edge_map, used_edges);
            return;
        }
        const std::string& pid = order[depth];
        const GraphNode& pn = pat.node(pid);
        for (const auto& [hid, hn] : host.nodes()) {
            if (used_hosts.count(hid) || opts.blocked_nodes.count(hid)) continue;
            std::vector<std::string> undo;
            if (node_compatible(pn, hn, undo)) {
                node_map[pid] = hid;
                used_hosts.insert(hid);
                if (edges_feasible(pid)) extend(depth + 1);
                used_hosts.erase(hid);
                node_map.erase(pid);
            }
            for (const auto& var : undo) subst.erase(var);
            if (done()) return;
        }
    }
};

} // namespace

std::vector<GraphMorphism> find_injective_morphisms(
    GraphPtr pattern, GraphPtr host, const std::map<std::string, std::string>& seed,
    const MatchOptions& options) {
    if (!pattern || !host) throw PfError("matching requires two graphs");
    if (pattern->meta() != host->meta())
        throw PfError("matching requires graphs over one metamodel");

    Search search{*pattern, *host, options, {}, {}, {}, {}, {}};

    // Pre-place the seed, rejecting incompatible requests outright.
    for (const auto& [pid, hid] : seed) {
        if (!pattern->has_node(pid))
            throw PfError("seed names unknown pattern node '" + pid + "'");
        if (!host->has_node(hid)) throw PfError("seed names unknown host node '" + hid + "'");
        if (search.used_hosts.count(hid) || options.blocked_nodes.count(hid)) return {};
        std::vector<std::string> undo;
        if (!search.node_compatible(pattern->node(pid), host->node(hid), undo)) return {};
        search.node_map[pid] = hid;
        search.used_hosts.insert(hid);
    }
    for (const auto& [pid, hid] : seed)
        if (!search.edges_feasible(pid)) return {};

    // Most-constrained-first ordering: higher degree first, then id.
    for (const auto& [id, node] : pattern->nodes())
        if (!seed.count(id)) search.order.push_back(id);
    std::stable_sort(search.order.begin(), search.order.end(),
                     [&](const std::string& a, const std::string& b) {
                         auto da = pattern->degree(a), db = pattern->degree(b);
                         if (da != db) return da > db;
                         return a < b;
                     });

    search.extend(0);

    std::sort(search.results.begin(), search.results.end(),
              [](const GraphMorphism& a, const GraphMorphism& b) {
                  if (a.node_map != b.node_map) return a.node_map < b.node_map;
                  return a.edge_map < b.edge_map;
              });
    for (auto& m : search.results) {
        m.source = pattern;
        m.target = host;
    }
    return search.results;
}

bool is_isomorphic(GraphPtr a, GraphPtr b) {
    if (!a || !b) return false;
    if (a->meta() != b->meta()) return false;
    if (a->nodes().size() != b->nodes().size()) return false;
    if (a->edges().size() != b->edges().size()) return false;
    if (a->atoms().size() != b->atoms().size()) return false;
    auto avars = a->variables();
    auto bvars = b->variables();
    if (avars.size() != bvars.size()) return false;

    MatchOptions opts;
    opts.vars_to_vars_only = true;
    for (const auto& m : find_injective_morphisms(a, b, {}, opts)) {
        // Variable images must be pairwise distinct (bijection on equal
        // counts). Atom variables without slots stay unbound; treat the
        // identity on them as the binding.
        std::map<std::string, std::string> var_image;
        bool ok = true;
        std::set<std::string> images;
        for (const auto& [v, s] : avars) {
            auto it = m.var_subst.find(v);
            std::string img = it == m.var_subst.end() ? v : it->second.text;
            if (!bvars.count(img) || !images.insert(img).second) {
                ok = false;
                break;
            }
            var_image[v] = img;
        }
        if (!ok) continue;
        std::set<RelAtom> mapped;
        for (const auto& atom : a->atoms()) {
            RelAtom img = atom.rhs_is_var
                              ? RelAtom::var_var(var_image.at(atom.lhs_var), atom.op,
                                                 var_image.at(atom.rhs_var))
                              : RelAtom::var_const(var_image.at(atom.lhs_var), atom.op,
                                                   atom.rhs_const);
            mapped.insert(img);
        }
        if (mapped == b->atoms()) return true;
    }
    return false;
}

} // namespace pf
