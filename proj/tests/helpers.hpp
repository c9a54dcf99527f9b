#ifndef PF_TESTS_HELPERS_HPP
#define PF_TESTS_HELPERS_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pf/colimit.hpp"
#include "pf/graph.hpp"
#include "pf/metamodel.hpp"

namespace pf::test {

// ---------------------------------------------------------------------
// node and edge builders (every declared slot filled)
// ---------------------------------------------------------------------

inline GraphNode class_node(std::string id, AttributeValue name,
                            AttributeValue abstract = AttributeValue::bool_const(false)) {
    return GraphNode{std::move(id), "Class",
                     {{"name", std::move(name)}, {"abstract", std::move(abstract)}}};
}

inline GraphNode op_node(std::string id, AttributeValue name,
                         AttributeValue visibility = AttributeValue::enum_const("public"),
                         AttributeValue is_static = AttributeValue::bool_const(false),
                         AttributeValue abstract = AttributeValue::bool_const(false)) {
    return GraphNode{std::move(id),
                     "Operation",
                     {{"name", std::move(name)},
                      {"visibility", std::move(visibility)},
                      {"static", std::move(is_static)},
                      {"abstract", std::move(abstract)}}};
}

inline GraphNode attr_node(std::string id, AttributeValue name,
                           AttributeValue visibility = AttributeValue::enum_const("private"),
                           AttributeValue is_static = AttributeValue::bool_const(false)) {
    return GraphNode{std::move(id),
                     "Attribute",
                     {{"name", std::move(name)},
                      {"visibility", std::move(visibility)},
                      {"static", std::move(is_static)}}};
}

inline GraphNode lifeline_node(std::string id, AttributeValue name) {
    return GraphNode{std::move(id), "Lifeline", {{"name", std::move(name)}}};
}

inline GraphNode message_node(std::string id, AttributeValue op_name,
                              AttributeValue order) {
    return GraphNode{std::move(id),
                     "Message",
                     {{"op_name", std::move(op_name)}, {"order", std::move(order)}}};
}

inline GraphEdge edge(std::string id, std::string type, std::string src, std::string dst) {
    return GraphEdge{std::move(id), std::move(type), std::move(src), std::move(dst)};
}

inline AttributeValue svar(const std::string& name) {
    return AttributeValue::var(name, Sort::String);
}

inline AttributeValue ivar(const std::string& name) {
    return AttributeValue::var(name, Sort::Integer);
}

// ---------------------------------------------------------------------
// random graphs over the collaboration metamodel
// ---------------------------------------------------------------------

inline int pick(std::mt19937& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline bool chance(std::mt19937& rng, int percent) {
    return pick(rng, 1, 100) <= percent;
}

struct CollabGraphOpts {
    int max_nodes = 4;
    int max_edges = 4;
    int max_atoms = 2;
    bool const_orders = true;    // allow integer constants in order slots
    int var_percent = 50;        // likelihood of a variable slot
    std::string var_prefix;      // distinguishes variable vocabularies
};

/// Random well-formed collaboration graph. Node ids n0..; edge ids e0..;
/// variables carry the configured prefix.
inline std::shared_ptr<TypedGraph> random_collab_graph(std::mt19937& rng,
                                                       const CollabGraphOpts& opts) {
    static const char* names[] = {"alpha", "beta", "gamma", "delta"};
    static const char* ops[] = {"m1", "m2", "m3", "m4"};
    auto g = std::make_shared<TypedGraph>(collaboration_metamodel());
    int n = pick(rng, 1, opts.max_nodes);
    std::vector<std::string> lifelines, messages, int_vars;
    for (int i = 0; i < n; ++i) {
        std::string id = "n" + std::to_string(i);
        if (chance(rng, 50)) {
            AttributeValue name = chance(rng, opts.var_percent)
                                      ? svar(opts.var_prefix + "s" + std::to_string(i))
                                      : AttributeValue::string_const(names[pick(rng, 0, 3)]);
            g->add_node(lifeline_node(id, std::move(name)));
            lifelines.push_back(id);
        } else {
            AttributeValue op = chance(rng, opts.var_percent)
                                    ? svar(opts.var_prefix + "p" + std::to_string(i))
                                    : AttributeValue::string_const(ops[pick(rng, 0, 3)]);
            AttributeValue order =
                (opts.const_orders && chance(rng, 100 - opts.var_percent))
                    ? AttributeValue::int_const(pick(rng, 0, 3))
                    : ivar(opts.var_prefix + "o" + std::to_string(i));
            if (order.is_var()) int_vars.push_back(order.text);
            g->add_node(message_node(id, std::move(op), std::move(order)));
            messages.push_back(id);
        }
    }
    int m = pick(rng, 0, opts.max_edges);
    for (int j = 0; j < m; ++j) {
        std::string id = "e" + std::to_string(j);
        switch (pick(rng, 0, 2)) {
        case 0:
            if (!lifelines.empty() && !messages.empty())
                g->add_edge(edge(id, "sends", lifelines[pick(rng, 0, int(lifelines.size()) - 1)],
                                 messages[pick(rng, 0, int(messages.size()) - 1)]));
            break;
        case 1:
            if (!lifelines.empty() && !messages.empty())
                g->add_edge(edge(id, "receives", messages[pick(rng, 0, int(messages.size()) - 1)],
                                 lifelines[pick(rng, 0, int(lifelines.size()) - 1)]));
            break;
        default:
            if (!messages.empty())
                g->add_edge(edge(id, "next", messages[pick(rng, 0, int(messages.size()) - 1)],
                                 messages[pick(rng, 0, int(messages.size()) - 1)]));
            break;
        }
    }
    int a = pick(rng, 0, opts.max_atoms);
    for (int k = 0; k < a && !int_vars.empty(); ++k) {
        auto op = static_cast<RelOp>(pick(rng, 0, 5));
        const std::string& lhs = int_vars[pick(rng, 0, int(int_vars.size()) - 1)];
        if (chance(rng, 50) && int_vars.size() > 1) {
            const std::string& rhs = int_vars[pick(rng, 0, int(int_vars.size()) - 1)];
            if (rhs != lhs) {
                g->add_atom(RelAtom::var_var(lhs, op, rhs));
                continue;
            }
        }
        g->add_atom(RelAtom::var_const(lhs, op, pick(rng, 0, 3)));
    }
    return g;
}

// ---------------------------------------------------------------------
// random graphs over the class-diagram metamodel
// ---------------------------------------------------------------------

struct ClassGraphOpts {
    int max_nodes = 6;
    int max_edges = 5;
    int var_percent = 40;
    std::string var_prefix;
};

inline std::shared_ptr<TypedGraph> random_class_graph(std::mt19937& rng,
                                                      const ClassGraphOpts& opts) {
    static const char* names[] = {"Shape", "Widget", "Panel", "Stream"};
    static const char* vis[] = {"public", "private", "protected"};
    auto g = std::make_shared<TypedGraph>(class_diagram_metamodel());
    int n = pick(rng, 1, opts.max_nodes);
    std::vector<std::string> classes, operations;
    for (int i = 0; i < n; ++i) {
        std::string id = "n" + std::to_string(i);
        AttributeValue name = chance(rng, opts.var_percent)
                                  ? svar(opts.var_prefix + "N" + std::to_string(i))
                                  : AttributeValue::string_const(names[pick(rng, 0, 3)]);
        if (chance(rng, 60)) {
            AttributeValue abs = chance(rng, opts.var_percent)
                                     ? AttributeValue::var(opts.var_prefix + "A" +
                                                               std::to_string(i),
                                                           Sort::Boolean)
                                     : AttributeValue::bool_const(chance(rng, 50));
            g->add_node(class_node(id, std::move(name), std::move(abs)));
            classes.push_back(id);
        } else {
            AttributeValue v = chance(rng, opts.var_percent)
                                   ? AttributeValue::var(opts.var_prefix + "V" +
                                                             std::to_string(i),
                                                         Sort::Enum)
                                   : AttributeValue::enum_const(vis[pick(rng, 0, 2)]);
            g->add_node(op_node(id, std::move(name), std::move(v),
                                AttributeValue::bool_const(chance(rng, 30)),
                                AttributeValue::bool_const(chance(rng, 30))));
            operations.push_back(id);
        }
    }
    int m = pick(rng, 0, opts.max_edges);
    static const char* class_edges[] = {"inherits", "assoc", "aggregates", "creates"};
    for (int j = 0; j < m; ++j) {
        std::string id = "e" + std::to_string(j);
        if (!operations.empty() && chance(rng, 35)) {
            if (!classes.empty())
                g->add_edge(edge(id, "owns_op", classes[pick(rng, 0, int(classes.size()) - 1)],
                                 operations[pick(rng, 0, int(operations.size()) - 1)]));
        } else if (classes.size() >= 1) {
            g->add_edge(edge(id, class_edges[pick(rng, 0, 3)],
                             classes[pick(rng, 0, int(classes.size()) - 1)],
                             classes[pick(rng, 0, int(classes.size()) - 1)]));
        }
    }
    return g;
}

/// A pattern likely to occur in `host`: an induced subgraph with renamed
/// ids and a share of constant slots generalized into fresh variables.
inline std::shared_ptr<TypedGraph> varied_subpattern(const TypedGraph& host,
                                                     std::mt19937& rng, int max_nodes) {
    auto g = std::make_shared<TypedGraph>(host.meta());
    std::vector<std::string> all;
    for (const auto& [id, node] : host.nodes()) all.push_back(id);
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t take = std::min<std::size_t>(all.size(), std::size_t(pick(rng, 1, max_nodes)));
    std::map<std::string, std::string> renamed;
    int fresh = 0;
    for (std::size_t i = 0; i < take; ++i) {
        const GraphNode& src = host.node(all[i]);
        GraphNode copy = src;
        copy.id = "p" + std::to_string(i);
        renamed[src.id] = copy.id;
        for (auto& [attr, value] : copy.attrs)
            if (value.is_const() && chance(rng, 30))
                value = AttributeValue::var("G" + std::to_string(fresh++), value.sort);
        g->add_node(std::move(copy));
    }
    int e = 0;
    for (const auto& [id, he] : host.edges())
        if (renamed.count(he.src) && renamed.count(he.dst) && chance(rng, 70))
            g->add_edge(edge("q" + std::to_string(e++), he.type, renamed.at(he.src),
                             renamed.at(he.dst)));
    return g;
}

// ---------------------------------------------------------------------
// random tree diagrams for the gluing oracle
// ---------------------------------------------------------------------

/// Child graph extending `parent`: every parent element carried over
/// (renamed or kept), plus a few fresh elements drawn from small fixed
/// pools so that sibling children collide on ids and variable names.
inline TreeDiagram::Node derive_child(const GraphPtr& parent, std::mt19937& rng,
                                      int index) {
    bool rename = chance(rng, 50);
    std::string prefix = rename ? "c" + std::to_string(index) + "_" : "";
    auto g = std::make_shared<TypedGraph>(parent->meta());
    GraphMorphism emb;
    emb.source = parent;
    for (const auto& [id, node] : parent->nodes()) {
        GraphNode copy = node;
        copy.id = prefix + id;
        for (auto& [attr, value] : copy.attrs)
            if (value.is_var()) value = AttributeValue::var(prefix + value.text, value.sort);
        emb.node_map[id] = copy.id;
        g->add_node(std::move(copy));
    }
    for (const auto& [id, he] : parent->edges()) {
        emb.edge_map[id] = prefix + id;
        g->add_edge(edge(prefix + id, he.type, prefix + he.src, prefix + he.dst));
    }
    for (const auto& [v, sort] : parent->variables())
        emb.var_subst[v] = AttributeValue::var(prefix + v, sort);
    for (const RelAtom& atom : parent->atoms())
        g->add_atom(atom.rhs_is_var
                        ? RelAtom::var_var(prefix + atom.lhs_var, atom.op,
                                           prefix + atom.rhs_var)
                        : RelAtom::var_const(prefix + atom.lhs_var, atom.op,
                                             atom.rhs_const));

    // fresh structure from deliberately clash-prone pools
    std::vector<std::string> lifelines, messages, int_vars;
    for (const auto& [id, node] : g->nodes())
        (node.type == "Lifeline" ? lifelines : messages).push_back(id);
    for (const auto& [v, sort] : g->variables())
        if (sort == Sort::Integer) int_vars.push_back(v);
    int fresh_nodes = pick(rng, 0, 2);
    for (int i = 0; i < fresh_nodes; ++i) {
        std::string id = "f" + std::to_string(pick(rng, 0, 1));
        if (g->has_node(id)) continue;
        if (chance(rng, 50)) {
            g->add_node(lifeline_node(id, chance(rng, 50)
                                              ? svar("V" + std::to_string(pick(rng, 0, 1)))
                                              : AttributeValue::string_const("omega")));
            lifelines.push_back(id);
        } else {
            std::string ov = "W" + std::to_string(pick(rng, 0, 1));
            g->add_node(message_node(id, AttributeValue::string_const("mf"), ivar(ov)));
            messages.push_back(id);
            int_vars.push_back(ov);
        }
    }
    int fresh_edges = pick(rng, 0, 2);
    for (int i = 0; i < fresh_edges; ++i) {
        std::string id = "g" + std::to_string(pick(rng, 0, 1));
        if (g->has_edge(id)) continue;
        if (!lifelines.empty() && !messages.empty() && chance(rng, 50))
            g->add_edge(edge(id, "sends", lifelines[pick(rng, 0, int(lifelines.size()) - 1)],
                             messages[pick(rng, 0, int(messages.size()) - 1)]));
        else if (!messages.empty())
            g->add_edge(edge(id, "next", messages[pick(rng, 0, int(messages.size()) - 1)],
                             messages[pick(rng, 0, int(messages.size()) - 1)]));
    }
    if (!int_vars.empty() && chance(rng, 40)) {
        const std::string& lhs = int_vars[pick(rng, 0, int(int_vars.size()) - 1)];
        const std::string& rhs = int_vars[pick(rng, 0, int(int_vars.size()) - 1)];
        if (lhs != rhs)
            g->add_atom(RelAtom::var_var(lhs, static_cast<RelOp>(pick(rng, 0, 5)), rhs));
        else
            g->add_atom(RelAtom::var_const(lhs, RelOp::Le, 9));
    }

    TreeDiagram::Node out;
    out.graph = g;
    emb.target = out.graph;
    out.embedding = std::move(emb);
    out.label = "child" + std::to_string(index);
    return out;
}

/// Random tree diagram: depth at most 3, graphs at most 4 nodes at the
/// root, replicated children included (same graph and embedding listed
/// more than once).
inline TreeDiagram random_tree_diagram(std::mt19937& rng) {
    TreeDiagram d;
    CollabGraphOpts opts;
    opts.max_nodes = 4;
    opts.max_edges = 3;
    opts.const_orders = false; // keeps every condition non-ground after gluing
    opts.var_percent = 60;
    TreeDiagram::Node root;
    root.graph = random_collab_graph(rng, opts);
    root.label = "root";
    d.nodes.push_back(std::move(root));

    struct Pending {
        std::size_t index;
        int depth;
    };
    std::vector<Pending> queue{{0, 0}};
    int made = 0;
    while (!queue.empty() && d.nodes.size() < 8) {
        Pending cur = queue.back();
        queue.pop_back();
        if (cur.depth >= 3) continue;
        int children = pick(rng, 0, 2);
        for (int c = 0; c < children && d.nodes.size() < 8; ++c) {
            TreeDiagram::Node child = derive_child(d.nodes[cur.index].graph, rng, made++);
            child.parent = static_cast<int>(cur.index);
            long long replicas = chance(rng, 30) ? pick(rng, 2, 3) : 1;
            for (long long r = 0; r < replicas && d.nodes.size() < 8; ++r) {
                d.nodes.push_back(child);
                queue.push_back({d.nodes.size() - 1, cur.depth + 1});
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------------
// process spawning (targets that define PF_CLI_BIN)
// ---------------------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

#ifdef PF_CLI_BIN
struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    std::string stem = "pf_cli_" + std::to_string(++counter);
    std::string out_path = stem + ".out", err_path = stem + ".err";
    std::string cmd = std::string(PF_CLI_BIN) + " " + args + " >" + out_path + " 2>" +
                      err_path;
    int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = (status >= 0 && (status & 0x7f) == 0) ? ((status >> 8) & 0xff) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}
#endif

} // namespace pf::test

#endif // PF_TESTS_HELPERS_HPP
