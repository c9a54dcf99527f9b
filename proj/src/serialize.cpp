#include "pf/serialize.hpp"

#include <set>
#include <sstream>

namespace pf {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

namespace {

std::string value_text(const AttributeValue& v) {
    if (v.is_var()) return "?" + quoted(v.text);
    switch (v.sort) {
    case Sort::Boolean: return v.bvalue ? "true" : "false";
    case Sort::Integer: return std::to_string(v.ivalue);
    default: return quoted(v.text);
    }
}

std::string atom_text(const RelAtom& atom) {
    std::string out = quoted(atom.lhs_var) + " " + rel_op_text(atom.op) + " ";
    out += atom.rhs_is_var ? quoted(atom.rhs_var) : std::to_string(atom.rhs_const);
    return out;
}

void write_node(std::ostream& os, const std::string& indent, const GraphNode& node,
                const std::map<std::string, std::string>* roles) {
    os << indent << "node " << node.type << " " << quoted(node.id);
    if (roles) {
        auto it = roles->find(node.id);
        if (it != roles->end()) os << " as " << it->second;
    }
    if (!node.attrs.empty()) {
        os << " { ";
        bool first = true;
        for (const auto& [attr, value] : node.attrs) {
            if (!first) os << ", ";
            first = false;
            os << attr << ": " << value_text(value);
        }
        os << " }";
    }
    os << ";\n";
}

void write_edge(std::ostream& os, const std::string& indent, const GraphEdge& edge) {
    os << indent << "edge " << edge.type << " " << quoted(edge.src) << " -> "
       << quoted(edge.dst) << " " << quoted(edge.id) << ";\n";
}

void write_atom(std::ostream& os, const std::string& indent, const RelAtom& atom) {
    os << indent << "where " << atom_text(atom) << ";\n";
}

/// Emits the elements of `g` that are not already in `base` (base may
/// be null for "emit everything").
void write_delta(std::ostream& os, const std::string& indent, const TypedGraph& g,
                 const TypedGraph* base, const std::map<std::string, std::string>* roles) {
    for (const auto& [id, node] : g.nodes())
        if (!base || !base->has_node(id)) write_node(os, indent, node, roles);
    for (const auto& [id, edge] : g.edges())
        if (!base || !base->has_edge(id)) write_edge(os, indent, edge);
    for (const auto& atom : g.atoms())
        if (!base || !base->atoms().count(atom)) write_atom(os, indent, atom);
}

} // namespace

std::string write_model(const TypedGraph& g) {
    std::ostringstream os;
    os << "model " << g.meta()->tag() << ";\n";
    write_delta(os, "", g, nullptr, nullptr);
    return os.str();
}

std::string equations_to_string(const std::vector<CountRelation>& rels) {
    std::string out;
    for (const auto& rel : rels) {
        if (!out.empty()) out += ", ";
        out += rel.display();
    }
    return out;
}

std::string write_pattern(const Pattern& p) {
    std::ostringstream os;
    os << "pattern " << p.name << " {\n";
    os << "    diagram " << p.meta->tag() << ";\n";
    if (!p.intent.empty()) os << "    intent " << quoted(p.intent) << ";\n";
    if (!p.roles.empty()) {
        os << "    roles ";
        for (std::size_t i = 0; i < p.roles.size(); ++i) {
            if (i) os << ", ";
            os << p.roles[i];
        }
        os << ";\n";
    }
    auto parts = p.parts_preorder();
    for (const VariablePart* part : parts) {
        const VariablePart* parent = p.parent_of(part->name);
        if (!parent) {
            os << "    root {\n";
        } else {
            os << "    part " << part->name << " in " << parent->name << " {\n";
        }
        write_delta(os, "        ", *part->graph, parent ? parent->graph.get() : nullptr,
                    &part->role_labels);
        os << "    }\n";
    }
    if (!p.equations.empty())
        os << "    equations " << equations_to_string(p.equations) << ";\n";
    for (const auto& c : p.constraints) {
        const VariablePart* anchor = p.find_part(c.anchor);
        if (c.is_nac()) {
            os << "    nac " << c.anchor << " " << quoted(c.label) << " {\n";
            write_delta(os, "        ", *c.premise, anchor ? anchor->graph.get() : nullptr,
                        nullptr);
            os << "    }\n";
        } else {
            os << "    require " << c.anchor << " " << quoted(c.label) << " {\n";
            os << "        premise {\n";
            write_delta(os, "            ", *c.premise,
                        anchor ? anchor->graph.get() : nullptr, nullptr);
            os << "        }\n";
            for (const auto& cons : c.consequences) {
                os << "        consequence {\n";
                write_delta(os, "            ", *cons.graph, c.premise.get(), nullptr);
                os << "        }\n";
            }
            os << "    }\n";
        }
    }
    for (const auto& decl : p.sync_decls) {
        os << "    sync " << decl.secondary << " {\n";
        for (const auto& link : decl.links)
            os << "        link " << link.primary_part << "." << quoted(link.primary_node)
               << " = " << link.secondary_part << "." << quoted(link.secondary_node)
               << ";\n";
        os << "    }\n";
    }
    os << "}\n";
    return os.str();
}

Json value_to_json(const AttributeValue& v) {
    if (v.is_var()) return Json{{"var", v.text}};
    switch (v.sort) {
    case Sort::Boolean: return Json(v.bvalue);
    case Sort::Integer: return Json(v.ivalue);
    default: return Json(v.text);
    }
}

Json assignment_to_json(const ReplicaAssignment& a) {
    Json out = Json::object();
    for (const auto& [var, count] : a) out[var] = count;
    return out;
}

Json occurrence_to_json(const Occurrence& occ) {
    Json out = Json::object();
    out["pattern"] = occ.pattern_name;
    out["assignment"] = assignment_to_json(occ.assignment);
    Json bindings = Json::array();
    for (const auto& b : occ.role_bindings) {
        Json entry = Json::object();
        entry["element"] = b.element;
        entry["role"] = b.role;
        entry["part"] = b.part;
        entry["replica"] = b.replica;
        bindings.push_back(std::move(entry));
    }
    out["bindings"] = std::move(bindings);
    return out;
}

Json occurrences_document(const std::vector<Occurrence>& occs) {
    Json out = Json::object();
    Json list = Json::array();
    for (const auto& occ : occs) list.push_back(occurrence_to_json(occ));
    out["occurrences"] = std::move(list);
    return out;
}

std::string occurrences_table(const std::vector<Occurrence>& occs) {
    std::ostringstream os;
    os << occs.size() << (occs.size() == 1 ? " occurrence\n" : " occurrences\n");
    for (std::size_t i = 0; i < occs.size(); ++i) {
        const Occurrence& occ = occs[i];
        os << "#" << (i + 1) << " " << occ.pattern_name;
        if (!occ.assignment.empty()) {
            os << "  counts {";
            bool first = true;
            for (const auto& [var, count] : occ.assignment) {
                if (!first) os << ", ";
                first = false;
                os << var << "=" << count;
            }
            os << "}";
        }
        os << "\n";
        for (const auto& b : occ.role_bindings) {
            os << "    " << b.element << "  role " << b.role << "  (";
            if (b.part == "root")
                os << "root";
            else
                os << b.part << " #" << b.replica;
            os << ")\n";
        }
    }
    return os.str();
}

Json annotation_document(const std::string& model_name,
                         const std::vector<Occurrence>& occs) {
    Json out = Json::object();
    out["model"] = model_name;
    out["occurrences"] = occurrences_document(occs)["occurrences"];
    return out;
}

Json provenance_json(const Expansion& e) {
    Json out = Json::object();
    out["assignment"] = assignment_to_json(e.assignment);
    auto prov_map = [](const std::map<std::string, Provenance>& m) {
        Json obj = Json::object();
        for (const auto& [id, prov] : m) {
            Json entry = Json::object();
            entry["part"] = prov.part;
            entry["replica"] = prov.replica;
            entry["local"] = prov.local_id;
            obj[id] = std::move(entry);
        }
        return obj;
    };
    out["nodes"] = prov_map(e.node_provenance);
    out["edges"] = prov_map(e.edge_provenance);
    Json roles = Json::object();
    for (const auto& [id, role] : e.role_map) roles[id] = role;
    out["roles"] = std::move(roles);
    return out;
}

Json violation_to_json(const ConstraintViolation& v) {
    Json out = Json::object();
    out["pattern"] = v.pattern;
    out["label"] = v.label;
    out["anchor_part"] = v.anchor_part;
    out["anchor_replica"] = v.anchor_replica;
    out["message"] = v.message;
    out["witness"] = v.witness_nodes;
    return out;
}

} // namespace pf
