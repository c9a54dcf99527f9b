#include "pf/pattern.hpp"

#include <algorithm>
#include <set>

namespace pf {

namespace {

void collect_preorder(const VariablePart& part, std::vector<const VariablePart*>& out) {
    out.push_back(&part);
    for (const auto& child : part.children) collect_preorder(child, out);
}

const VariablePart* find_in(const VariablePart& part, const std::string& name) {
    if (part.name == name) return &part;
    for (const auto& child : part.children)
        if (const VariablePart* hit = find_in(child, name)) return hit;
    return nullptr;
}

const VariablePart* parent_in(const VariablePart& part, const std::string& name) {
    for (const auto& child : part.children) {
        if (child.name == name) return &part;
        if (const VariablePart* hit = parent_in(child, name)) return hit;
    }
    return nullptr;
}

std::vector<std::string> relation_variables(const CountRelation& rel) {
    std::vector<std::string> vars;
    rel.lhs.collect_variables(vars);
    rel.rhs.collect_variables(vars);
    return vars;
}

} // namespace

std::vector<const VariablePart*> Pattern::parts_preorder() const {
    std::vector<const VariablePart*> out;
    collect_preorder(root, out);
    return out;
}

const VariablePart* Pattern::find_part(const std::string& part_name) const {
    return find_in(root, part_name);
}

const VariablePart* Pattern::parent_of(const std::string& part_name) const {
    return parent_in(root, part_name);
}

std::vector<CountRelation> Pattern::root_relations() const {
    std::vector<CountRelation> out;
    for (const auto& rel : equations) {
        auto vars = relation_variables(rel);
        if (std::find(vars.begin(), vars.end(), name) != vars.end()) out.push_back(rel);
    }
    return out;
}

EquationSystem Pattern::part_system() const {
    std::vector<CountRelation> part_rels;
    for (const auto& rel : equations) {
        auto vars = relation_variables(rel);
        if (std::find(vars.begin(), vars.end(), name) == vars.end())
            part_rels.push_back(rel);
    }
    std::vector<std::string> part_names;
    for (const VariablePart* part : parts_preorder())
        if (part->name != "root") part_names.push_back(part->name);
    return EquationSystem(std::move(part_rels), std::move(part_names));
}

namespace {

/// A single-variable relation against a constant that no natural number
/// satisfies makes the whole system empty for every bound.
bool provably_empty_relation(const CountRelation& rel) {
    auto vars = relation_variables(rel);
    if (vars.empty()) return !evaluate(rel, {});
    if (vars.size() != 1) return false;
    const CountTerm *var_side = nullptr, *const_side = nullptr;
    RelOp op = rel.op;
    if (rel.lhs.kind() == CountTerm::Kind::Variable &&
        rel.rhs.kind() == CountTerm::Kind::Constant) {
        var_side = &rel.lhs;
        const_side = &rel.rhs;
    } else if (rel.rhs.kind() == CountTerm::Kind::Variable &&
               rel.lhs.kind() == CountTerm::Kind::Constant) {
        var_side = &rel.rhs;
        const_side = &rel.lhs;
        op = flip_rel_op(op);
    } else {
        return false;
    }
    (void)var_side;
    long long c = const_side->value();
    switch (op) { // var op c over the naturals
    case RelOp::Lt: return c <= 0;
    case RelOp::Le: return c < 0;
    case RelOp::Eq: return c < 0;
    default: return false; // >, >= always have large enough solutions
    }
}

void validate_part_tree(const Pattern& p, const VariablePart& part,
                        const VariablePart* parent, ValidationReport& report) {
    if (parent == nullptr) {
        if (part.name != "root")
            report.push_back({Severity::Error, part.name, "root part must be named 'root'"});
        if (part.embedding)
            report.push_back({Severity::Error, part.name, "root part has an embedding"});
    } else {
        if (part.name == "root" || part.name == p.name)
            report.push_back({Severity::Error, part.name,
                              "part name collides with a reserved name"});
        if (!part.embedding) {
            report.push_back({Severity::Error, part.name, "part lacks an embedding"});
        } else {
            if (part.embedding->source != parent->graph)
                report.push_back({Severity::Error, part.name,
                                  "embedding does not start at the parent graph"});
            if (part.embedding->target != part.graph)
                report.push_back({Severity::Error, part.name,
                                  "embedding does not end at the part graph"});
            if (!part.embedding->injective())
                report.push_back({Severity::Error, part.name, "embedding is not injective"});
            for (auto issue : part.embedding->validate()) {
                issue.subject = part.name + ": " + issue.subject;
                report.push_back(std::move(issue));
            }
        }
    }
    if (!part.graph) {
        report.push_back({Severity::Error, part.name, "part lacks a graph"});
        return;
    }
    if (part.graph->meta() != p.meta)
        report.push_back({Severity::Error, part.name,
                          "part graph uses a different metamodel than the pattern"});
    for (auto issue : validate_graph(*part.graph)) {
        issue.subject = part.name + ": " + issue.subject;
        report.push_back(std::move(issue));
    }
    for (const auto& [node_id, role] : part.role_labels) {
        if (!part.graph->has_node(node_id))
            report.push_back({Severity::Error, part.name,
                              "role label on unknown node '" + node_id + "'"});
        if (std::find(p.roles.begin(), p.roles.end(), role) == p.roles.end())
            report.push_back({Severity::Error, part.name,
                              "role '" + role + "' is not in the role vocabulary"});
    }
    for (const auto& child : part.children) validate_part_tree(p, child, &part, report);
}

} // namespace

ValidationReport validate_pattern(const Pattern& p) {
    ValidationReport report;
    if (p.name.empty())
        report.push_back({Severity::Error, "pattern", "pattern name is empty"});
    if (!p.meta) {
        report.push_back({Severity::Error, p.name, "pattern lacks a metamodel"});
        return report;
    }

    validate_part_tree(p, p.root, nullptr, report);

    std::set<std::string> part_names;
    for (const VariablePart* part : p.parts_preorder()) {
        if (!part_names.insert(part->name).second)
            report.push_back({Severity::Error, part->name, "duplicate part name"});
    }

    // Equations may constrain either the pattern name or part names, but
    // never both in one relation: pattern-name relations restrict how
    // often the pattern occurs, part relations drive replication.
    for (const auto& rel : p.equations) {
        auto vars = relation_variables(rel);
        bool uses_root_name = false, uses_part = false;
        for (const auto& v : vars) {
            if (v == p.name) {
                uses_root_name = true;
            } else if (part_names.count(v) && v != "root") {
                uses_part = true;
            } else {
                report.push_back({Severity::Error, rel.display(),
                                  "unknown count variable '" + v + "'"});
            }
        }
        if (uses_root_name && uses_part)
            report.push_back({Severity::Error, rel.display(),
                              "relation mixes the pattern name with part counts"});
        if (provably_empty_relation(rel))
            report.push_back({Severity::Error, rel.display(),
                              "relation has no solution over the naturals"});
    }

    for (const auto& c : p.constraints) {
        const VariablePart* anchor = c.anchor == "root" ? &p.root : p.find_part(c.anchor);
        if (!anchor) {
            report.push_back({Severity::Error, c.label,
                              "constraint anchored at unknown part '" + c.anchor + "'"});
            continue;
        }
        if (anchor->name != "root" && p.parent_of(anchor->name) != &p.root)
            report.push_back({Severity::Error, c.label,
                              "constraints may anchor only at the root or its direct parts"});
        if (!c.premise) {
            report.push_back({Severity::Error, c.label, "constraint lacks a premise graph"});
            continue;
        }
        if (c.premise_embedding.source != anchor->graph ||
            c.premise_embedding.target != c.premise)
            report.push_back({Severity::Error, c.label,
                              "premise embedding does not link anchor and premise"});
        else
            for (auto issue : c.premise_embedding.validate()) {
                issue.subject = c.label + ": " + issue.subject;
                report.push_back(std::move(issue));
            }
        for (const auto& cons : c.consequences) {
            if (cons.embedding.source != c.premise || cons.embedding.target != cons.graph) {
                report.push_back({Severity::Error, c.label,
                                  "consequence embedding does not link premise and "
                                  "consequence"});
                continue;
            }
            for (auto issue : cons.embedding.validate()) {
                issue.subject = c.label + ": " + issue.subject;
                report.push_back(std::move(issue));
            }
        }
    }

    for (const auto& decl : p.sync_decls) {
        for (const auto& link : decl.links) {
            const VariablePart* part =
                link.primary_part == "root" ? &p.root : p.find_part(link.primary_part);
            if (!part) {
                report.push_back({Severity::Error, decl.secondary,
                                  "link names unknown part '" + link.primary_part + "'"});
                continue;
            }
            if (part->name != "root" && p.parent_of(part->name) != &p.root)
                report.push_back({Severity::Error, decl.secondary,
                                  "links may touch only the root or its direct parts"});
            if (!part->graph->has_node(link.primary_node))
                report.push_back({Severity::Error, decl.secondary,
                                  "link names unknown node '" + link.primary_node +
                                      "' in part '" + link.primary_part + "'"});
        }
    }

    return report;
}

ValidationReport validate_sync_set(const SynchronizedPatternSet& set) {
    ValidationReport report;
    for (auto issue : validate_pattern(set.primary)) report.push_back(std::move(issue));
    std::set<std::string> secondary_names;
    std::set<std::string> primary_vars;
    for (const VariablePart* part : set.primary.parts_preorder())
        if (part->name != "root") primary_vars.insert(part->name);

    for (const auto& secondary : set.secondaries) {
        for (auto issue : validate_pattern(secondary)) {
            issue.subject = secondary.name + ": " + issue.subject;
            report.push_back(std::move(issue));
        }
        if (!secondary_names.insert(secondary.name).second)
            report.push_back({Severity::Error, secondary.name,
                              "duplicate companion pattern"});
        for (const VariablePart* part : secondary.parts_preorder()) {
            if (part->name == "root") continue;
            if (primary_vars.count(part->name))
                report.push_back({Severity::Error, part->name,
                                  "part name used by both primary and companion; "
                                  "counts would unify by accident"});
        }
    }

    for (const auto& link : set.links) {
        const Pattern* secondary = nullptr;
        for (const auto& s : set.secondaries)
            if (s.name == link.secondary) secondary = &s;
        if (!secondary) {
            report.push_back({Severity::Error, link.secondary,
                              "link names an absent companion pattern"});
            continue;
        }
        auto check_side = [&](const Pattern& p, const std::string& part_name,
                              const std::string& node_id) {
            const VariablePart* part =
                part_name == "root" ? &p.root : p.find_part(part_name);
            if (!part) {
                report.push_back({Severity::Error, p.name,
                                  "link names unknown part '" + part_name + "'"});
                return;
            }
            if (!part->graph->has_node(node_id))
                report.push_back({Severity::Error, p.name,
                                  "link names unknown node '" + node_id + "' in part '" +
                                      part_name + "'"});
        };
        check_side(set.primary, link.primary_part, link.primary_node);
        check_side(*secondary, link.secondary_part, link.secondary_node);
    }
    return report;
}

EquationSystem joint_equation_system(const SynchronizedPatternSet& set) {
    std::vector<CountRelation> relations;
    std::vector<std::string> vars;
    auto take_pattern = [&](const Pattern& p) {
        EquationSystem sys = p.part_system();
        for (const auto& rel : sys.relations()) relations.push_back(rel);
        for (const auto& v : sys.variables()) vars.push_back(v);
    };
    take_pattern(set.primary);
    for (const auto& s : set.secondaries) take_pattern(s);

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& link : set.links) {
        if (link.primary_part == "root" || link.secondary_part == "root")
            continue; // roots are not replicated; agreement checked elsewhere
        if (!seen.insert({link.primary_part, link.secondary_part}).second) continue;
        relations.push_back(CountRelation{CountTerm::variable(link.primary_part),
                                          RelOp::Eq,
                                          CountTerm::variable(link.secondary_part)});
    }
    return EquationSystem(std::move(relations), std::move(vars));
}

std::vector<RoleEntry> list_roles(const Pattern& p) {
    std::vector<RoleEntry> out;
    for (const VariablePart* part : p.parts_preorder()) {
        std::vector<std::pair<std::string, std::string>> labels(
            part->role_labels.begin(), part->role_labels.end());
        for (const auto& [node, role] : labels)
            out.push_back(RoleEntry{role, part->name, node});
    }
    return out;
}

} // namespace pf
