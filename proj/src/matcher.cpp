#include "pf/matcher.hpp"

#include <algorithm>

namespace pf {

namespace {

/// One part instance chosen during occurrence growth.
struct InstanceState {
    const VariablePart* part;
    std::string path;
    long long replica = 0;
    InstanceRenaming rename;
    std::map<std::string, std::string> node_images; // part-graph id -> model id
    std::map<std::string, std::string> edge_images;
    std::map<std::string, AttributeValue> var_values;
};

struct Candidate {
    GraphMorphism match;
    std::vector<std::string> local_nodes; // model ids introduced by this match
    std::vector<std::string> local_edges;
};

/// Root-seeded growth of an occurrence for one fixed count assignment:
/// replicas of each part are chosen as increasing-index subsets of the
/// candidate matches, keeping all local images jointly disjoint.
class Grower {
public:
    Grower(const Pattern& pattern, GraphPtr model,
           std::shared_ptr<const Expansion> expansion, const ReplicaAssignment& assignment,
           std::function<bool(Occurrence&&)> emit)
        : pattern_(pattern), model_(std::move(model)), expansion_(std::move(expansion)),
          assignment_(assignment), emit_(std::move(emit)) {}

    /// Runs growth from every root match; returns false when the emit
    /// callback asked to stop.
    bool run() {
        auto root_matches =
            find_injective_morphisms(pattern_.root.graph, model_, {}, {});
        for (const auto& root_match : root_matches) {
            InstanceState root;
            root.part = &pattern_.root;
            root.path = "";
            root.replica = 0;
            root.rename = root_renaming(pattern_.root);
            for (const auto& [pid, hid] : root_match.node_map) root.node_images[pid] = hid;
            for (const auto& [pid, hid] : root_match.edge_map) root.edge_images[pid] = hid;
            root.var_values = root_match.var_subst;

            states_.clear();
            used_nodes_.clear();
            used_edges_.clear();
            for (const auto& [pid, hid] : root.node_images) used_nodes_.insert(hid);
            for (const auto& [pid, hid] : root.edge_images) used_edges_.insert(hid);
            states_.push_back(std::move(root));
            if (!step(0)) return false;
        }
        return true;
    }

private:
    bool step(std::size_t state_index) {
        if (state_index == states_.size()) return emit_occurrence();
        return grow_instance(state_index, 0);
    }

    bool grow_instance(std::size_t state_index, std::size_t child_idx) {
        const VariablePart* part = states_[state_index].part;
        if (child_idx == part->children.size()) return step(state_index + 1);
        const VariablePart& child = part->children[child_idx];
        long long need = assignment_.at(child.name);
        std::vector<Candidate> candidates = collect_candidates(state_index, child);
        return choose(state_index, child_idx, child, candidates, need, 0, 0);
    }

    std::vector<Candidate> collect_candidates(std::size_t state_index,
                                              const VariablePart& child) {
        const InstanceState& parent = states_[state_index];
        const GraphMorphism& emb = *child.embedding;

        std::map<std::string, std::string> seed;      // child node -> model node
        std::map<std::string, std::string> req_edges; // child edge -> model edge
        for (const auto& [pn, cn] : emb.node_map)
            seed[cn] = parent.node_images.at(pn);
        for (const auto& [pe, ce] : emb.edge_map)
            req_edges[ce] = parent.edge_images.at(pe);

        MatchOptions opts;
        opts.blocked_nodes = used_nodes_;
        for (const auto& [cn, hid] : seed) opts.blocked_nodes.erase(hid);
        opts.blocked_edges = used_edges_;
        for (const auto& [ce, hid] : req_edges) opts.blocked_edges.erase(hid);

        std::vector<Candidate> out;
        for (auto& m : find_injective_morphisms(child.graph, model_, seed, opts)) {
            bool keep = true;
            for (const auto& [ce, hid] : req_edges)
                if (m.edge_map.at(ce) != hid) {
                    keep = false;
                    break;
                }
            if (!keep) continue;
            Candidate cand;
            for (const auto& [cn, hid] : m.node_map)
                if (!seed.count(cn)) cand.local_nodes.push_back(hid);
            for (const auto& [ce, hid] : m.edge_map)
                if (!req_edges.count(ce)) cand.local_edges.push_back(hid);
            cand.match = std::move(m);
            out.push_back(std::move(cand));
        }
        return out;
    }

    bool choose(std::size_t state_index, std::size_t child_idx, const VariablePart& child,
                const std::vector<Candidate>& candidates, long long need,
                std::size_t from, long long taken) {
        if (taken == need) return grow_instance(state_index, child_idx + 1);
        if (candidates.size() - from < static_cast<std::size_t>(need - taken))
            return true; // not enough candidates left on this path
        for (std::size_t ci = from; ci < candidates.size(); ++ci) {
            const Candidate& cand = candidates[ci];
            bool free = true;
            for (const auto& hid : cand.local_nodes)
                if (used_nodes_.count(hid)) {
                    free = false;
                    break;
                }
            if (free)
                for (const auto& hid : cand.local_edges)
                    if (used_edges_.count(hid)) {
                        free = false;
                        break;
                    }
            if (!free) continue;

            InstanceState inst;
            inst.part = &child;
            inst.replica = taken;
            inst.path = states_[state_index].path + child.name + "#" +
                        std::to_string(taken) + ".";
            inst.rename = child_renaming(child, states_[state_index].rename, inst.path);
            for (const auto& [cn, hid] : cand.match.node_map) inst.node_images[cn] = hid;
            for (const auto& [ce, hid] : cand.match.edge_map) inst.edge_images[ce] = hid;
            inst.var_values = cand.match.var_subst;

            for (const auto& hid : cand.local_nodes) used_nodes_.insert(hid);
            for (const auto& hid : cand.local_edges) used_edges_.insert(hid);
            states_.push_back(std::move(inst));

            bool keep_going =
                choose(state_index, child_idx, child, candidates, need, ci + 1, taken + 1);

            states_.pop_back();
            for (const auto& hid : candidates[ci].local_nodes) used_nodes_.erase(hid);
            for (const auto& hid : candidates[ci].local_edges) used_edges_.erase(hid);
            if (!keep_going) return false;
        }
        return true;
    }

    bool emit_occurrence() {
        Occurrence occ;
        occ.pattern_name = pattern_.name;
        occ.assignment = assignment_;
        occ.expansion = expansion_;
        occ.embedding.source = expansion_->graph;
        occ.embedding.target = model_;
        for (const auto& state : states_) {
            for (const auto& [local, hid] : state.node_images)
                occ.embedding.node_map[state.rename.nodes.at(local)] = hid;
            for (const auto& [local, hid] : state.edge_images)
                occ.embedding.edge_map[state.rename.edges.at(local)] = hid;
            for (const auto& [var, value] : state.var_values)
                occ.embedding.var_subst[state.rename.vars.at(var)] = value;
        }
        for (const auto& [eid, hid] : occ.embedding.node_map) occ.image_nodes.insert(hid);
        for (const auto& [eid, hid] : occ.embedding.edge_map) occ.image_edges.insert(hid);
        for (const auto& [node_id, role] : expansion_->role_map) {
            const Provenance& prov = expansion_->node_provenance.at(node_id);
            occ.role_bindings.push_back(RoleBinding{occ.embedding.node_map.at(node_id),
                                                    role, prov.part, prov.replica});
        }
        std::sort(occ.role_bindings.begin(), occ.role_bindings.end(),
                  [](const RoleBinding& a, const RoleBinding& b) {
                      return std::tie(a.part, a.replica, a.role, a.element) <
                             std::tie(b.part, b.replica, b.role, b.element);
                  });
        return emit_(std::move(occ));
    }

    const Pattern& pattern_;
    GraphPtr model_;
    std::shared_ptr<const Expansion> expansion_;
    const ReplicaAssignment& assignment_;
    std::function<bool(Occurrence&&)> emit_;

    std::vector<InstanceState> states_;
    std::set<std::string> used_nodes_;
    std::set<std::string> used_edges_;
};

using ImageKey = std::pair<std::set<std::string>, std::set<std::string>>;

ImageKey image_key(const Occurrence& occ) {
    return {occ.image_nodes, occ.image_edges};
}

} // namespace

std::vector<Occurrence> find_occurrences_at(GraphPtr model, const Pattern& p,
                                            const ReplicaAssignment& assignment,
                                            std::size_t max_occurrences) {
    auto expansion = std::make_shared<const Expansion>(expand(p, assignment));
    std::vector<Occurrence> out;
    std::set<ImageKey> seen;
    Grower grower(p, model, expansion, assignment, [&](Occurrence&& occ) {
        if (seen.insert(image_key(occ)).second) out.push_back(std::move(occ));
        return max_occurrences == 0 || out.size() < max_occurrences;
    });
    grower.run();
    return out;
}

SatisfyResult satisfies(GraphPtr model, const Pattern& p, const MatchConfig& cfg) {
    SatisfyResult result;
    EquationSystem system = p.part_system();
    std::vector<ReplicaAssignment> in_bound =
        system.enumerate_solutions(cfg.replica_bound);
    std::vector<ReplicaAssignment> minimal = system.minimal_solutions(cfg.replica_bound);

    std::optional<Occurrence> first_dirty;
    std::vector<ConstraintViolation> first_dirty_violations;

    for (const auto& assignment : minimal) {
        auto expansion = std::make_shared<const Expansion>(expand(p, assignment));
        bool found_clean = false;
        std::set<ImageKey> seen;
        Grower grower(p, model, expansion, assignment, [&](Occurrence&& occ) {
            if (!seen.insert(image_key(occ)).second) return true;
            result.satisfied = true;
            if (!cfg.check_constraints) {
                result.witness = std::move(occ);
                result.clean = true;
                found_clean = true;
                return false;
            }
            auto violations = check_constraint_violations(model, occ, p);
            if (violations.empty()) {
                result.witness = std::move(occ);
                result.clean = true;
                found_clean = true;
                return false;
            }
            if (!first_dirty) {
                first_dirty = std::move(occ);
                first_dirty_violations = std::move(violations);
            }
            return true;
        });
        grower.run();
        if (found_clean) return result;
    }

    if (result.satisfied) {
        result.witness = std::move(first_dirty);
        result.violations = std::move(first_dirty_violations);
        return result;
    }

    // Not satisfied within the bound. The verdict is final unless the
    // bound visibly clipped the replication system's solution space.
    if (in_bound.empty()) {
        result.inconclusive_beyond_bound = true;
    } else {
        bool root_exists =
            !find_injective_morphisms(p.root.graph, model, {}, {.limit = 1}).empty();
        if (root_exists) {
            for (const auto& a : minimal) {
                for (const auto& [var, count] : a)
                    if (count == cfg.replica_bound) {
                        result.inconclusive_beyond_bound = true;
                        break;
                    }
                if (result.inconclusive_beyond_bound) break;
            }
        }
    }
    return result;
}

FindResult find_occurrences(GraphPtr model, const Pattern& p, const MatchConfig& cfg) {
    FindResult result;
    EquationSystem system = p.part_system();
    std::set<ImageKey> seen;
    bool stop = false;

    for (const auto& assignment : system.enumerate_solutions(cfg.replica_bound)) {
        if (stop) break;
        auto expansion = std::make_shared<const Expansion>(expand(p, assignment));
        Grower grower(p, model, expansion, assignment, [&](Occurrence&& occ) {
            if (!seen.insert(image_key(occ)).second) return true;
            if (cfg.check_constraints &&
                !check_constraint_violations(model, occ, p).empty())
                return true;
            for (const auto& [var, count] : occ.assignment)
                if (count == cfg.replica_bound) result.inconclusive_beyond_bound = true;
            result.occurrences.push_back(std::move(occ));
            if (cfg.max_occurrences != 0 &&
                result.occurrences.size() >= cfg.max_occurrences) {
                result.truncated = true;
                stop = true;
                return false;
            }
            return true;
        });
        grower.run();
    }

    if (cfg.mode == MatchMode::FindMaximal) {
        auto contained = [](const Occurrence& a, const Occurrence& b) {
            // a strictly inside b?
            if (a.image_nodes.size() > b.image_nodes.size()) return false;
            if (a.image_edges.size() > b.image_edges.size()) return false;
            if (!std::includes(b.image_nodes.begin(), b.image_nodes.end(),
                               a.image_nodes.begin(), a.image_nodes.end()))
                return false;
            if (!std::includes(b.image_edges.begin(), b.image_edges.end(),
                               a.image_edges.begin(), a.image_edges.end()))
                return false;
            return a.image_nodes.size() < b.image_nodes.size() ||
                   a.image_edges.size() < b.image_edges.size();
        };
        std::vector<Occurrence> maximal;
        for (auto& occ : result.occurrences) {
            bool dominated = false;
            for (const auto& other : result.occurrences)
                if (contained(occ, other)) {
                    dominated = true;
                    break;
                }
            if (!dominated) maximal.push_back(std::move(occ));
        }
        result.occurrences = std::move(maximal);
    }
    return result;
}

std::vector<ConstraintViolation> check_constraint_violations(GraphPtr model,
                                                             const Occurrence& occ,
                                                             const Pattern& p) {
    std::vector<ConstraintViolation> out;
    for (const auto& c : p.constraints) {
        const VariablePart* anchor = c.anchor == "root" ? &p.root : p.find_part(c.anchor);
        if (!anchor) continue; // validation reports this; nothing to check here

        std::vector<std::pair<std::string, long long>> instances;
        if (c.anchor == "root") {
            instances.emplace_back("", 0);
        } else {
            long long n = occ.assignment.at(c.anchor);
            for (long long i = 0; i < n; ++i)
                instances.emplace_back(c.anchor + "#" + std::to_string(i) + ".", i);
        }

        InstanceRenaming root_names = root_renaming(p.root);
        for (const auto& [path, replica] : instances) {
            InstanceRenaming names =
                path.empty() ? root_names : child_renaming(*anchor, root_names, path);

            std::map<std::string, std::string> seed;
            for (const auto& [av, pv] : c.premise_embedding.node_map)
                seed[pv] = occ.embedding.node_map.at(names.nodes.at(av));

            for (const auto& ext : find_injective_morphisms(c.premise, model, seed)) {
                std::vector<std::string> witness;
                for (const auto& [pid, hid] : ext.node_map)
                    if (!seed.count(pid)) witness.push_back(hid);

                if (c.is_nac()) {
                    out.push_back(ConstraintViolation{
                        p.name, c.label, c.anchor, replica,
                        "forbidden context present", witness});
                    continue;
                }
                bool satisfied_by_some = false;
                for (const auto& cons : c.consequences) {
                    std::map<std::string, std::string> seed2;
                    for (const auto& [q, w] : cons.embedding.node_map)
                        seed2[w] = ext.node_map.at(q);
                    if (!find_injective_morphisms(cons.graph, model, seed2, {.limit = 1})
                             .empty()) {
                        satisfied_by_some = true;
                        break;
                    }
                }
                if (!satisfied_by_some)
                    out.push_back(ConstraintViolation{
                        p.name, c.label, c.anchor, replica,
                        "required consequence missing", witness});
            }
        }
    }
    return out;
}

RootCardinalityReport check_root_cardinality(GraphPtr model, const Pattern& p) {
    RootCardinalityReport report;
    std::set<ImageKey> images;
    for (const auto& m : find_injective_morphisms(p.root.graph, model)) {
        std::set<std::string> nodes, edges;
        for (const auto& [pid, hid] : m.node_map) nodes.insert(hid);
        for (const auto& [pid, hid] : m.edge_map) edges.insert(hid);
        images.insert({std::move(nodes), std::move(edges)});
    }
    report.count = static_cast<long long>(images.size());
    ReplicaAssignment a{{p.name, report.count}};
    for (const auto& rel : p.root_relations()) {
        bool holds = evaluate(rel, a);
        report.relation_results.emplace_back(rel.display(), holds);
        if (!holds) report.ok = false;
    }
    return report;
}

namespace {

/// Values of the variables shared by a linked node pair, read off the
/// model: one signature per replica of the linked part.
std::vector<std::map<std::string, std::string>> link_signatures(
    const Pattern& p, const Occurrence& occ, const std::string& part_name,
    const std::string& node_id, const std::set<std::string>& shared_vars) {
    const VariablePart* part = part_name == "root" ? &p.root : p.find_part(part_name);
    if (!part) throw PfError("link names unknown part '" + part_name + "'");

    std::vector<std::pair<std::string, long long>> instances;
    if (part_name == "root") {
        instances.emplace_back("", 0);
    } else {
        long long n = occ.assignment.at(part_name);
        for (long long i = 0; i < n; ++i)
            instances.emplace_back(part_name + "#" + std::to_string(i) + ".", i);
    }

    const TypedGraph& model = *occ.embedding.target;
    InstanceRenaming root_names = root_renaming(p.root);
    std::vector<std::map<std::string, std::string>> out;
    for (const auto& [path, replica] : instances) {
        InstanceRenaming names =
            path.empty() ? root_names : child_renaming(*part, root_names, path);
        const std::string model_id = occ.embedding.node_map.at(names.nodes.at(node_id));
        const GraphNode& pattern_node = part->graph->node(node_id);
        const GraphNode& model_node = model.node(model_id);
        std::map<std::string, std::string> sig;
        for (const auto& [attr, value] : pattern_node.attrs)
            if (value.is_var() && shared_vars.count(value.text))
                sig[value.text] = model_node.attrs.at(attr).display();
        out.push_back(std::move(sig));
    }
    return out;
}

std::set<std::string> node_slot_vars(const Pattern& p, const std::string& part_name,
                                     const std::string& node_id) {
    const VariablePart* part = part_name == "root" ? &p.root : p.find_part(part_name);
    if (!part) throw PfError("link names unknown part '" + part_name + "'");
    std::set<std::string> vars;
    for (const auto& [attr, value] : part->graph->node(node_id).attrs)
        if (value.is_var()) vars.insert(value.text);
    return vars;
}

} // namespace

SyncReport check_sync(GraphPtr primary_model,
                      const std::map<std::string, GraphPtr>& secondary_models,
                      const SynchronizedPatternSet& set, const MatchConfig& cfg) {
    SyncReport report;
    MatchConfig eff = cfg;
    if (eff.max_occurrences == 0) eff.max_occurrences = 64;
    eff.mode = MatchMode::FindAll;

    FindResult primary = find_occurrences(primary_model, set.primary, eff);
    report.primary_satisfied = !primary.occurrences.empty();
    if (!report.primary_satisfied)
        report.notes.push_back("pattern '" + set.primary.name +
                               "' not found in its model");

    std::vector<const Pattern*> secondaries;
    std::vector<FindResult> secondary_results;
    for (const auto& s : set.secondaries) {
        auto it = secondary_models.find(s.name);
        if (it == secondary_models.end()) {
            report.notes.push_back("no model provided for companion '" + s.name + "'");
            report.secondary_satisfied[s.name] = false;
            continue;
        }
        FindResult found = find_occurrences(it->second, s, eff);
        report.secondary_satisfied[s.name] = !found.occurrences.empty();
        if (found.occurrences.empty())
            report.notes.push_back("companion '" + s.name + "' not found in its model");
        secondaries.push_back(&s);
        secondary_results.push_back(std::move(found));
    }
    if (!report.primary_satisfied) return report;
    for (const auto& [name, ok] : report.secondary_satisfied)
        if (!ok) return report;
    if (secondaries.size() != set.secondaries.size()) return report;

    EquationSystem joint = joint_equation_system(set);

    bool some_joint_solution = false;
    std::string link_failure;

    // Walk every combination of one occurrence per pattern.
    std::vector<std::size_t> pick(secondaries.size(), 0);
    for (const auto& pocc : primary.occurrences) {
        std::fill(pick.begin(), pick.end(), 0);
        while (true) {
            ReplicaAssignment jointa = pocc.assignment;
            for (std::size_t i = 0; i < secondaries.size(); ++i)
                for (const auto& [var, count] :
                     secondary_results[i].occurrences[pick[i]].assignment)
                    jointa[var] = count;

            if (joint.satisfied_by(jointa)) {
                some_joint_solution = true;
                bool links_ok = true;
                for (const auto& link : set.links) {
                    std::size_t idx = 0;
                    for (; idx < secondaries.size(); ++idx)
                        if (secondaries[idx]->name == link.secondary) break;
                    if (idx == secondaries.size()) continue; // validated earlier
                    const Pattern& s = *secondaries[idx];
                    const Occurrence& socc = secondary_results[idx].occurrences[pick[idx]];

                    std::set<std::string> shared;
                    {
                        auto pv = node_slot_vars(set.primary, link.primary_part,
                                                 link.primary_node);
                        auto sv = node_slot_vars(s, link.secondary_part,
                                                 link.secondary_node);
                        for (const auto& v : pv)
                            if (sv.count(v)) shared.insert(v);
                    }
                    auto psigs = link_signatures(set.primary, pocc, link.primary_part,
                                                 link.primary_node, shared);
                    auto ssigs = link_signatures(s, socc, link.secondary_part,
                                                 link.secondary_node, shared);

                    bool agree;
                    if (link.primary_part == "root" && link.secondary_part == "root") {
                        agree = psigs == ssigs;
                    } else if (link.primary_part == "root") {
                        agree = std::all_of(ssigs.begin(), ssigs.end(),
                                            [&](const auto& s2) { return s2 == psigs[0]; });
                    } else if (link.secondary_part == "root") {
                        agree = std::all_of(psigs.begin(), psigs.end(),
                                            [&](const auto& s2) { return s2 == ssigs[0]; });
                    } else {
                        std::sort(psigs.begin(), psigs.end());
                        std::sort(ssigs.begin(), ssigs.end());
                        agree = psigs == ssigs;
                    }
                    if (!agree) {
                        links_ok = false;
                        if (link_failure.empty())
                            link_failure = "linked elements disagree: " +
                                           link.primary_part + "." + link.primary_node +
                                           " vs " + link.secondary + "'s " +
                                           link.secondary_part + "." +
                                           link.secondary_node;
                        break;
                    }
                }
                if (links_ok) {
                    report.ok = true;
                    report.joint_assignment = jointa;
                    return report;
                }
            }

            // Next combination; an empty pick vector means one round.
            std::size_t level = 0;
            while (level < pick.size()) {
                if (++pick[level] < secondary_results[level].occurrences.size()) break;
                pick[level] = 0;
                ++level;
            }
            if (level == pick.size()) break;
        }
    }

    if (!some_joint_solution)
        report.notes.push_back(
            "no combination of occurrences satisfies the joint count equations");
    else if (!link_failure.empty())
        report.notes.push_back(link_failure);
    return report;
}

} // namespace pf
