#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pf/catalog.hpp"
#include "pf/dsl.hpp"
#include "pf/matcher.hpp"
#include "pf/serialize.hpp"

namespace {

using namespace pf;

struct GlobalOpts {
    long long bound = 8;
    std::string catalog_dir;
    std::string format = "table";
    int jobs = 1;

    bool json() const { return format == "json"; }
    std::string catalog_path() const {
        return catalog_dir.empty() ? default_catalog_dir() : catalog_dir;
    }
};

/// Usage or input problem; handled centrally with exit code 2.
struct InputError {
    std::string message;
};

void print_json(const Json& doc) { std::cout << doc.dump() << "\n"; }

void report_issues(const std::string& subject, const ValidationReport& report) {
    for (const auto& issue : report)
        std::cerr << subject << ": "
                  << (issue.severity == Severity::Error ? "error" : "warning") << ": "
                  << issue.subject << ": " << issue.message << "\n";
}

GraphPtr load_model(const std::string& path) {
    GraphPtr g = parse_model_file(path);
    ValidationReport report = validate_graph(*g);
    if (has_errors(report)) {
        report_issues(path, report);
        throw InputError{"model '" + path + "' is not valid"};
    }
    return g;
}

/// --pattern accepts a catalog name or a .pat file path.
Pattern load_pattern(const std::string& ref, const GlobalOpts& global,
                     const Catalog** catalog_out, std::optional<Catalog>& storage) {
    auto ensure_catalog = [&]() -> const Catalog& {
        if (!storage) storage = Catalog::load(global.catalog_path());
        if (catalog_out) *catalog_out = &*storage;
        return *storage;
    };
    if (std::ifstream probe(ref); probe.good()) {
        Pattern p = parse_pattern_file(ref);
        ValidationReport report = validate_pattern(p);
        if (has_errors(report)) {
            report_issues(ref, report);
            throw InputError{"pattern '" + ref + "' is not valid"};
        }
        return p;
    }
    const Catalog& catalog = ensure_catalog();
    const CatalogEntry* entry = catalog.find(ref);
    if (!entry)
        throw InputError{"'" + ref +
                         "' is neither a readable file nor a catalog pattern"};
    if (has_errors(entry->issues)) {
        report_issues(entry->file, entry->issues);
        throw InputError{"catalog pattern '" + ref + "' is not valid"};
    }
    return entry->pattern;
}

std::string assignment_text(const ReplicaAssignment& a) {
    std::string out;
    for (const auto& [var, count] : a) {
        if (!out.empty()) out += " ";
        out += var + "=" + std::to_string(count);
    }
    return out.empty() ? "(none)" : out;
}

void print_violation(const ConstraintViolation& v) {
    std::cout << "    violation [" << v.label << "] at " << v.anchor_part << " #"
              << v.anchor_replica << ": " << v.message;
    if (!v.witness_nodes.empty()) {
        std::cout << " (";
        for (std::size_t i = 0; i < v.witness_nodes.size(); ++i) {
            if (i) std::cout << ", ";
            std::cout << v.witness_nodes[i];
        }
        std::cout << ")";
    }
    std::cout << "\n";
}

// ---------------------------------------------------------------------
// check
// ---------------------------------------------------------------------

int run_check_sync(const std::string& model_path, const std::string& collab_path,
                   const Pattern& pattern, const Catalog* catalog,
                   std::optional<Catalog>& storage, const GlobalOpts& global) {
    if (pattern.sync_decls.empty())
        throw InputError{"pattern '" + pattern.name + "' declares no companions"};
    if (!storage) storage = Catalog::load(global.catalog_path());
    catalog = &*storage;
    SynchronizedPatternSet set;
    set.primary = pattern;
    for (const auto& decl : pattern.sync_decls) {
        const CatalogEntry* companion = catalog->find(decl.secondary);
        if (!companion)
            throw InputError{"companion pattern '" + decl.secondary +
                             "' is not in the catalog"};
        set.secondaries.push_back(companion->pattern);
        for (const auto& link : decl.links)
            set.links.push_back({decl.secondary, link.primary_part, link.primary_node,
                                 link.secondary_part, link.secondary_node});
    }
    ValidationReport report = validate_sync_set(set);
    if (has_errors(report)) {
        report_issues(pattern.name, report);
        throw InputError{"synchronized set is not valid"};
    }
    GraphPtr model = load_model(model_path);
    GraphPtr collab = load_model(collab_path);
    std::map<std::string, GraphPtr> secondary_models;
    for (const auto& secondary : set.secondaries)
        secondary_models[secondary.name] = collab;
    MatchConfig cfg;
    cfg.replica_bound = global.bound;
    SyncReport sync = check_sync(model, secondary_models, set, cfg);
    if (global.json()) {
        Json doc = Json::object();
        doc["model"] = model_path;
        doc["collaboration"] = collab_path;
        doc["pattern"] = pattern.name;
        doc["ok"] = sync.ok;
        doc["primary_satisfied"] = sync.primary_satisfied;
        Json secondaries = Json::object();
        for (const auto& [name, satisfied] : sync.secondary_satisfied)
            secondaries[name] = satisfied;
        doc["secondary_satisfied"] = std::move(secondaries);
        doc["joint_assignment"] = sync.joint_assignment
                                      ? assignment_to_json(*sync.joint_assignment)
                                      : Json();
        doc["notes"] = sync.notes;
        print_json(doc);
    } else {
        if (sync.ok) {
            std::cout << model_path << ": synchronized occurrence of " << pattern.name
                      << " found\n";
            std::cout << "    joint assignment: " << assignment_text(*sync.joint_assignment)
                      << "\n";
        } else {
            std::cout << model_path << ": no synchronized occurrence of " << pattern.name
                      << "\n";
        }
        for (const auto& note : sync.notes) std::cout << "    note: " << note << "\n";
    }
    return sync.ok ? 0 : 1;
}

int run_check(const std::string& model_path, const std::string& pattern_ref,
              const std::string& collab_path, const GlobalOpts& global) {
    std::optional<Catalog> storage;
    const Catalog* catalog = nullptr;
    Pattern pattern = load_pattern(pattern_ref, global, &catalog, storage);
    if (!collab_path.empty())
        return run_check_sync(model_path, collab_path, pattern, catalog, storage, global);
    GraphPtr model = load_model(model_path);
    MatchConfig cfg;
    cfg.replica_bound = global.bound;
    cfg.mode = MatchMode::Satisfy;
    SatisfyResult result = satisfies(model, pattern, cfg);
    bool ok = result.satisfied && result.clean;
    if (global.json()) {
        Json doc = Json::object();
        doc["model"] = model_path;
        doc["pattern"] = pattern.name;
        doc["satisfied"] = result.satisfied;
        doc["clean"] = result.clean;
        doc["inconclusive_beyond_bound"] = result.inconclusive_beyond_bound;
        doc["witness"] = result.witness ? occurrence_to_json(*result.witness) : Json();
        Json violations = Json::array();
        for (const auto& v : result.violations) violations.push_back(violation_to_json(v));
        doc["violations"] = std::move(violations);
        print_json(doc);
    } else {
        if (ok) {
            std::cout << model_path << ": satisfies " << pattern.name << "\n";
            std::cout << "    assignment: " << assignment_text(result.witness->assignment)
                      << "\n";
            for (const auto& b : result.witness->role_bindings)
                std::cout << "    " << b.element << "  role " << b.role << "  ("
                          << (b.part == "root"
                                  ? std::string("root")
                                  : b.part + " #" + std::to_string(b.replica))
                          << ")\n";
        } else if (result.satisfied) {
            std::cout << model_path << ": structure of " << pattern.name
                      << " present but constraints fail\n";
            for (const auto& v : result.violations) print_violation(v);
        } else {
            std::cout << model_path << ": does not satisfy " << pattern.name << "\n";
        }
        if (result.inconclusive_beyond_bound)
            std::cout << "    inconclusive beyond bound " << global.bound << "\n";
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------
// find
// ---------------------------------------------------------------------

int run_find(const std::string& model_path, const std::string& pattern_ref, bool maximal,
             const GlobalOpts& global) {
    std::optional<Catalog> storage;
    Pattern pattern = load_pattern(pattern_ref, global, nullptr, storage);
    GraphPtr model = load_model(model_path);
    MatchConfig cfg;
    cfg.replica_bound = global.bound;
    cfg.mode = maximal ? MatchMode::FindMaximal : MatchMode::FindAll;
    FindResult result = find_occurrences(model, pattern, cfg);
    if (global.json()) {
        Json doc = Json::object();
        doc["model"] = model_path;
        doc["pattern"] = pattern.name;
        doc["occurrences"] = occurrences_document(result.occurrences)["occurrences"];
        doc["truncated"] = result.truncated;
        doc["inconclusive_beyond_bound"] = result.inconclusive_beyond_bound;
        print_json(doc);
    } else {
        std::cout << occurrences_table(result.occurrences);
        if (result.truncated) std::cout << "list truncated\n";
        if (result.inconclusive_beyond_bound)
            std::cout << "inconclusive beyond bound " << global.bound << "\n";
    }
    return result.occurrences.empty() ? 1 : 0;
}

// ---------------------------------------------------------------------
// annotate
// ---------------------------------------------------------------------

int run_annotate(const std::string& model_path, const std::vector<std::string>& selection,
                 const std::string& out_path, const GlobalOpts& global) {
    std::optional<Catalog> storage = Catalog::load(global.catalog_path());
    const Catalog& catalog = *storage;
    std::vector<const CatalogEntry*> chosen;
    bool all = selection.size() == 1 && selection[0] == "all";
    if (all) {
        for (const auto& entry : catalog.entries())
            if (entry.pattern.meta->tag() == "classdiagram") chosen.push_back(&entry);
    } else {
        for (const auto& name : selection) {
            const CatalogEntry* entry = catalog.find(name);
            if (!entry)
                throw InputError{"'" + name + "' is not a catalog pattern"};
            chosen.push_back(entry);
        }
    }
    GraphPtr model = load_model(model_path);
    for (const CatalogEntry* entry : chosen)
        if (entry->pattern.meta->tag() != model->meta()->tag())
            throw InputError{"pattern '" + entry->name + "' is for " +
                             entry->pattern.meta->tag() + " models"};
    MatchConfig cfg;
    cfg.replica_bound = global.bound;
    cfg.mode = MatchMode::FindAll;

    std::vector<std::vector<Occurrence>> found(chosen.size());
    auto worker = [&](std::size_t i) {
        found[i] = find_occurrences(model, chosen[i]->pattern, cfg).occurrences;
    };
    if (global.jobs <= 1) {
        for (std::size_t i = 0; i < chosen.size(); ++i) worker(i);
    } else {
        std::size_t next = 0;
        while (next < chosen.size()) {
            std::vector<std::future<void>> wave;
            for (int j = 0; j < global.jobs && next < chosen.size(); ++j, ++next)
                wave.push_back(std::async(std::launch::async, worker, next));
            for (auto& f : wave) f.get();
        }
    }
    std::vector<Occurrence> merged;
    for (auto& list : found)
        for (auto& occ : list) merged.push_back(std::move(occ));

    Json doc = annotation_document(model_path, merged);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw InputError{"cannot write '" + out_path + "'"};
        out << doc.dump() << "\n";
    }
    if (global.json())
        print_json(doc);
    else
        std::cout << occurrences_table(merged);
    return 0;
}

// ---------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------

ReplicaAssignment parse_counts(const std::string& text, const Pattern& p) {
    ReplicaAssignment a;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InputError{"--counts items must look like part=count"};
        std::string name = item.substr(0, eq);
        std::string count = item.substr(eq + 1);
        if (!p.find_part(name))
            throw InputError{"'" + name + "' is not a part of the pattern"};
        try {
            std::size_t used = 0;
            long long v = std::stoll(count, &used);
            if (used != count.size() || v < 0) throw std::invalid_argument(count);
            a[name] = v;
        } catch (const std::exception&) {
            throw InputError{"'" + count + "' is not a count"};
        }
    }
    return a;
}

int run_expand(const std::string& pattern_ref, const std::string& counts,
               const std::string& provenance_path, const GlobalOpts& global) {
    std::optional<Catalog> storage;
    Pattern pattern = load_pattern(pattern_ref, global, nullptr, storage);
    ReplicaAssignment assignment = parse_counts(counts, pattern);
    for (const VariablePart* part : pattern.parts_preorder())
        if (part->name != "root" && !assignment.count(part->name))
            throw InputError{"--counts must set part '" + part->name + "'"};
    if (!pattern.part_system().satisfied_by(assignment))
        std::cerr << "warning: counts do not satisfy the pattern equations\n";
    Expansion e = expand(pattern, assignment);
    Json prov = provenance_json(e);
    if (!provenance_path.empty()) {
        std::ofstream out(provenance_path, std::ios::binary);
        if (!out) throw InputError{"cannot write '" + provenance_path + "'"};
        out << prov.dump() << "\n";
    }
    if (global.json()) {
        Json doc = Json::object();
        doc["pattern"] = pattern.name;
        doc["assignment"] = assignment_to_json(e.assignment);
        doc["model"] = write_model(*e.graph);
        doc["provenance"] = std::move(prov);
        print_json(doc);
    } else {
        std::cout << write_model(*e.graph);
    }
    return 0;
}

// ---------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------

int run_solve(const std::string& pattern_ref, const GlobalOpts& global) {
    std::optional<Catalog> storage;
    Pattern pattern = load_pattern(pattern_ref, global, nullptr, storage);
    EquationSystem system = pattern.part_system();
    auto solutions = system.enumerate_solutions(global.bound);
    auto minimal = system.minimal_solutions(global.bound);
    if (global.json()) {
        Json doc = Json::object();
        doc["pattern"] = pattern.name;
        doc["bound"] = global.bound;
        doc["variables"] = system.variables();
        Json sol = Json::array();
        for (const auto& a : solutions) sol.push_back(assignment_to_json(a));
        doc["solutions"] = std::move(sol);
        Json min = Json::array();
        for (const auto& a : minimal) min.push_back(assignment_to_json(a));
        doc["minimal"] = std::move(min);
        print_json(doc);
    } else {
        std::cout << pattern.name << ": " << solutions.size() << " solution"
                  << (solutions.size() == 1 ? "" : "s") << " within bound "
                  << global.bound << "\n";
        for (const auto& a : solutions) std::cout << "    " << assignment_text(a) << "\n";
        std::cout << "minimal:\n";
        for (const auto& a : minimal) std::cout << "    " << assignment_text(a) << "\n";
    }
    return solutions.empty() ? 1 : 0;
}

// ---------------------------------------------------------------------
// lint
// ---------------------------------------------------------------------

int run_lint(const std::string& path, const GlobalOpts& global) {
    Pattern pattern = parse_pattern_file(path);
    ValidationReport report = validate_pattern(pattern);
    bool feasible = false;
    if (!has_errors(report))
        feasible = !pattern.part_system().enumerate_solutions(global.bound, 1).empty();
    if (global.json()) {
        Json doc = Json::object();
        doc["file"] = path;
        doc["pattern"] = pattern.name;
        doc["valid"] = !has_errors(report);
        doc["feasible"] = feasible;
        Json issues = Json::array();
        for (const auto& issue : report) {
            Json entry = Json::object();
            entry["severity"] = issue.severity == Severity::Error ? "error" : "warning";
            entry["subject"] = issue.subject;
            entry["message"] = issue.message;
            issues.push_back(std::move(entry));
        }
        doc["issues"] = std::move(issues);
        print_json(doc);
    } else {
        report_issues(path, report);
        if (!has_errors(report))
            std::cout << path << ": valid, "
                      << (feasible ? "equations feasible"
                                   : "equations have no solution within bound " +
                                         std::to_string(global.bound))
                      << "\n";
    }
    if (has_errors(report)) return 1;
    return feasible ? 0 : 1;
}

// ---------------------------------------------------------------------
// catalog list
// ---------------------------------------------------------------------

int run_catalog_list(const GlobalOpts& global) {
    Catalog catalog = Catalog::load(global.catalog_path());
    if (global.json()) {
        Json doc = Json::object();
        doc["catalog"] = global.catalog_path();
        Json patterns = Json::array();
        for (const auto& entry : catalog.entries()) {
            Json e = Json::object();
            e["name"] = entry.name;
            e["title"] = entry.title;
            e["file"] = entry.file;
            e["diagram"] = entry.pattern.meta->tag();
            e["has_collaboration"] = entry.has_collaboration();
            e["equations"] = equations_to_string(entry.pattern.equations);
            e["intent"] = entry.pattern.intent;
            patterns.push_back(std::move(e));
        }
        doc["patterns"] = std::move(patterns);
        print_json(doc);
    } else {
        for (const auto& entry : catalog.entries()) {
            std::cout << entry.name;
            if (entry.title != entry.name) std::cout << " (" << entry.title << ")";
            if (entry.pattern.meta->tag() != "classdiagram")
                std::cout << " [" << entry.pattern.meta->tag() << "]";
            if (entry.has_collaboration()) std::cout << " [sync]";
            std::cout << "\n";
            if (!entry.pattern.equations.empty())
                std::cout << "    equations: "
                          << equations_to_string(entry.pattern.equations) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern formalization engine"};
    app.require_subcommand(1);
    GlobalOpts global;
    app.add_option("--bound", global.bound, "replica/solver bound")
        ->default_val(8)
        ->check(CLI::PositiveNumber);
    app.add_option("--catalog", global.catalog_dir, "catalog directory");
    app.add_option("--format", global.format, "output format")
        ->default_val("table")
        ->check(CLI::IsMember({"table", "json"}));
    app.add_option("--jobs", global.jobs, "worker threads for catalog-wide runs")
        ->default_val(1)
        ->check(CLI::PositiveNumber);

    std::string model_path, pattern_ref, collab_path, out_path, counts, provenance_path;
    std::vector<std::string> selection;
    bool maximal = false;

    CLI::App* check = app.add_subcommand("check", "decide whether a model satisfies a pattern");
    check->fallthrough();
    check->add_option("model", model_path, "model file")->required();
    check->add_option("--pattern", pattern_ref, "pattern name or .pat file")->required();
    check->add_option("--with-collab", collab_path,
                      "collaboration model checked against the pattern's companions");

    CLI::App* find = app.add_subcommand("find", "list pattern occurrences in a model");
    find->fallthrough();
    find->add_option("model", model_path, "model file")->required();
    find->add_option("--pattern", pattern_ref, "pattern name or .pat file")->required();
    find->add_flag("--maximal", maximal, "report only occurrences not contained in larger ones");

    CLI::App* annotate = app.add_subcommand("annotate", "annotate a model with pattern roles");
    annotate->fallthrough();
    annotate->add_option("model", model_path, "model file")->required();
    annotate->add_option("--patterns", selection, "'all' or catalog pattern names")
        ->required()
        ->delimiter(',');
    annotate->add_option("-o,--output", out_path, "annotation document file (.ann.json)");

    CLI::App* expand_cmd = app.add_subcommand("expand", "glue the expansion for fixed counts");
    expand_cmd->fallthrough();
    expand_cmd->add_option("--pattern", pattern_ref, "pattern name or .pat file")->required();
    expand_cmd->add_option("--counts", counts, "comma-separated part=count list");
    expand_cmd->add_option("--provenance", provenance_path, "write provenance sidecar JSON");

    CLI::App* solve = app.add_subcommand("solve", "list count solutions of a pattern");
    solve->fallthrough();
    solve->add_option("--pattern", pattern_ref, "pattern name or .pat file")->required();

    CLI::App* lint = app.add_subcommand("lint", "validate a pattern file");
    lint->fallthrough();
    lint->add_option("file", model_path, "pattern file")->required();

    CLI::App* catalog_cmd = app.add_subcommand("catalog", "catalog inspection");
    catalog_cmd->fallthrough();
    catalog_cmd->require_subcommand(1);
    catalog_cmd->add_subcommand("list", "list the shipped patterns")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << app.help();
        return 2;
    }

    try {
        if (check->parsed()) return run_check(model_path, pattern_ref, collab_path, global);
        if (find->parsed()) return run_find(model_path, pattern_ref, maximal, global);
        if (annotate->parsed()) return run_annotate(model_path, selection, out_path, global);
        if (expand_cmd->parsed())
            return run_expand(pattern_ref, counts, provenance_path, global);
        if (solve->parsed()) return run_solve(pattern_ref, global);
        if (lint->parsed()) return run_lint(model_path, global);
        if (catalog_cmd->parsed()) return run_catalog_list(global);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.message << "\n";
        return 2;
    } catch (const PfError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "error: no subcommand\n";
    return 2;
}
