#include "pf/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "pf/dsl.hpp"

namespace pf {

std::string catalog_title(const std::string& name) {
    if (name == "AbstractFactory") return "Abstract Factory";
    if (name == "ChainOfResponsibility") return "Chain of Responsibility";
    if (name == "FactoryMethod") return "Factory Method";
    if (name == "TemplateMethod") return "Template Method";
    return name;
}

std::string default_catalog_dir() {
    if (const char* env = std::getenv("PATTERNFORGE_CATALOG"); env && *env)
        return env;
    return "catalog";
}

Catalog Catalog::load(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec))
        throw PfError("catalog directory '" + dir + "' does not exist");
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pat")
            files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    Catalog catalog;
    for (const auto& file : files) {
        CatalogEntry entry;
        entry.file = file;
        entry.pattern = parse_pattern_file(file);
        entry.name = entry.pattern.name;
        entry.title = catalog_title(entry.name);
        entry.issues = validate_pattern(entry.pattern);
        if (catalog.find(entry.name))
            throw PfError("catalog defines pattern '" + entry.name + "' twice");
        catalog.entries_.push_back(std::move(entry));
    }
    return catalog;
}

const CatalogEntry* Catalog::find(const std::string& name) const {
    for (const auto& entry : entries_)
        if (entry.name == name) return &entry;
    return nullptr;
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& entry : entries_) out.push_back(entry.name);
    return out;
}

SynchronizedPatternSet Catalog::sync_set_for(const std::string& primary) const {
    const CatalogEntry* entry = find(primary);
    if (!entry) throw PfError("pattern '" + primary + "' is not in the catalog");
    SynchronizedPatternSet set;
    set.primary = entry->pattern;
    for (const auto& decl : entry->pattern.sync_decls) {
        const CatalogEntry* companion = find(decl.secondary);
        if (!companion)
            throw PfError("companion pattern '" + decl.secondary +
                          "' is not in the catalog");
        set.secondaries.push_back(companion->pattern);
        for (const auto& link : decl.links)
            set.links.push_back({decl.secondary, link.primary_part, link.primary_node,
                                 link.secondary_part, link.secondary_node});
    }
    return set;
}

} // namespace pf
