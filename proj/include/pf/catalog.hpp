#ifndef PF_CATALOG_HPP
#define PF_CATALOG_HPP

#include <string>
#include <vector>

#include "pf/pattern.hpp"

namespace pf {

/// One shipped pattern definition.
struct CatalogEntry {
    std::string name;  // DSL identifier, e.g. "AbstractFactory"
    std::string title; // catalog heading, e.g. "Abstract Factory"
    std::string file;
    Pattern pattern;
    ValidationReport issues; // validate_pattern findings

    bool has_collaboration() const { return !pattern.sync_decls.empty(); }
};

class Catalog {
public:
    /// Parses every *.pat file of the directory in filename order.
    /// A file that fails to parse raises ParseError; validation issues
    /// are recorded on the entry instead of failing the load.
    static Catalog load(const std::string& dir);

    const std::vector<CatalogEntry>& entries() const { return entries_; }

    const CatalogEntry* find(const std::string& name) const;

    std::vector<std::string> names() const;

    /// Resolves the sync declarations of the named primary against the
    /// catalog into a synchronized set; missing names raise PfError.
    SynchronizedPatternSet sync_set_for(const std::string& primary) const;

private:
    std::vector<CatalogEntry> entries_;
};

/// PATTERNFORGE_CATALOG environment variable when set, else "catalog".
std::string default_catalog_dir();

/// Catalog heading for a pattern identifier ("AbstractFactory" ->
/// "Abstract Factory"); names without a known heading pass through.
std::string catalog_title(const std::string& name);

} // namespace pf

#endif // PF_CATALOG_HPP
