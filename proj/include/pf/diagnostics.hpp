#ifndef PF_DIAGNOSTICS_HPP
#define PF_DIAGNOSTICS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pf {

/// Position of a construct inside an input file. Lines and columns are
/// 1-based; line 0 means "no location" (programmatically built objects).
struct SourceSpan {
    std::string file;
    int line = 0;
    int column = 0;
    int length = 0;

    bool known() const { return line > 0; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
};

std::string format_diagnostic(const Diagnostic& d);

/// A validation finding. `subject` names the offending element (node id,
/// part name, relation text, ...) so reports stay actionable without spans.
struct Issue {
    Severity severity = Severity::Error;
    std::string subject;
    std::string message;
};

using ValidationReport = std::vector<Issue>;

inline bool has_errors(const ValidationReport& report) {
    for (const auto& issue : report)
        if (issue.severity == Severity::Error) return true;
    return false;
}

class PfError : public std::runtime_error {
public:
    explicit PfError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax or semantic failure while reading a document. Always carries a
/// span inside the offending file.
class ParseError : public PfError {
public:
    explicit ParseError(Diagnostic d)
        : PfError(format_diagnostic(d)), diagnostic_(std::move(d)) {}

    const Diagnostic& diagnostic() const { return diagnostic_; }

private:
    Diagnostic diagnostic_;
};

} // namespace pf

#endif // PF_DIAGNOSTICS_HPP
