#include "pf/diagnostics.hpp"

#include <sstream>

namespace pf {

std::string format_diagnostic(const Diagnostic& d) {
    std::ostringstream out;
    if (!d.span.file.empty()) {
        out << d.span.file;
        if (d.span.known()) out << ":" << d.span.line << ":" << d.span.column;
        out << ": ";
    } else if (d.span.known()) {
        out << d.span.line << ":" << d.span.column << ": ";
    }
    out << (d.severity == Severity::Error ? "error: " : "warning: ");
    out << d.message;
    return out.str();
}

} // namespace pf
