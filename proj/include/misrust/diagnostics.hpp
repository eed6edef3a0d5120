#pragma once

#include "misrust/span.hpp"

#include <optional>
#include <string>

namespace misrust {

enum class DiagContext { Safe, Unsafe };

inline const char* to_string(DiagContext c) {
    return c == DiagContext::Safe ? "safe" : "unsafe";
}

/// One finding. `rule_id` is a guideline id, or "tool" for findings that
/// belong to the tool itself (governance checks, deviation scanning,
/// parse failures).
struct Diagnostic {
    std::string rule_id;
    std::string check_id;
    std::string severity = "required";
    Span span;
    std::string message;
    DiagContext context = DiagContext::Safe;
    bool suppressed = false;
    std::optional<std::string> suppression_justification;
    std::string file;
};

inline bool diagnostic_order(const Diagnostic& a, const Diagnostic& b) {
    if (a.file != b.file)
        return a.file < b.file;
    if (a.span.byte_start != b.span.byte_start)
        return a.span.byte_start < b.span.byte_start;
    if (a.rule_id != b.rule_id)
        return a.rule_id < b.rule_id;
    return a.check_id < b.check_id;
}

} // namespace misrust
