#pragma once

// Result rendering: per-diagnostic text lines, the machine-readable JSON
// document, the per-guideline compliance matrix, and the registry statistics
// table.

#include "misrust/engine.hpp"
#include "misrust/registry.hpp"
#include "misrust/version.hpp"

#include <json.hpp>

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

namespace misrust {

enum class GuidelineStatusKind {
    NotApplicable,
    GuaranteedByLanguage,
    Compliant,
    Violated,
    ManualReview,
    Unchecked,
};

inline const char* to_string(GuidelineStatusKind s) {
    switch (s) {
        case GuidelineStatusKind::NotApplicable: return "not_applicable";
        case GuidelineStatusKind::GuaranteedByLanguage: return "guaranteed";
        case GuidelineStatusKind::Compliant: return "compliant";
        case GuidelineStatusKind::Violated: return "violated";
        case GuidelineStatusKind::ManualReview: return "manual";
        case GuidelineStatusKind::Unchecked: return "unchecked";
    }
    return "?";
}

struct GuidelineStatus {
    GuidelineStatusKind kind = GuidelineStatusKind::Unchecked;
    std::size_t violated_count = 0; // >= 1 when kind == Violated
};

struct ComplianceReport {
    std::map<std::string, GuidelineStatus> per_guideline; // keyed by guideline id
    std::string toolchain;
    std::string profile;
    std::size_t files_analyzed = 0;
    std::size_t files_failed_parse = 0;
    std::map<GuidelineStatusKind, std::size_t> totals;
};

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fold the analysis result into a per-guideline status matrix. Any unsafe
/// code anywhere in the set demotes the unsafe-gated rules for the whole
/// set. Suppressed findings never count toward Violated.
inline ComplianceReport build_compliance(const Registry& registry, const AnalysisResult& result) {
    ComplianceReport report;
    report.toolchain = result.toolchain;
    report.profile = result.profile_name;
    report.files_analyzed = result.files_analyzed;
    report.files_failed_parse = result.files_failed_parse;

    std::map<std::string, std::size_t> violations; // unsuppressed, by rule id
    for (const Diagnostic& d : result.diagnostics) {
        if (d.suppressed || d.rule_id == "tool")
            continue;
        if (!registry.find(d.rule_id))
            throw ReportError("diagnostic names rule `" + d.rule_id +
                              "` absent from the registry");
        violations[d.rule_id]++;
    }

    bool any_unsafe = false;
    for (const auto& [file, has] : result.file_has_unsafe)
        any_unsafe = any_unsafe || has;

    // a rule counts as exercised when some unit's effective set activated it
    auto rule_was_active = [&](const std::string& id) {
        for (const auto& [file, eff] : result.effective_sets)
            for (const std::string& r : eff.active_checks)
                if (r == id)
                    return true;
        return false;
    };

    for (const Guideline& g : registry.guidelines) {
        GuidelineStatus status;
        std::size_t n = violations.count(g.id) ? violations[g.id] : 0;
        switch (g.guideline_class) {
            case GuidelineClass::C1_StdLibOnly:
            case GuidelineClass::C2_NoSuchFeature:
                status.kind = GuidelineStatusKind::NotApplicable;
                break;
            case GuidelineClass::C3_SatisfiedByLanguage:
                status.kind = GuidelineStatusKind::GuaranteedByLanguage;
                break;
            case GuidelineClass::C4_RequiredInUnsafe:
            case GuidelineClass::C5_NeedsAdaptation: {
                bool gated = g.guideline_class == GuidelineClass::C4_RequiredInUnsafe &&
                             !g.safe_required;
                if (gated && !any_unsafe) {
                    status.kind = GuidelineStatusKind::GuaranteedByLanguage;
                } else if (n > 0) {
                    status.kind = GuidelineStatusKind::Violated;
                    status.violated_count = n;
                } else if (g.check_id && result.files_analyzed > 0 && rule_was_active(g.id)) {
                    status.kind = GuidelineStatusKind::Compliant;
                } else if (g.check_id) {
                    status.kind = GuidelineStatusKind::Unchecked;
                } else if (gated) {
                    status.kind = GuidelineStatusKind::Unchecked;
                } else {
                    status.kind = GuidelineStatusKind::ManualReview;
                }
                break;
            }
        }
        report.per_guideline[g.id] = status;
        report.totals[status.kind]++;
    }
    return report;
}

// ---- text ------------------------------------------------------------------

inline std::string render_text(const AnalysisResult& result) {
    std::ostringstream out;
    for (const Diagnostic& d : result.diagnostics) {
        out << d.file << ":" << d.span.line_start << ":" << d.span.col_start << ": ["
            << d.rule_id << "] " << d.severity << ": " << d.message;
        if (d.suppressed)
            out << " (suppressed: " << d.suppression_justification.value_or("") << ")";
        out << "\n";
    }
    return out.str();
}

// ---- json ------------------------------------------------------------------

inline std::string render_json(const Registry& registry, const AnalysisResult& result) {
    ComplianceReport compliance = build_compliance(registry, result);

    nlohmann::ordered_json doc;
    doc["tool_version"] = tool_version;
    doc["toolchain"] = result.toolchain;
    doc["profile"] = result.profile_name;
    doc["files_analyzed"] = result.files_analyzed;
    doc["files_failed_parse"] = result.files_failed_parse;

    doc["diagnostics"] = nlohmann::ordered_json::array();
    for (const Diagnostic& d : result.diagnostics) {
        if (d.suppressed)
            continue;
        nlohmann::ordered_json j;
        j["file"] = d.file;
        j["line"] = d.span.line_start;
        j["col"] = d.span.col_start;
        j["end_line"] = d.span.line_end;
        j["end_col"] = d.span.col_end;
        j["rule_id"] = d.rule_id;
        j["check_id"] = d.check_id;
        j["severity"] = d.severity;
        j["context"] = to_string(d.context);
        j["message"] = d.message;
        doc["diagnostics"].push_back(std::move(j));
    }

    doc["deviations"] = nlohmann::ordered_json::array();
    for (const Diagnostic& d : result.diagnostics) {
        if (!d.suppressed)
            continue;
        nlohmann::ordered_json j;
        j["file"] = d.file;
        j["line"] = d.span.line_start;
        j["rule_id"] = d.rule_id;
        j["justification"] = d.suppression_justification.value_or("");
        doc["deviations"].push_back(std::move(j));
    }

    doc["compliance"] = nlohmann::ordered_json::object();
    for (const Guideline& g : registry.guidelines) {
        const GuidelineStatus& s = compliance.per_guideline.at(g.id);
        nlohmann::ordered_json j;
        j["status"] = to_string(s.kind);
        if (s.kind == GuidelineStatusKind::Violated)
            j["count"] = s.violated_count;
        doc["compliance"][g.id] = std::move(j);
    }

    nlohmann::ordered_json totals;
    for (GuidelineStatusKind k :
         {GuidelineStatusKind::NotApplicable, GuidelineStatusKind::GuaranteedByLanguage,
          GuidelineStatusKind::Compliant, GuidelineStatusKind::Violated,
          GuidelineStatusKind::ManualReview, GuidelineStatusKind::Unchecked}) {
        std::size_t n = compliance.totals.count(k) ? compliance.totals.at(k) : 0;
        totals[to_string(k)] = n;
    }
    doc["totals"] = std::move(totals);

    return doc.dump(2) + "\n";
}

// ---- summary ----------------------------------------------------------------

inline std::string render_summary(const Registry& registry, const AnalysisResult& result) {
    ComplianceReport compliance = build_compliance(registry, result);
    std::ostringstream out;
    out << "compliance summary (" << tool_version << ")\n";
    out << "profile: " << compliance.profile << "\n";
    out << "toolchain: " << (compliance.toolchain.empty() ? "<unpinned>" : compliance.toolchain)
        << "\n";
    out << "files: " << compliance.files_analyzed << " analyzed, "
        << compliance.files_failed_parse << " failed to parse\n\n";

    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-10s %-5s %-13s %s\n", "guideline", "class", "status",
                  "detail");
    out << buf;
    for (const Guideline& g : registry.guidelines) {
        const GuidelineStatus& s = compliance.per_guideline.at(g.id);
        std::string detail;
        if (s.kind == GuidelineStatusKind::Violated)
            detail = std::to_string(s.violated_count) + " finding(s)";
        std::snprintf(buf, sizeof(buf), "%-10s %-5s %-13s %s\n", g.id.c_str(),
                      to_string(g.guideline_class), to_string(s.kind), detail.c_str());
        out << buf;
    }

    out << "\ntotals:";
    for (GuidelineStatusKind k :
         {GuidelineStatusKind::NotApplicable, GuidelineStatusKind::GuaranteedByLanguage,
          GuidelineStatusKind::Compliant, GuidelineStatusKind::Violated,
          GuidelineStatusKind::ManualReview, GuidelineStatusKind::Unchecked}) {
        std::size_t n = compliance.totals.count(k) ? compliance.totals.at(k) : 0;
        out << " " << to_string(k) << ": " << n;
    }
    out << "\n";
    return out.str();
}

// ---- registry statistics -------------------------------------------------------

inline std::string render_stats(const Registry& registry) {
    std::ostringstream out;
    auto count = [&](auto&& pred) {
        long n = 0;
        for (const Guideline& g : registry.guidelines)
            if (pred(g))
                ++n;
        return n;
    };
    long total = static_cast<long>(registry.guidelines.size());
    long c1 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C1_StdLibOnly; });
    long c2 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C2_NoSuchFeature; });
    long c3 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C3_SatisfiedByLanguage; });
    long c4 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C4_RequiredInUnsafe; });
    long c5 = count([](const Guideline& g) { return g.guideline_class == GuidelineClass::C5_NeedsAdaptation; });
    long c6 = count([](const Guideline& g) {
        return g.guideline_class == GuidelineClass::C4_RequiredInUnsafe && g.safe_required;
    });

    char buf[160];
    auto row = [&](const char* label, long n) {
        double pct = total > 0 ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0;
        std::snprintf(buf, sizeof(buf), "%-52s %3ld/%ld  %6.2f\n", label, n, total, pct);
        out << buf;
    };
    out << "guideline distribution (" << registry.dataset_version << ")\n";
    row("not applicable", c1 + c2);
    row("  (C1) standard-library usage restriction", c1);
    row("  (C2) feature absent from the language", c2);
    row("applicable", c3 + c4 + c5);
    row("  (C3) already satisfied by the language", c3);
    row("  still relevant", c4 + c5);
    row("    (C4) required in unsafe code", c4);
    row("      (C6) of them, required in safe code", c6);
    row("    (C5) requires adaptation", c5);

    out << "\nstill-relevant rules by topic\n";
    std::map<std::string, std::pair<long, long>> topics; // topic -> (relevant, total)
    for (const Guideline& g : registry.guidelines) {
        topics[g.topic].second++;
        if (g.relevant())
            topics[g.topic].first++;
    }
    for (const auto& [topic, counts] : topics) {
        if (counts.first == 0)
            continue;
        double pct = 100.0 * static_cast<double>(counts.first) / static_cast<double>(counts.second);
        std::snprintf(buf, sizeof(buf), "%-32s %2ld/%-2ld  %6.2f\n", topic.c_str(), counts.first,
                      counts.second, pct);
        out << buf;
    }

    out << "\naggregate validation\n";
    ValidationReport validation = validate_aggregates(registry);
    for (const ValidationCheck& c : validation.checks) {
        std::snprintf(buf, sizeof(buf), "%-4s %-44s expected %-18s actual %s\n",
                      c.pass ? "PASS" : "FAIL", c.constraint.c_str(), c.expected.c_str(),
                      c.actual.c_str());
        out << buf;
    }
    return out.str();
}

} // namespace misrust
