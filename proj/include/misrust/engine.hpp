#pragma once

// Analysis orchestration: per-unit rule resolution, check dispatch,
// deviation suppression, and deterministic aggregation.

#include "misrust/checks.hpp"
#include "misrust/config.hpp"
#include "misrust/diagnostics.hpp"
#include "misrust/parser.hpp"
#include "misrust/registry.hpp"
#include "misrust/unsafe_analysis.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace misrust {

enum class DeviationTarget { NextLine, EnclosingItem };

/// A justified, auditable exemption recorded in a source comment:
/// `// misrust-deviation(<rule-id>): <justification>`
struct Deviation {
    std::string rule_id;
    std::string justification;
    Span span; // the deviation comment
    DeviationTarget applies_to = DeviationTarget::NextLine;
};

struct DeviationScan {
    std::vector<Deviation> deviations;
    std::vector<Diagnostic> diagnostics; // DEV-EMPTY / DEV-BADID
};

namespace engine_detail {

inline bool is_guideline_id(const std::string& s) {
    // digits separated by dots, at least one dot: "12.3.1"
    bool any_digit = false, any_dot = false, last_dot = true;
    for (char c : s) {
        if (c >= '0' && c <= '9') {
            any_digit = true;
            last_dot = false;
        } else if (c == '.') {
            if (last_dot)
                return false;
            any_dot = true;
            last_dot = true;
        } else {
            return false;
        }
    }
    return any_digit && any_dot && !last_dot;
}

inline bool is_item_kind(NodeKind k) {
    switch (k) {
        case NodeKind::FunctionItem:
        case NodeKind::StructItem:
        case NodeKind::EnumItem:
        case NodeKind::UnionItem:
        case NodeKind::TraitItem:
        case NodeKind::ImplBlock:
        case NodeKind::StaticItem:
        case NodeKind::ConstItem:
        case NodeKind::ModuleItem:
        case NodeKind::UseDecl:
            return true;
        default:
            return false;
    }
}

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace engine_detail

/// Scan a unit's line comments for deviation records. A matching comment with
/// an empty justification yields DEV-EMPTY, a malformed rule id DEV-BADID;
/// neither produces a Deviation.
inline DeviationScan scan_deviations(const SourceUnit& unit) {
    static const std::string marker = "misrust-deviation(";
    DeviationScan out;
    for (NodeId cid : unit.comments) {
        const SyntaxNode& c = unit.node(cid);
        if (!c.props.is_line)
            continue;
        std::string text = engine_detail::trim(c.props.text);
        if (!text.starts_with(marker))
            continue;
        auto mk_diag = [&](const char* check, std::string msg) {
            Diagnostic d;
            d.rule_id = "tool";
            d.check_id = check;
            d.severity = "required";
            d.span = c.span;
            d.message = std::move(msg);
            d.file = unit.path;
            out.diagnostics.push_back(d);
        };
        std::size_t close = text.find(')', marker.size());
        if (close == std::string::npos || close + 1 >= text.size() || text[close + 1] != ':') {
            mk_diag("DEV-BADID", "malformed deviation comment; expected "
                                 "`misrust-deviation(<rule-id>): <justification>`");
            continue;
        }
        std::string rule_id = text.substr(marker.size(), close - marker.size());
        bool known_check = find_check(rule_id) != nullptr;
        if (!engine_detail::is_guideline_id(rule_id) && !known_check) {
            mk_diag("DEV-BADID", "deviation names malformed rule id `" + rule_id + "`");
            continue;
        }
        std::string justification = engine_detail::trim(text.substr(close + 2));
        if (justification.empty()) {
            mk_diag("DEV-EMPTY", "deviation for rule " + rule_id + " has no justification");
            continue;
        }
        Deviation dev;
        dev.rule_id = rule_id;
        dev.justification = justification;
        dev.span = c.span;
        dev.applies_to = DeviationTarget::NextLine;
        for (const SyntaxNode& n : unit.nodes) {
            if (engine_detail::is_item_kind(n.kind) && n.span.line_start == c.span.line_end + 1) {
                dev.applies_to = DeviationTarget::EnclosingItem;
                break;
            }
        }
        out.deviations.push_back(dev);
    }
    return out;
}

struct AnalysisResult {
    std::vector<Diagnostic> diagnostics; // sorted by (file, byte_start, rule_id)
    std::size_t files_analyzed = 0;
    std::size_t files_failed_parse = 0;
    std::map<std::string, std::vector<UnsafeOperation>> unsafe_inventory; // by file
    std::map<std::string, EffectiveRuleSet> effective_sets;               // by file
    std::map<std::string, std::vector<Deviation>> deviations;             // by file
    std::map<std::string, bool> file_has_unsafe;                          // by file
    std::string profile_name;
    std::string toolchain;

    std::size_t unsuppressed_count() const {
        std::size_t n = 0;
        for (const Diagnostic& d : diagnostics)
            if (!d.suppressed)
                ++n;
        return n;
    }
};

namespace engine_detail {

inline bool unit_is_crate_root(const SourceUnit& unit, const CheckOptions& options) {
    auto filename = [](const std::string& p) {
        auto pos = p.find_last_of('/');
        return pos == std::string::npos ? p : p.substr(pos + 1);
    };
    if (options.crate_roots.empty()) {
        std::string f = filename(unit.path);
        return f == "main.rs" || f == "lib.rs";
    }
    for (const std::string& root : options.crate_roots)
        if (unit.path == root || filename(unit.path) == filename(root) ||
            unit.path.ends_with(root))
            return true;
    return false;
}

} // namespace engine_detail

/// Run every active check over the parsed units, apply deviation
/// suppressions, and aggregate deterministically. Checks are pure; a check
/// that throws is reported as CHK-INTERNAL and analysis continues.
inline AnalysisResult run(const Registry& registry, const Profile& profile,
                          const std::vector<SourceUnit>& units) {
    AnalysisResult result;
    result.files_analyzed = units.size();
    result.profile_name = to_string(profile.name);
    result.toolchain = profile.options.toolchain;

    std::vector<const SourceUnit*> unit_ptrs;
    for (const SourceUnit& u : units)
        unit_ptrs.push_back(&u);
    AnalysisIndex index = build_index(unit_ptrs);
    CallGraph call_graph = build_call_graph(unit_ptrs);
    std::set<std::size_t> recursive_fns = recursive_functions(call_graph);

    InventoryOptions inv_opts;
    inv_opts.assume_unknown_calls_unsafe = profile.options.assume_unknown_calls_unsafe;

    for (const SourceUnit& unit : units) {
        UnsafeContextMap ctx = classify_contexts(unit);
        std::vector<UnsafeOperation> ops = inventory(unit, ctx, &index, inv_opts);
        bool has_unsafe = unit_has_unsafe(unit);
        EffectiveRuleSet eff = effective_rule_set(registry, profile, has_unsafe);

        // checks activated through their guideline
        std::set<std::string> active_check_ids;
        for (const std::string& rule_id : eff.active_checks) {
            const Guideline* g = registry.find(rule_id);
            if (g && g->check_id)
                active_check_ids.insert(*g->check_id);
        }

        CheckInput input{unit,      ctx,
                         ops,       index,
                         unit_ptrs, registry,
                         profile.options,
                         engine_detail::unit_is_crate_root(unit, profile.options),
                         &call_graph,
                         &recursive_fns};

        for (const CheckDescriptor& check : all_checks()) {
            if (check.run_level || !check.run)
                continue;
            bool active = check.rule_id == "tool" ? true
                                                  : active_check_ids.count(check.check_id) > 0;
            if (!active)
                continue;
            if (check.gated_on_unsafe && !has_unsafe)
                continue;
            try {
                std::vector<Diagnostic> found = check.run(input);
                result.diagnostics.insert(result.diagnostics.end(), found.begin(), found.end());
            } catch (const std::exception& e) {
                Diagnostic d;
                d.rule_id = "tool";
                d.check_id = "CHK-INTERNAL";
                d.severity = "required";
                d.span = Span{};
                d.message = std::string("check ") + check.check_id + " failed: " + e.what();
                d.file = unit.path;
                result.diagnostics.push_back(d);
            }
        }

        DeviationScan devs = scan_deviations(unit);
        result.diagnostics.insert(result.diagnostics.end(), devs.diagnostics.begin(),
                                  devs.diagnostics.end());
        result.deviations[unit.path] = devs.deviations;
        result.unsafe_inventory[unit.path] = std::move(ops);
        result.effective_sets[unit.path] = std::move(eff);
        result.file_has_unsafe[unit.path] = has_unsafe;
    }

    // toolchain pin is a run-level check (rule 4.1.1)
    if (!units.empty()) {
        const Guideline* g = registry.find("4.1.1");
        bool active = g && g->check_id && !profile.disabled_overrides.count("4.1.1");
        if (active && engine_detail::trim(profile.options.toolchain).empty()) {
            Diagnostic d;
            d.rule_id = "4.1.1";
            d.check_id = "CHK-4.1.1";
            d.severity = to_string(g->severity);
            d.span = Span{};
            d.message = "no toolchain pinned in the configuration; declare the exact "
                        "reference compiler version";
            d.file = "<config>";
            result.diagnostics.push_back(d);
        }
    }

    // per-occurrence suppression: a deviation covers its rule on the line
    // directly below the comment
    for (Diagnostic& d : result.diagnostics) {
        auto it = result.deviations.find(d.file);
        if (it == result.deviations.end())
            continue;
        for (const Deviation& dev : it->second) {
            bool rule_match = dev.rule_id == d.rule_id || dev.rule_id == d.check_id;
            if (rule_match && d.span.line_start == dev.span.line_end + 1) {
                d.suppressed = true;
                d.suppression_justification = dev.justification;
                break;
            }
        }
    }

    std::sort(result.diagnostics.begin(), result.diagnostics.end(), diagnostic_order);
    return result;
}

struct SourceInput {
    std::string path;
    std::string source;
};

/// Parse-and-run convenience: files that fail to parse become PARSE tool
/// diagnostics and are excluded from the analyzed set.
inline AnalysisResult analyze_sources(const Registry& registry, const Profile& profile,
                                      const std::vector<SourceInput>& inputs) {
    std::vector<SourceUnit> units;
    std::vector<Diagnostic> parse_failures;
    for (const SourceInput& in : inputs) {
        try {
            units.push_back(parse(in.path, in.source));
        } catch (const ParseError& e) {
            Diagnostic d;
            d.rule_id = "tool";
            d.check_id = "PARSE";
            d.severity = "required";
            d.span = e.span;
            d.message = e.raw_message;
            d.file = in.path;
            parse_failures.push_back(d);
        }
    }
    AnalysisResult result = run(registry, profile, units);
    result.files_failed_parse = parse_failures.size();
    result.diagnostics.insert(result.diagnostics.end(), parse_failures.begin(),
                              parse_failures.end());
    std::sort(result.diagnostics.begin(), result.diagnostics.end(), diagnostic_order);
    return result;
}

} // namespace misrust
