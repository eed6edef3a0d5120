#pragma once

// Executable guideline checks: the adapted rules that are statically
// checkable, the named exemplar rules, and the unsafe-governance checks.
// Checks are pure functions of (unit, context, index, options) and never
// fail on a valid tree.

#include "misrust/ast.hpp"
#include "misrust/callgraph.hpp"
#include "misrust/diagnostics.hpp"
#include "misrust/registry.hpp"
#include "misrust/unsafe_analysis.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace misrust {

struct CheckInput {
    const SourceUnit& unit;
    const UnsafeContextMap& ctx;
    const std::vector<UnsafeOperation>& operations;
    const AnalysisIndex& index;
    const std::vector<const SourceUnit*>& all_units;
    const Registry& registry;
    const CheckOptions& options;
    bool unit_is_crate_root = false;
    // set-level results computed once per run; null means compute on demand
    const CallGraph* call_graph = nullptr;
    const std::set<std::size_t>* recursive_fns = nullptr;
};

namespace checks_detail {

inline std::string severity_for(const Registry& reg, const std::string& rule_id) {
    const Guideline* g = reg.find(rule_id);
    return g ? to_string(g->severity) : "required";
}

inline bool node_is_unsafe_construct(const SyntaxNode& n) {
    return n.kind == NodeKind::UnsafeBlock ||
           ((n.kind == NodeKind::FunctionItem || n.kind == NodeKind::ImplBlock) &&
            n.props.is_unsafe);
}

inline Diagnostic make(const CheckInput& in, const std::string& rule_id,
                       const std::string& check_id, const SyntaxNode& node, std::string message) {
    Diagnostic d;
    d.rule_id = rule_id;
    d.check_id = check_id;
    d.severity = rule_id == "tool" ? "required" : severity_for(in.registry, rule_id);
    d.span = node.span;
    d.message = std::move(message);
    d.context = in.ctx.node_in_unsafe(node.node_id) || node_is_unsafe_construct(node)
                    ? DiagContext::Unsafe
                    : DiagContext::Safe;
    d.file = in.unit.path;
    return d;
}

/// Built-in attribute names of the analyzed language, plus the standard tool
/// namespaces. Versioned with the pinned reference toolchain.
inline const std::set<std::string>& builtin_attributes() {
    static const std::set<std::string> names = {
        "cfg", "cfg_attr", "test", "ignore", "should_panic", "derive",
        "automatically_derived", "macro_export", "macro_use", "proc_macro",
        "proc_macro_derive", "proc_macro_attribute", "allow", "warn", "deny", "forbid",
        "expect", "deprecated", "must_use", "diagnostic", "link", "link_name",
        "link_section", "link_ordinal", "no_link", "repr", "crate_type", "no_builtins",
        "target_feature", "track_caller", "instruction_set", "non_exhaustive", "marker",
        "fundamental", "may_dangle", "inline", "cold", "no_mangle", "export_name", "used",
        "crate_name", "doc", "no_std", "no_core", "no_implicit_prelude", "path",
        "recursion_limit", "type_length_limit", "panic_handler", "global_allocator",
        "alloc_error_handler", "windows_subsystem", "feature", "no_main", "main", "start",
        "bench", "debugger_visualizer", "collapse_debuginfo", "coverage", "naked",
    };
    return names;
}

inline const std::set<std::string>& builtin_tool_namespaces() {
    static const std::set<std::string> names = {"rustfmt", "clippy", "diagnostic"};
    return names;
}

inline std::string first_segment(const std::string& path) {
    auto pos = path.find("::");
    return pos == std::string::npos ? path : path.substr(0, pos);
}

inline bool in_const_block(const SourceUnit& unit, NodeId id) {
    return unit.find_ancestor(id, [](const SyntaxNode& a) {
               return a.kind == NodeKind::ConstBlock;
           }) != nullptr;
}

inline bool has_test_attribute(const SourceUnit& unit, const SyntaxNode& item) {
    for (NodeId c : item.children) {
        const SyntaxNode& a = unit.node(c);
        if (a.kind != NodeKind::Attribute)
            continue;
        if (a.props.path_text == "test" || a.props.path_text == "bench")
            return true;
        if (a.props.path_text == "cfg" && a.props.text.find("test") != std::string::npos)
            return true;
    }
    return false;
}

inline bool under_test_item(const SourceUnit& unit, NodeId id) {
    NodeId cur = id;
    while (cur != invalid_node) {
        const SyntaxNode& n = unit.node(cur);
        if ((n.kind == NodeKind::FunctionItem || n.kind == NodeKind::ModuleItem ||
             n.kind == NodeKind::ImplBlock) &&
            has_test_attribute(unit, n))
            return true;
        cur = n.parent;
    }
    return false;
}

inline bool contains(const std::vector<std::string>& v, const std::string& s) {
    for (const auto& e : v)
        if (e == s)
            return true;
    return false;
}

inline bool is_int_type_text(const std::string& s) {
    static const char* names[] = {"usize", "isize", "u8", "u16", "u32", "u64", "u128",
                                  "i8", "i16", "i32", "i64", "i128"};
    for (const char* n : names)
        if (s == n)
            return true;
    return false;
}

} // namespace checks_detail

// ---- 12.3.1: unions ---------------------------------------------------------------

inline std::vector<Diagnostic> check_union_decl(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::UnionItem)
            out.push_back(checks_detail::make(
                in, "12.3.1", "CHK-12.3.1", n,
                "union `" + n.props.name +
                    "` declared; prefer a tagged enum, which is type-safe and supports "
                    "exhaustive matching"));
    });
    return out;
}

// ---- 19.0.1: attribute validity ------------------------------------------------------

inline std::vector<Diagnostic> check_attribute_validity(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::Attribute)
            return;
        std::string seg = checks_detail::first_segment(n.props.path_text);
        if (seg == "unsafe" && !n.props.text.empty() && n.props.text.front() == '(') {
            // 2024-edition wrapper: #[unsafe(no_mangle)] names the inner attribute
            std::string inner = n.props.text.substr(1);
            std::size_t end = inner.find_first_of(",()]");
            seg = checks_detail::first_segment(inner.substr(0, end));
            while (!seg.empty() && (seg.back() == ' ' || seg.back() == ')'))
                seg.pop_back();
        }
        if (seg.empty())
            return;
        if (checks_detail::builtin_attributes().count(seg))
            return;
        bool is_namespace = n.props.path_text.find("::") != std::string::npos;
        if (is_namespace && checks_detail::builtin_tool_namespaces().count(seg))
            return;
        if (checks_detail::contains(in.options.tool_attribute_namespaces, seg))
            return;
        out.push_back(checks_detail::make(in, "19.0.1", "CHK-19.0.1", n,
                                          "unknown attribute `" + n.props.path_text +
                                              "`; not a built-in or configured tool namespace"));
    });
    return out;
}

// ---- 19.2.2: import syntax -----------------------------------------------------------

inline std::vector<Diagnostic> check_import_syntax(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::UseDecl || !n.props.is_glob)
            return;
        // segment preceding the `*`
        const std::string& p = n.props.path_text; // e.g. "std::collections::*"
        std::string before;
        if (p.size() >= 3 && p.ends_with("::*")) {
            std::string head = p.substr(0, p.size() - 3);
            before = AnalysisIndex::last_segment(head);
        }
        if (before == "prelude")
            return;
        out.push_back(checks_detail::make(in, "19.2.2", "CHK-19.2.2", n,
                                          "glob import `" + p +
                                              "`; import names explicitly or glob a designated "
                                              "`prelude` module"));
    });
    return out;
}

// ---- 6.0.3: crate-root items -----------------------------------------------------------

inline std::vector<Diagnostic> check_root_items(const CheckInput& in) {
    std::vector<Diagnostic> out;
    if (!in.unit_is_crate_root)
        return out;
    const auto& allow = in.options.root_item_allowlist;
    for (NodeId c : in.unit.root().children) {
        const SyntaxNode& n = in.unit.node(c);
        if (n.kind == NodeKind::Comment)
            continue;
        std::string kind = node_kind_name(n.kind);
        bool ok = false;
        if (n.kind == NodeKind::Attribute)
            ok = n.props.is_inner && checks_detail::contains(allow, "Attribute");
        else if (n.kind == NodeKind::FunctionItem)
            ok = checks_detail::contains(allow, "FunctionItem") ||
                 (n.props.is_main && checks_detail::contains(allow, "FunctionItem:main"));
        else
            ok = checks_detail::contains(allow, kind);
        if (!ok)
            out.push_back(checks_detail::make(
                in, "6.0.3", "CHK-6.0.3", n,
                kind + (n.props.name.empty() ? "" : " `" + n.props.name + "`") +
                    " at crate root; only modules, imports, `main`, and constants belong "
                    "here"));
    }
    return out;
}

// ---- 6.4.2: trait method shadowing --------------------------------------------------------

inline std::vector<Diagnostic> check_trait_method_shadowing(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::ImplBlock || !n.props.trait_path.empty())
            return;
        std::string type = AnalysisIndex::base_type_name(n.props.type_text);
        auto traits_it = in.index.trait_impls.find(type);
        if (traits_it == in.index.trait_impls.end())
            return;
        for (NodeId c : n.children) {
            const SyntaxNode& m = in.unit.node(c);
            if (m.kind != NodeKind::FunctionItem || m.props.name.empty())
                continue;
            for (const std::string& trait : traits_it->second) {
                auto tm = in.index.trait_methods.find(trait);
                if (tm == in.index.trait_methods.end() || !tm->second.count(m.props.name))
                    continue;
                out.push_back(checks_detail::make(
                    in, "6.4.2", "CHK-6.4.2", m,
                    "inherent method `" + m.props.name + "` shadows `" + trait + "::" +
                        m.props.name + "` implemented for `" + type + "`"));
                break;
            }
        }
    });
    return out;
}

// ---- 18.5.1: panic paths ---------------------------------------------------------------------

inline std::vector<Diagnostic> check_panic_paths(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        bool hit = false;
        std::string name;
        if (n.kind == NodeKind::MacroInvocation &&
            checks_detail::contains(in.options.panic_macros, n.props.name)) {
            hit = true;
            name = n.props.name + "!";
        } else if (n.kind == NodeKind::MethodCallExpr &&
                   checks_detail::contains(in.options.panic_methods, n.props.name)) {
            hit = true;
            name = n.props.name;
        }
        if (!hit || checks_detail::under_test_item(in.unit, n.node_id))
            return;
        out.push_back(checks_detail::make(in, "18.5.1", "CHK-18.5.1", n,
                                          "`" + name +
                                              "` can panic at run time; prefer explicit, "
                                              "recoverable error handling"));
    });
    return out;
}

// ---- 21.6.2: Drop for raw-pointer holders --------------------------------------------------------

inline std::vector<Diagnostic> check_drop_for_raw_holders(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::StructItem)
            return;
        bool holds_raw = false;
        for (const auto& [name, type] : n.props.fields)
            if (type.starts_with("*const") || type.starts_with("*mut"))
                holds_raw = true;
        if (!holds_raw)
            return;
        auto it = in.index.drop_impl_types.find("Drop");
        if (it != in.index.drop_impl_types.end() && it->second.count(n.props.name))
            return;
        out.push_back(checks_detail::make(
            in, "21.6.2", "CHK-21.6.2", n,
            "struct `" + n.props.name +
                "` holds raw pointer fields but implements no Drop; release must be "
                "automatic"));
    });
    return out;
}

// ---- 22.3.1: const assertions ----------------------------------------------------------------------

namespace checks_detail {

/// Syntactic constant expression: literals (including bool) combined with
/// unary/binary operators, parentheses, and argument commas. Named constants
/// do not count.
inline bool is_constant_expression(const std::string& args) {
    if (args.empty())
        return false;
    std::optional<LexError> err;
    std::vector<Token> toks = lex(args, err);
    if (err || toks.empty())
        return false;
    static const std::set<std::string> ops = {
        "+", "-", "*", "/", "%", "<<", ">>", "&", "|", "^", "==", "!=",
        "<", ">", "<=", ">=", "&&", "||", "!", ",",
    };
    for (const Token& t : toks) {
        switch (t.kind) {
            case TokenKind::IntLiteral:
            case TokenKind::FloatLiteral:
            case TokenKind::CharLiteral:
            case TokenKind::StrLiteral:
            case TokenKind::OpenParen:
            case TokenKind::CloseParen:
                continue;
            case TokenKind::Ident:
                if (t.text == "true" || t.text == "false")
                    continue;
                return false;
            case TokenKind::Punct:
                if (ops.count(t.text))
                    continue;
                return false;
            default:
                return false;
        }
    }
    return true;
}

} // namespace checks_detail

inline std::vector<Diagnostic> check_const_assert(const CheckInput& in) {
    static const std::set<std::string> assert_macros = {"assert", "assert_eq", "assert_ne"};
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::MacroInvocation || !assert_macros.count(n.props.name))
            return;
        if (!checks_detail::is_constant_expression(n.props.text))
            return;
        if (checks_detail::in_const_block(in.unit, n.node_id))
            return;
        out.push_back(checks_detail::make(in, "22.3.1", "CHK-22.3.1", n,
                                          "`" + n.props.name +
                                              "!` over a constant expression; wrap it in a "
                                              "`const` block to make compile-time intent "
                                              "explicit"));
    });
    return out;
}

// ---- 8.2.7: pointer-to-integer casts ------------------------------------------------------------------

inline std::vector<Diagnostic> check_ptr_int_cast(const CheckInput& in) {
    std::vector<Diagnostic> out;
    detail::BindingTable bindings(in.unit);
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::CastExpr)
            return;
        if (!checks_detail::is_int_type_text(n.props.type_text))
            return;
        bool pointer_operand = n.props.operand_is_raw_cast;
        if (!pointer_operand && !n.props.operand_ident.empty()) {
            std::string ty = bindings.lookup(in.unit, n.node_id, n.props.operand_ident);
            pointer_operand = ty.starts_with("*const") || ty.starts_with("*mut");
        }
        if (!pointer_operand)
            return;
        out.push_back(checks_detail::make(in, "8.2.7", "CHK-8.2.7", n,
                                          "pointer value cast to integer type `" +
                                              n.props.type_text +
                                              "`; the address must not be treated as a "
                                              "number"));
    });
    return out;
}

// ---- mutable statics ------------------------------------------------------------------------------------

inline std::vector<Diagnostic> check_static_mut(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::StaticItem && n.props.is_mut)
            out.push_back(checks_detail::make(in, "tool", "CHK-STATIC-MUT", n,
                                              "mutable static `" + n.props.name +
                                                  "` declared; every access is an unsafe "
                                                  "shared-state interaction"));
    });
    for (const UnsafeOperation& op : in.operations) {
        if (op.kind != UnsafeOperationKind::StaticMutAccess)
            continue;
        Diagnostic d;
        d.rule_id = "tool";
        d.check_id = "CHK-STATIC-MUT";
        d.severity = "required";
        d.span = op.span;
        d.message = "access to mutable static; audit the surrounding synchronization";
        d.context = op.enclosing_unsafe_span ? DiagContext::Unsafe : DiagContext::Safe;
        d.file = in.unit.path;
        out.push_back(d);
    }
    return out;
}

// ---- safety comments -------------------------------------------------------------------------------------

inline std::vector<Diagnostic> check_safety_comment(const CheckInput& in) {
    std::vector<Diagnostic> out;
    in.unit.walk([&](const SyntaxNode& n) {
        bool needs_comment = n.kind == NodeKind::UnsafeBlock ||
                             ((n.kind == NodeKind::FunctionItem ||
                               n.kind == NodeKind::ImplBlock) &&
                              n.props.is_unsafe);
        if (!needs_comment)
            return;
        const SyntaxNode* c = comment_before(in.unit, n);
        if (c) {
            std::string text = c->props.text;
            std::size_t start = text.find_first_not_of(' ');
            if (start != std::string::npos && text.compare(start, 7, "SAFETY:") == 0)
                return;
        }
        const char* what = n.kind == NodeKind::UnsafeBlock ? "unsafe block"
                           : n.kind == NodeKind::FunctionItem ? "unsafe function"
                                                              : "unsafe impl";
        out.push_back(checks_detail::make(
            in, "tool", "CHK-SAFETY-COMMENT", n,
            std::string(what) + " without a preceding `// SAFETY:` justification"));
    });
    return out;
}

// ---- recursion --------------------------------------------------------------------------------------------

inline std::vector<Diagnostic> check_recursion(const CheckInput& in) {
    std::vector<Diagnostic> out;
    CallGraph local;
    std::set<std::size_t> local_cyclic;
    const CallGraph* graph = in.call_graph;
    const std::set<std::size_t>* cyclic = in.recursive_fns;
    if (!graph || !cyclic) {
        local = build_call_graph(in.all_units);
        local_cyclic = recursive_functions(local);
        graph = &local;
        cyclic = &local_cyclic;
    }
    const CallGraph& g = *graph;
    for (std::size_t idx : *cyclic) {
        const CallGraphNode& node = g.nodes[idx];
        if (node.unit != &in.unit)
            continue;
        Diagnostic d;
        d.rule_id = "8.2.10";
        d.check_id = "CHK-RECURSION";
        d.severity = checks_detail::severity_for(in.registry, "8.2.10");
        d.span = node.span;
        d.message = "function `" + node.qualified + "` participates in a call cycle";
        d.context = in.ctx.node_in_unsafe(node.decl) ? DiagContext::Unsafe : DiagContext::Safe;
        d.file = in.unit.path;
        out.push_back(d);
    }
    return out;
}

// ---- heap allocation (opt-in) ------------------------------------------------------------------------------

inline std::vector<Diagnostic> check_heap_alloc(const CheckInput& in) {
    std::vector<Diagnostic> out;
    if (!in.options.no_alloc)
        return out;
    auto matches_call = [&](const std::string& path) {
        for (const std::string& entry : in.options.alloc_calls)
            if (path == entry || path.ends_with("::" + entry))
                return true;
        return false;
    };
    in.unit.walk([&](const SyntaxNode& n) {
        std::string what;
        if (n.kind == NodeKind::CallExpr && matches_call(n.props.path_text))
            what = n.props.path_text;
        else if (n.kind == NodeKind::MacroInvocation &&
                 checks_detail::contains(in.options.alloc_macros, n.props.name))
            what = n.props.name + "!";
        else if (n.kind == NodeKind::MethodCallExpr &&
                 checks_detail::contains(in.options.alloc_methods, n.props.name))
            what = n.props.name;
        if (what.empty())
            return;
        out.push_back(checks_detail::make(in, "21.6.1", "CHK-ALLOC", n,
                                          "`" + what +
                                              "` allocates dynamically; forbidden under the "
                                              "no_alloc policy"));
    });
    return out;
}

// ---- 0.3.1: float equality -------------------------------------------------------------------------------------

inline std::vector<Diagnostic> check_float_equality(const CheckInput& in) {
    std::vector<Diagnostic> out;
    detail::BindingTable bindings(in.unit);
    auto is_float_local = [&](NodeId at, const std::string& name) {
        if (name.empty())
            return false;
        std::string ty = bindings.lookup(in.unit, at, name);
        return ty == "f32" || ty == "f64";
    };
    in.unit.walk([&](const SyntaxNode& n) {
        if (n.kind != NodeKind::ComparisonExpr)
            return;
        if (n.props.text != "==" && n.props.text != "!=")
            return;
        bool floaty = n.props.lhs_is_float || n.props.rhs_is_float ||
                      is_float_local(n.node_id, n.props.operand_ident) ||
                      is_float_local(n.node_id, n.props.operand_ident_rhs);
        if (!floaty)
            return;
        out.push_back(checks_detail::make(in, "0.3.1", "CHK-0.3.1", n,
                                          "floating-point `" + n.props.text +
                                              "` comparison; representation error makes exact "
                                              "equality unreliable"));
    });
    return out;
}

// ---- descriptors ------------------------------------------------------------------------------------------------

struct CheckDescriptor {
    std::string check_id;
    std::string rule_id; // "tool" for invented checks
    bool gated_on_unsafe = false;
    bool run_level = false; // evaluated once per run, not per unit
    std::function<std::vector<Diagnostic>(const CheckInput&)> run;
};

inline const std::vector<CheckDescriptor>& all_checks() {
    static const std::vector<CheckDescriptor> checks = {
        {"CHK-12.3.1", "12.3.1", false, false, check_union_decl},
        {"CHK-19.0.1", "19.0.1", false, false, check_attribute_validity},
        {"CHK-19.2.2", "19.2.2", false, false, check_import_syntax},
        {"CHK-6.0.3", "6.0.3", false, false, check_root_items},
        {"CHK-6.4.2", "6.4.2", false, false, check_trait_method_shadowing},
        {"CHK-18.5.1", "18.5.1", false, false, check_panic_paths},
        {"CHK-21.6.2", "21.6.2", false, false, check_drop_for_raw_holders},
        {"CHK-22.3.1", "22.3.1", false, false, check_const_assert},
        {"CHK-8.2.7", "8.2.7", true, false, check_ptr_int_cast},
        {"CHK-STATIC-MUT", "tool", false, false, check_static_mut},
        {"CHK-SAFETY-COMMENT", "tool", true, false, check_safety_comment},
        {"CHK-RECURSION", "8.2.10", false, false, check_recursion},
        {"CHK-ALLOC", "21.6.1", false, false, check_heap_alloc},
        {"CHK-0.3.1", "0.3.1", false, false, check_float_equality},
        {"CHK-4.1.1", "4.1.1", false, true, nullptr},
    };
    return checks;
}

inline const CheckDescriptor* find_check(const std::string& check_id) {
    for (const CheckDescriptor& c : all_checks())
        if (c.check_id == check_id)
            return &c;
    return nullptr;
}

} // namespace misrust
