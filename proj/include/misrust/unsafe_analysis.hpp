#pragma once

// Per-node unsafe-context classification and the inventory of the five
// operations the `unsafe` keyword enables in the analyzed language: raw
// pointer dereference, unsafe function calls, mutable static access, unsafe
// trait implementations, and union field access.

#include "misrust/ast.hpp"
#include "misrust/lexer.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace misrust {

enum class UnsafeOperationKind {
    RawPointerDeref,
    UnsafeFunctionCall,
    StaticMutAccess,
    UnsafeTraitImpl,
    UnionFieldAccess,
};

inline const char* unsafe_operation_name(UnsafeOperationKind k) {
    switch (k) {
        case UnsafeOperationKind::RawPointerDeref: return "raw_pointer_deref";
        case UnsafeOperationKind::UnsafeFunctionCall: return "unsafe_function_call";
        case UnsafeOperationKind::StaticMutAccess: return "static_mut_access";
        case UnsafeOperationKind::UnsafeTraitImpl: return "unsafe_trait_impl";
        case UnsafeOperationKind::UnionFieldAccess: return "union_field_access";
    }
    return "?";
}

struct UnsafeOperation {
    UnsafeOperationKind kind;
    Span span;
    std::optional<Span> enclosing_unsafe_span;
    NodeId node = invalid_node;
};

struct UnsafeContextMap {
    std::vector<bool> in_unsafe; // indexed by node_id
    std::vector<UnsafeOperation> operations;

    bool node_in_unsafe(NodeId id) const {
        return id < in_unsafe.size() && in_unsafe[id];
    }
};

/// Names and declarations shared across the analyzed file set. Cross-file
/// resolution never goes beyond this index.
struct AnalysisIndex {
    std::set<std::string> unsafe_fn_names;          // free fns and methods declared unsafe
    std::set<std::string> known_fn_names;           // every declared fn name
    std::map<std::string, std::set<std::string>> trait_methods;   // trait -> methods
    std::map<std::string, std::set<std::string>> trait_impls;     // type -> traits
    std::map<std::string, std::set<std::string>> drop_impl_types; // "Drop" targets by type name
    std::set<std::string> union_names;

    static std::string last_segment(const std::string& path) {
        auto pos = path.rfind("::");
        return pos == std::string::npos ? path : path.substr(pos + 2);
    }

    void add_unit(const SourceUnit& unit) {
        unit.walk([&](const SyntaxNode& n) {
            if (n.kind == NodeKind::FunctionItem) {
                known_fn_names.insert(n.props.name);
                if (n.props.is_unsafe)
                    unsafe_fn_names.insert(n.props.name);
            } else if (n.kind == NodeKind::TraitItem) {
                auto& methods = trait_methods[n.props.name];
                for (NodeId c : n.children)
                    if (unit.node(c).kind == NodeKind::FunctionItem)
                        methods.insert(unit.node(c).props.name);
            } else if (n.kind == NodeKind::ImplBlock && !n.props.trait_path.empty()) {
                std::string trait = last_segment(n.props.trait_path);
                std::string type = base_type_name(n.props.type_text);
                trait_impls[type].insert(trait);
                if (trait == "Drop")
                    drop_impl_types["Drop"].insert(type);
            } else if (n.kind == NodeKind::UnionItem) {
                union_names.insert(n.props.name);
            }
        });
    }

    /// Strips references and generic arguments: `&mut Foo<T>` -> `Foo`.
    static std::string base_type_name(const std::string& type_text) {
        std::string t = type_text;
        while (!t.empty() && (t.front() == '&' || t.front() == ' '))
            t.erase(t.begin());
        if (t.starts_with("mut "))
            t = t.substr(4);
        auto lt = t.find('<');
        if (lt != std::string::npos)
            t = t.substr(0, lt);
        while (!t.empty() && t.back() == ' ')
            t.pop_back();
        return last_segment(t);
    }
};

inline AnalysisIndex build_index(const std::vector<const SourceUnit*>& units) {
    AnalysisIndex idx;
    for (const SourceUnit* u : units)
        idx.add_unit(*u);
    return idx;
}

/// True iff the unit contains any unsafe block, unsafe function, or unsafe
/// impl block.
inline bool unit_has_unsafe(const SourceUnit& unit) {
    bool found = false;
    unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::UnsafeBlock ||
            ((n.kind == NodeKind::FunctionItem || n.kind == NodeKind::ImplBlock ||
              n.kind == NodeKind::TraitItem) &&
             n.props.is_unsafe))
            found = true;
    });
    return found;
}

/// in_unsafe[n] = n has an UnsafeBlock ancestor, or its nearest enclosing
/// function is unsafe, or it lies inside an unsafe impl block.
inline UnsafeContextMap classify_contexts(const SourceUnit& unit) {
    UnsafeContextMap ctx;
    ctx.in_unsafe.assign(unit.nodes.size(), false);

    struct Frame {
        bool block_unsafe;
        bool fn_unsafe;
        bool impl_unsafe;
    };
    // recursive descent with explicit state per node
    auto visit = [&](auto&& self, NodeId id, Frame f) -> void {
        const SyntaxNode& n = unit.node(id);
        if (n.kind == NodeKind::FunctionItem)
            f.fn_unsafe = n.props.is_unsafe;
        if (n.kind == NodeKind::ImplBlock)
            f.impl_unsafe = n.props.is_unsafe;
        ctx.in_unsafe[id] = f.block_unsafe || f.fn_unsafe || f.impl_unsafe;
        if (n.kind == NodeKind::UnsafeBlock)
            f.block_unsafe = true; // applies to children, not the block itself
        for (NodeId c : n.children)
            self(self, c, f);
    };
    visit(visit, 0, Frame{false, false, false});
    return ctx;
}

struct InventoryOptions {
    bool assume_unknown_calls_unsafe = false;
};

namespace detail {

inline bool is_raw_pointer_type(const std::string& t) {
    return t.starts_with("*const") || t.starts_with("*mut");
}

/// Flow-insensitive binding table: params, annotated lets, and lets with a
/// syntactically evident initializer type, scoped per enclosing function.
struct BindingTable {
    // (enclosing function node, name) -> declared type text
    std::map<std::pair<NodeId, std::string>, std::string> types;

    static NodeId enclosing_fn(const SourceUnit& unit, NodeId id) {
        const SyntaxNode* fn = unit.find_ancestor(id, [](const SyntaxNode& a) {
            return a.kind == NodeKind::FunctionItem;
        });
        return fn ? fn->node_id : invalid_node;
    }

    explicit BindingTable(const SourceUnit& unit) {
        unit.walk([&](const SyntaxNode& n) {
            if (n.kind == NodeKind::FunctionItem) {
                for (const auto& [name, type] : n.props.fields)
                    types[{n.node_id, name}] = type;
            } else if (n.kind == NodeKind::LetBinding && !n.props.name.empty()) {
                const std::string& ty =
                    !n.props.type_text.empty() ? n.props.type_text : n.props.inferred_type_text;
                if (!ty.empty())
                    types[{enclosing_fn(unit, n.node_id), n.props.name}] = ty;
            } else if ((n.kind == NodeKind::StaticItem || n.kind == NodeKind::ConstItem) &&
                       !n.props.name.empty() && !n.props.type_text.empty()) {
                types[{invalid_node, n.props.name}] = n.props.type_text;
            }
        });
    }

    std::string lookup(const SourceUnit& unit, NodeId at, const std::string& name) const {
        NodeId fn = enclosing_fn(unit, at);
        auto it = types.find({fn, name});
        if (it != types.end())
            return it->second;
        it = types.find({invalid_node, name});
        return it != types.end() ? it->second : std::string();
    }
};

} // namespace detail

/// One entry per syntactic occurrence of the five unsafe operations.
/// `index` widens callee resolution to the whole analyzed set; when absent,
/// only the unit's own declarations are known.
inline std::vector<UnsafeOperation> inventory(const SourceUnit& unit, const UnsafeContextMap& ctx,
                                              const AnalysisIndex* index = nullptr,
                                              const InventoryOptions& options = {}) {
    std::vector<UnsafeOperation> ops;
    AnalysisIndex local;
    if (!index) {
        local.add_unit(unit);
        index = &local;
    }
    detail::BindingTable bindings(unit);

    auto enclosing_unsafe_span = [&](NodeId id) -> std::optional<Span> {
        // self-inclusive: the innermost node holding a token may itself be
        // the unsafe block
        const SyntaxNode& self = unit.node(id);
        if (self.kind == NodeKind::UnsafeBlock ||
            (self.kind == NodeKind::FunctionItem && self.props.is_unsafe))
            return self.span;
        const SyntaxNode* blk = unit.find_ancestor(id, [](const SyntaxNode& a) {
            return a.kind == NodeKind::UnsafeBlock;
        });
        if (blk)
            return blk->span;
        const SyntaxNode* fn = unit.find_ancestor(id, [](const SyntaxNode& a) {
            return a.kind == NodeKind::FunctionItem && a.props.is_unsafe;
        });
        if (fn)
            return fn->span;
        return std::nullopt;
    };
    auto in_unsafe_block = [&](NodeId id) {
        return unit.find_ancestor(id, [](const SyntaxNode& a) {
                   return a.kind == NodeKind::UnsafeBlock;
               }) != nullptr;
    };

    // mutable statics declared in this unit
    std::set<std::string> static_muts;
    std::vector<Span> static_decl_spans;
    unit.walk([&](const SyntaxNode& n) {
        if (n.kind == NodeKind::StaticItem && n.props.is_mut && !n.props.name.empty()) {
            static_muts.insert(n.props.name);
            static_decl_spans.push_back(n.span);
        }
    });

    unit.walk([&](const SyntaxNode& n) {
        switch (n.kind) {
            case NodeKind::DerefExpr: {
                if (n.props.operand_ident.empty())
                    break;
                std::string ty = bindings.lookup(unit, n.node_id, n.props.operand_ident);
                if (detail::is_raw_pointer_type(ty))
                    ops.push_back({UnsafeOperationKind::RawPointerDeref, n.span,
                                   enclosing_unsafe_span(n.node_id), n.node_id});
                break;
            }
            case NodeKind::CallExpr:
            case NodeKind::MethodCallExpr: {
                if (!ctx.node_in_unsafe(n.node_id))
                    break;
                std::string callee = n.kind == NodeKind::CallExpr
                                         ? AnalysisIndex::last_segment(n.props.path_text)
                                         : n.props.name;
                bool known = index->known_fn_names.count(callee) > 0;
                bool is_unsafe_callee = index->unsafe_fn_names.count(callee) > 0;
                if (is_unsafe_callee ||
                    (!known && options.assume_unknown_calls_unsafe && in_unsafe_block(n.node_id)))
                    ops.push_back({UnsafeOperationKind::UnsafeFunctionCall, n.span,
                                   enclosing_unsafe_span(n.node_id), n.node_id});
                break;
            }
            case NodeKind::ImplBlock: {
                if (n.props.is_unsafe)
                    ops.push_back({UnsafeOperationKind::UnsafeTraitImpl, n.span, std::nullopt,
                                   n.node_id});
                break;
            }
            case NodeKind::FieldAccessExpr: {
                if (n.props.operand_ident.empty())
                    break;
                std::string ty = AnalysisIndex::base_type_name(
                    bindings.lookup(unit, n.node_id, n.props.operand_ident));
                if (!ty.empty() && index->union_names.count(ty))
                    ops.push_back({UnsafeOperationKind::UnionFieldAccess, n.span,
                                   enclosing_unsafe_span(n.node_id), n.node_id});
                break;
            }
            default:
                break;
        }
    });

    // Mutable static reads/writes: token-level scan, skipping declarations,
    // attributes, macro arguments, paths, and field positions.
    if (!static_muts.empty()) {
        std::vector<Span> skip_spans = static_decl_spans;
        unit.walk([&](const SyntaxNode& n) {
            if (n.kind == NodeKind::Attribute || n.kind == NodeKind::MacroInvocation ||
                n.kind == NodeKind::UseDecl)
                skip_spans.push_back(n.span);
        });
        std::optional<LexError> err;
        std::vector<Token> toks = lex(unit.source, err);
        for (std::size_t i = 0; i < toks.size(); ++i) {
            const Token& t = toks[i];
            if (t.kind != TokenKind::Ident || !static_muts.count(t.text))
                continue;
            bool skip = false;
            for (const Span& s : skip_spans)
                if (s.byte_start <= t.byte_start && t.byte_end <= s.byte_end)
                    skip = true;
            // path segments and field accesses do not name the static itself
            if (i > 0 && (toks[i - 1].is_punct("::") || toks[i - 1].is_punct(".")))
                skip = true;
            if (i + 1 < toks.size() && toks[i + 1].is_punct("::"))
                skip = true;
            if (skip)
                continue;
            // locate the innermost node containing this token for context
            NodeId best = 0;
            std::size_t best_width = SIZE_MAX;
            for (const SyntaxNode& n : unit.nodes) {
                if (n.kind == NodeKind::Comment)
                    continue;
                if (n.span.byte_start <= t.byte_start && t.byte_end <= n.span.byte_end) {
                    std::size_t w = n.span.byte_end - n.span.byte_start;
                    if (w < best_width) {
                        best_width = w;
                        best = n.node_id;
                    }
                }
            }
            Span span = unit.lines.span(t.byte_start, t.byte_end);
            ops.push_back({UnsafeOperationKind::StaticMutAccess, span,
                           enclosing_unsafe_span(best), best});
        }
    }

    // deterministic order: by position, then kind
    std::sort(ops.begin(), ops.end(), [](const UnsafeOperation& a, const UnsafeOperation& b) {
        if (a.span.byte_start != b.span.byte_start)
            return a.span.byte_start < b.span.byte_start;
        return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    });
    return ops;
}

} // namespace misrust
