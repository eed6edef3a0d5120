#pragma once

// Construct tree for analyzed Rust source. Purely syntactic: node kinds name
// constructs of the analyzed language, props carry declared-type and path
// text verbatim. No name resolution, no type inference.

#include "misrust/span.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace misrust {

enum class NodeKind {
    File,
    FunctionItem,
    StructItem,
    EnumItem,
    UnionItem,
    TraitItem,
    ImplBlock,
    StaticItem,
    ConstItem,
    ModuleItem,
    UseDecl,
    Attribute,
    MacroInvocation,
    CastExpr,
    DerefExpr,
    CallExpr,
    MethodCallExpr,
    UnsafeBlock,
    ConstBlock,
    LetBinding,
    ComparisonExpr,
    FloatLiteral,
    FieldAccessExpr,
    Comment,
    Opaque,
};

inline const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::File: return "File";
        case NodeKind::FunctionItem: return "FunctionItem";
        case NodeKind::StructItem: return "StructItem";
        case NodeKind::EnumItem: return "EnumItem";
        case NodeKind::UnionItem: return "UnionItem";
        case NodeKind::TraitItem: return "TraitItem";
        case NodeKind::ImplBlock: return "ImplBlock";
        case NodeKind::StaticItem: return "StaticItem";
        case NodeKind::ConstItem: return "ConstItem";
        case NodeKind::ModuleItem: return "ModuleItem";
        case NodeKind::UseDecl: return "UseDecl";
        case NodeKind::Attribute: return "Attribute";
        case NodeKind::MacroInvocation: return "MacroInvocation";
        case NodeKind::CastExpr: return "CastExpr";
        case NodeKind::DerefExpr: return "DerefExpr";
        case NodeKind::CallExpr: return "CallExpr";
        case NodeKind::MethodCallExpr: return "MethodCallExpr";
        case NodeKind::UnsafeBlock: return "UnsafeBlock";
        case NodeKind::ConstBlock: return "ConstBlock";
        case NodeKind::LetBinding: return "LetBinding";
        case NodeKind::ComparisonExpr: return "ComparisonExpr";
        case NodeKind::FloatLiteral: return "FloatLiteral";
        case NodeKind::FieldAccessExpr: return "FieldAccessExpr";
        case NodeKind::Comment: return "Comment";
        case NodeKind::Opaque: return "Opaque";
    }
    return "?";
}

using NodeId = std::uint32_t;
inline constexpr NodeId invalid_node = static_cast<NodeId>(-1);

/// Kind-specific attributes. One bag shared by all kinds keeps the arena flat;
/// unused fields stay empty.
struct NodeProps {
    std::string name;                 // item/binding/method/macro name
    std::string path_text;            // use path, attribute path, callee path
    std::string text;                 // comment text, macro args, operator, ...
    std::string type_text;            // declared type / cast target / self type
    std::string trait_path;           // ImplBlock trait path ("" = inherent)
    std::string operand_ident;        // root identifier of an operand / comparison lhs
    std::string operand_ident_rhs;    // comparison rhs root identifier
    std::string inferred_type_text;   // binding type inferred from the initializer
    bool lhs_is_float = false;        // comparison lhs is a float literal
    bool rhs_is_float = false;
    bool is_unsafe = false;
    bool is_main = false;
    bool is_mut = false;
    bool is_glob = false;
    bool is_inner = false;            // #![...] vs #[...]
    bool is_line = false;             // line vs block comment
    bool operand_is_raw_cast = false; // cast operand was itself a raw-pointer cast
    std::optional<std::string> rename;
    // struct/union fields: (name, declared type text)
    std::vector<std::pair<std::string, std::string>> fields;
};

struct SyntaxNode {
    NodeId node_id = 0;
    NodeKind kind = NodeKind::Opaque;
    Span span;
    NodeId parent = invalid_node;
    std::vector<NodeId> children;
    NodeProps props;
};

/// Parsed representation of one source file. Immutable after construction.
struct SourceUnit {
    std::string path;
    std::string source;
    LineTable lines;
    std::vector<SyntaxNode> nodes; // arena; node_ids are dense indices, root = 0
    std::vector<NodeId> comments;  // ordered Comment nodes (also in the arena)

    const SyntaxNode& root() const { return nodes.front(); }
    const SyntaxNode& node(NodeId id) const { return nodes[id]; }

    std::string_view text_of(const SyntaxNode& n) const {
        return std::string_view(source).substr(n.span.byte_start, n.span.byte_end - n.span.byte_start);
    }

    /// Depth-first visit of the item tree (comments are not visited).
    template <typename F>
    void walk(F&& fn) const {
        walk_from(0, fn);
    }

    template <typename F>
    void walk_from(NodeId id, F&& fn) const {
        fn(nodes[id]);
        for (NodeId c : nodes[id].children)
            walk_from(c, fn);
    }

    /// Nearest ancestor (excluding `id` itself) satisfying the predicate.
    template <typename Pred>
    const SyntaxNode* find_ancestor(NodeId id, Pred&& pred) const {
        NodeId cur = nodes[id].parent;
        while (cur != invalid_node) {
            if (pred(nodes[cur]))
                return &nodes[cur];
            cur = nodes[cur].parent;
        }
        return nullptr;
    }
};

/// The line comment that ends on the line directly above `node`, if any.
inline const SyntaxNode* comment_before(const SourceUnit& unit, const SyntaxNode& node) {
    if (node.span.line_start <= 1)
        return nullptr;
    std::size_t want = node.span.line_start - 1;
    for (auto it = unit.comments.rbegin(); it != unit.comments.rend(); ++it) {
        const SyntaxNode& c = unit.nodes[*it];
        if (!c.props.is_line)
            continue;
        if (c.span.line_end == want)
            return &c;
        if (c.span.line_end < want)
            break; // comments are ordered; nothing earlier can match
    }
    return nullptr;
}

} // namespace misrust
