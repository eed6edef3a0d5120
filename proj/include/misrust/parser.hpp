#pragma once

// Construct-tree parser for Rust 2024 source. Recognizes the node kinds the
// checks need and degrades everything else to Opaque nodes with correct
// spans. Parsing is syntactic only: paths and types are recorded as
// normalized text, macros are never expanded.

#include "misrust/ast.hpp"
#include "misrust/lexer.hpp"

#include <cassert>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace misrust {

struct ParseError : std::runtime_error {
    Span span;
    std::string raw_message;
    ParseError(Span s, std::string msg, const std::string& path)
        : std::runtime_error(path + ":" + std::to_string(s.line_start) + ":" +
                             std::to_string(s.col_start) + ": " + msg),
          span(s), raw_message(std::move(msg)) {}
};

namespace detail {

inline bool is_item_keyword(const Token& t) {
    if (t.kind != TokenKind::Ident)
        return false;
    static const char* kws[] = {"fn", "struct", "enum", "union", "trait", "impl",
                                "mod", "use", "static", "type", "macro_rules", "extern"};
    for (const char* k : kws)
        if (t.text == k)
            return true;
    return false;
}

inline bool is_expr_keyword(std::string_view s) {
    static const char* kws[] = {"if", "else", "while", "loop", "for", "in", "match",
                                "return", "break", "continue", "move", "mut", "ref",
                                "await", "dyn", "box", "where", "yield", "as", "let"};
    for (const char* k : kws)
        if (s == k)
            return true;
    return false;
}

} // namespace detail

class Parser {
public:
    static SourceUnit parse(std::string path, std::string source) {
        Parser p(std::move(path), std::move(source));
        p.run();
        return std::move(p.unit_);
    }

private:
    Parser(std::string path, std::string source) {
        unit_.path = std::move(path);
        unit_.source = std::move(source);
        unit_.lines = LineTable(unit_.source);
    }

    // ---- driver ------------------------------------------------------------

    void run() {
        std::optional<LexError> lex_err;
        std::vector<Token> all = lex(unit_.source, lex_err);
        if (lex_err)
            fail(lex_err->byte, lex_err->byte + 1, lex_err->message);

        for (const Token& t : all) {
            if (t.is_comment())
                comment_tokens_.push_back(t);
            else
                toks_.push_back(t);
        }
        match_brackets();

        NodeId root = new_node(NodeKind::File, 0, unit_.source.size(), invalid_node);
        parse_items(0, toks_.size(), root);
        finish_span(root, 0, unit_.source.size());

        for (const Token& c : comment_tokens_) {
            NodeId id = new_node(NodeKind::Comment, c.byte_start, c.byte_end, invalid_node);
            unit_.nodes[id].props.text = c.text;
            unit_.nodes[id].props.is_line = c.kind == TokenKind::LineComment;
            unit_.comments.push_back(id);
        }
    }

    [[noreturn]] void fail(std::size_t byte_start, std::size_t byte_end, std::string msg) {
        throw ParseError(unit_.lines.span(byte_start, byte_end), std::move(msg), unit_.path);
    }

    void match_brackets() {
        match_.assign(toks_.size(), SIZE_MAX);
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.is_open()) {
                stack.push_back(i);
            } else if (t.is_close()) {
                if (stack.empty())
                    fail(t.byte_start, t.byte_end, "unmatched closing delimiter `" + t.text + "`");
                const Token& open = toks_[stack.back()];
                bool ok = (open.kind == TokenKind::OpenParen && t.kind == TokenKind::CloseParen) ||
                          (open.kind == TokenKind::OpenBracket && t.kind == TokenKind::CloseBracket) ||
                          (open.kind == TokenKind::OpenBrace && t.kind == TokenKind::CloseBrace);
                if (!ok)
                    fail(open.byte_start, t.byte_end,
                         "mismatched delimiters `" + open.text + "` and `" + t.text + "`");
                match_[stack.back()] = i;
                match_[i] = stack.back();
                stack.pop_back();
            }
        }
        if (!stack.empty()) {
            const Token& open = toks_[stack.back()];
            fail(open.byte_start, open.byte_end, "unclosed delimiter `" + open.text + "`");
        }
    }

    // ---- arena helpers -------------------------------------------------------

    NodeId new_node(NodeKind kind, std::size_t byte_start, std::size_t byte_end, NodeId parent) {
        SyntaxNode n;
        n.node_id = static_cast<NodeId>(unit_.nodes.size());
        n.kind = kind;
        n.span = unit_.lines.span(byte_start, byte_end);
        n.parent = parent;
        unit_.nodes.push_back(std::move(n));
        NodeId id = unit_.nodes.back().node_id;
        if (parent != invalid_node)
            unit_.nodes[parent].children.push_back(id);
        return id;
    }

    void finish_span(NodeId id, std::size_t byte_start, std::size_t byte_end) {
        unit_.nodes[id].span = unit_.lines.span(byte_start, byte_end);
    }

    void reparent(NodeId child, NodeId new_parent) {
        NodeId old = unit_.nodes[child].parent;
        if (old == new_parent)
            return;
        if (old != invalid_node) {
            auto& kids = unit_.nodes[old].children;
            for (auto it = kids.begin(); it != kids.end(); ++it) {
                if (*it == child) {
                    kids.erase(it);
                    break;
                }
            }
        }
        unit_.nodes[child].parent = new_parent;
        unit_.nodes[new_parent].children.push_back(child);
    }

    // ---- token helpers -------------------------------------------------------

    const Token& tok(std::size_t i) const { return toks_[i]; }
    bool at(std::size_t i, std::size_t hi) const { return i < hi; }

    std::size_t skip_group(std::size_t i) const { return match_[i] + 1; }

    /// `i` at `<` (or `<<`); returns the index past the matching closer.
    /// Handles `>>` closing two levels; bracketed groups are skipped whole.
    std::size_t skip_angles(std::size_t i, std::size_t hi) const {
        int depth = 0;
        while (i < hi) {
            const Token& t = toks_[i];
            if (t.is_open()) {
                i = match_[i] + 1;
                continue;
            }
            if (t.is_punct("<")) depth += 1;
            else if (t.is_punct("<<")) depth += 2;
            else if (t.is_punct(">")) depth -= 1;
            else if (t.is_punct(">>")) depth -= 2;
            else if (t.is_punct(">=")) depth -= 1;
            ++i;
            if (depth <= 0)
                return i;
        }
        return i;
    }

    std::size_t find_punct(std::size_t i, std::size_t hi, std::string_view p) const {
        while (i < hi) {
            const Token& t = toks_[i];
            if (t.is_open()) {
                i = match_[i] + 1;
                continue;
            }
            if (t.is_punct(p))
                return i;
            ++i;
        }
        return hi;
    }

    /// End of the statement starting at `i`: past the terminating `;`, or
    /// after a statement-final block (`if`/`match`/`loop`/bare block) unless
    /// the block is continued by `else`, an operator, `.`/`?`, or `as`.
    std::size_t statement_end(std::size_t i, std::size_t hi) const {
        while (i < hi) {
            const Token& t = tok(i);
            if (t.is_punct(";"))
                return i + 1;
            if (t.kind == TokenKind::OpenBrace) {
                i = match_[i] + 1;
                if (i >= hi)
                    return hi;
                const Token& nx = tok(i);
                if (nx.is_ident("else") || nx.is_ident("as"))
                    continue;
                if (nx.is_punct(";"))
                    return i + 1;
                if (nx.kind == TokenKind::Punct &&
                    (nx.text == "." || nx.text == "?" || nx.text == "==" || nx.text == "!=" ||
                     nx.text == "<=" || nx.text == ">=" || nx.text == "&&" || nx.text == "||" ||
                     nx.text == "+" || nx.text == "-" || nx.text == "*" || nx.text == "/" ||
                     nx.text == "%" || nx.text == "&" || nx.text == "|" || nx.text == "^" ||
                     nx.text == "<<" || nx.text == ">>"))
                    continue;
                return i;
            }
            i = t.is_open() ? skip_group(i) : i + 1;
        }
        return hi;
    }

    // ---- type text -----------------------------------------------------------

    /// End index (exclusive) of a type starting at `i`.
    std::size_t type_end(std::size_t i, std::size_t hi) const {
        std::size_t start = i;
        while (i < hi) {
            const Token& t = toks_[i];
            if (t.kind == TokenKind::OpenBrace)
                break;
            if (t.kind == TokenKind::OpenParen || t.kind == TokenKind::OpenBracket) {
                i = match_[i] + 1;
                continue;
            }
            if (t.is_close() || t.is_punct(";") || t.is_punct(",") || t.is_punct("=") ||
                t.is_punct("==") || t.is_punct("!=") || t.is_punct("<=") || t.is_punct(">=") ||
                t.is_punct("?") || t.is_punct(".") || t.is_punct("=>") || t.is_punct("#"))
                break;
            if (t.is_ident("as") || t.is_ident("where") || t.is_ident("else"))
                break;
            if (t.kind == TokenKind::Ident && detail::is_expr_keyword(t.text) &&
                !t.is_ident("dyn") && !t.is_ident("mut"))
                break;
            if (t.is_punct("<")) {
                i = skip_angles(i, hi);
                continue;
            }
            if (t.is_punct(">") || t.is_punct(">>"))
                break; // closes an enclosing generic list
            if (t.kind == TokenKind::Ident || t.kind == TokenKind::Lifetime ||
                t.kind == TokenKind::IntLiteral || t.is_punct("::") || t.is_punct("&") ||
                t.is_punct("&&") || t.is_punct("*") || t.is_punct("+") || t.is_punct("!") ||
                t.is_punct("->")) {
                ++i;
                continue;
            }
            break;
        }
        return i > start ? i : (start < hi ? start + 1 : start);
    }

    /// Normalized text of tokens [lo, hi): `* const u8` -> `*const u8`,
    /// `Vec < i32 >` -> `Vec<i32>`, `a :: b` -> `a::b`.
    std::string normalize_tokens(std::size_t lo, std::size_t hi) const {
        std::string out;
        auto last = [&]() -> char { return out.empty() ? '\0' : out.back(); };
        auto sep_needed = [&]() {
            char c = last();
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '>' ||
                   c == ')' || c == ']';
        };
        for (std::size_t i = lo; i < hi && i < toks_.size(); ++i) {
            const Token& t = toks_[i];
            if (t.kind == TokenKind::Lifetime)
                continue;
            if (t.is_punct("*") && i + 1 < hi &&
                (toks_[i + 1].is_ident("const") || toks_[i + 1].is_ident("mut"))) {
                if (sep_needed())
                    out += ' ';
                out += toks_[i + 1].is_ident("const") ? "*const " : "*mut ";
                ++i;
                continue;
            }
            if (t.is_punct("::")) { out += "::"; continue; }
            if (t.is_punct(",")) { out += ", "; continue; }
            if (t.is_punct("+")) { out += " + "; continue; }
            if (t.is_punct("->")) { out += " -> "; continue; }
            if (t.is_punct(";")) { out += "; "; continue; } // array types [T; N]
            if (t.is_punct("<") || t.is_punct(">") || t.is_punct(">>") || t.is_punct("!") ||
                t.kind == TokenKind::OpenParen || t.kind == TokenKind::CloseParen ||
                t.kind == TokenKind::OpenBracket || t.kind == TokenKind::CloseBracket) {
                out += t.text;
                continue;
            }
            if (t.is_punct("&") || t.is_punct("&&")) {
                if (sep_needed())
                    out += ' ';
                out += t.text;
                continue;
            }
            if (sep_needed())
                out += ' ';
            out += t.text;
        }
        while (!out.empty() && out.back() == ' ')
            out.pop_back();
        return out;
    }

    std::string parse_type_text(std::size_t& i, std::size_t hi) {
        std::size_t end = type_end(i, hi);
        std::string text = normalize_tokens(i, end);
        i = end;
        return text;
    }

    // ---- items -----------------------------------------------------------------

    void parse_items(std::size_t lo, std::size_t hi, NodeId parent) {
        std::size_t i = lo;
        while (i < hi) {
            std::size_t next = parse_item(i, hi, parent);
            assert(next > i);
            if (next <= i)
                next = i + 1;
            i = next;
        }
    }

    std::size_t parse_attributes(std::size_t i, std::size_t hi, NodeId parent,
                                 std::vector<NodeId>& pending) {
        while (at(i, hi) && tok(i).is_punct("#")) {
            std::size_t start = i;
            bool inner = at(i + 1, hi) && tok(i + 1).is_punct("!");
            std::size_t open = inner ? i + 2 : i + 1;
            if (!at(open, hi) || tok(open).kind != TokenKind::OpenBracket)
                break;
            std::size_t close = match_[open];
            std::size_t p = open + 1;
            std::string path;
            while (p < close && (tok(p).kind == TokenKind::Ident || tok(p).is_punct("::"))) {
                path += tok(p).text;
                ++p;
            }
            NodeId id = new_node(NodeKind::Attribute, tok(start).byte_start, tok(close).byte_end, parent);
            unit_.nodes[id].props.path_text = path;
            unit_.nodes[id].props.is_inner = inner;
            if (p < close)
                unit_.nodes[id].props.text = std::string(unit_.source.substr(
                    tok(p).byte_start, tok(close).byte_start - tok(p).byte_start));
            if (!inner)
                pending.push_back(id);
            i = close + 1;
        }
        return i;
    }

    /// Index past any attributes starting at `i`, without creating nodes.
    std::size_t probe_attributes(std::size_t i, std::size_t hi) const {
        while (at(i, hi) && tok(i).is_punct("#")) {
            std::size_t open = at(i + 1, hi) && tok(i + 1).is_punct("!") ? i + 2 : i + 1;
            if (!at(open, hi) || tok(open).kind != TokenKind::OpenBracket)
                break;
            i = match_[open] + 1;
        }
        return i;
    }

    std::size_t parse_item(std::size_t i, std::size_t hi, NodeId parent) {
        std::vector<NodeId> attrs;
        std::size_t attr_start = i;
        i = parse_attributes(i, hi, parent, attrs);
        if (i >= hi)
            return hi;
        std::size_t item_start_byte = attrs.empty() ? tok(i).byte_start : tok(attr_start).byte_start;

        if (tok(i).is_ident("pub")) {
            ++i;
            if (at(i, hi) && tok(i).kind == TokenKind::OpenParen)
                i = skip_group(i);
        }
        if (i >= hi)
            return hi;

        bool is_unsafe = false;
        while (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            const std::string& s = tok(i).text;
            if (s == "unsafe") {
                if (at(i + 1, hi) && tok(i + 1).kind == TokenKind::OpenBrace)
                    break; // `unsafe {` block
                is_unsafe = true;
                ++i;
                continue;
            }
            if (s == "async" || s == "default") {
                ++i;
                continue;
            }
            if (s == "const") {
                if (at(i + 1, hi) &&
                    (tok(i + 1).is_ident("fn") || tok(i + 1).is_ident("unsafe") ||
                     tok(i + 1).is_ident("extern") || tok(i + 1).is_ident("async"))) {
                    ++i; // `const fn`
                    continue;
                }
                break; // const item / const block
            }
            if (s == "extern") {
                if (at(i + 1, hi) && tok(i + 1).kind == TokenKind::StrLiteral && at(i + 2, hi) &&
                    tok(i + 2).is_ident("fn")) {
                    i += 2; // `extern "C" fn`
                    continue;
                }
                break;
            }
            break;
        }
        if (i >= hi)
            return hi;

        const Token& head = tok(i);
        if (head.kind == TokenKind::Ident) {
            const std::string& kw = head.text;
            if (kw == "fn")
                return parse_fn(i, hi, parent, attrs, item_start_byte, is_unsafe);
            if (kw == "struct" || kw == "union" || kw == "enum")
                return parse_struct_like(i, hi, parent, attrs, item_start_byte, kw);
            if (kw == "trait")
                return parse_trait(i, hi, parent, attrs, item_start_byte, is_unsafe);
            if (kw == "impl")
                return parse_impl(i, hi, parent, attrs, item_start_byte, is_unsafe);
            if (kw == "static")
                return parse_static(i, hi, parent, attrs, item_start_byte);
            if (kw == "const") {
                if (at(i + 1, hi) && tok(i + 1).kind == TokenKind::OpenBrace)
                    return parse_const_block(i, hi, parent);
                return parse_const_item(i, hi, parent, attrs, item_start_byte);
            }
            if (kw == "mod")
                return parse_mod(i, hi, parent, attrs, item_start_byte);
            if (kw == "use")
                return parse_use(i, hi, parent, attrs, item_start_byte);
            if (kw == "unsafe") { // `unsafe { ... }` expression at item level
                ExprInfo info;
                return parse_expr_range(i, statement_end(i, hi), parent, &info);
            }
            if (kw == "type" || kw == "macro_rules" || kw == "extern")
                return parse_opaque(i, hi, parent, attrs, item_start_byte);
            if (at(i + 1, hi) && tok(i + 1).is_punct("!") && at(i + 2, hi) && tok(i + 2).is_open())
                return parse_macro_item(i, hi, parent, attrs);
        }
        return parse_opaque(i, hi, parent, attrs, item_start_byte);
    }

    void attach(std::vector<NodeId>& attrs, NodeId item) {
        for (NodeId a : attrs)
            reparent(a, item);
    }

    std::size_t parse_fn(std::size_t i, std::size_t hi, NodeId parent,
                         std::vector<NodeId>& attrs, std::size_t start_byte, bool is_unsafe) {
        ++i; // `fn`
        std::string name;
        if (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            name = tok(i).text;
            ++i;
        }
        if (at(i, hi) && tok(i).is_punct("<"))
            i = skip_angles(i, hi);

        NodeId fn = new_node(NodeKind::FunctionItem, start_byte, start_byte, parent);
        attach(attrs, fn);
        {
            auto& props = unit_.nodes[fn].props;
            props.name = name;
            props.is_unsafe = is_unsafe;
            NodeKind pk = parent == invalid_node ? NodeKind::File : unit_.nodes[parent].kind;
            props.is_main = name == "main" && (pk == NodeKind::File || pk == NodeKind::ModuleItem);
        }

        if (at(i, hi) && tok(i).kind == TokenKind::OpenParen) {
            std::size_t close = match_[i];
            parse_params(i + 1, close, fn);
            i = close + 1;
        }
        if (at(i, hi) && tok(i).is_punct("->")) {
            ++i;
            (void)parse_type_text(i, hi);
        }
        while (at(i, hi) && tok(i).kind != TokenKind::OpenBrace && !tok(i).is_punct(";"))
            i = tok(i).is_open() ? skip_group(i) : i + 1;

        std::size_t end_byte = start_byte;
        if (at(i, hi) && tok(i).kind == TokenKind::OpenBrace) {
            std::size_t close = match_[i];
            parse_block_contents(i + 1, close, fn);
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (at(i, hi) && tok(i).is_punct(";")) {
            end_byte = tok(i).byte_end;
            ++i;
        } else {
            end_byte = i > 0 ? tok(i - 1).byte_end : start_byte;
        }
        finish_span(fn, start_byte, end_byte);
        return i;
    }

    void parse_params(std::size_t lo, std::size_t hi, NodeId fn) {
        std::size_t i = lo;
        while (i < hi) {
            std::size_t colon = find_punct(i, hi, ":");
            std::size_t comma = find_punct(i, hi, ",");
            if (colon >= comma) {
                if (comma >= hi)
                    break;
                i = comma + 1; // self / pattern-only parameter
                continue;
            }
            std::string name;
            for (std::size_t p = i; p < colon; ++p) {
                const Token& t = tok(p);
                if (t.kind == TokenKind::Ident && !t.is_ident("mut") && !t.is_ident("ref") &&
                    !t.is_ident("self")) {
                    name = t.text;
                    break;
                }
            }
            std::size_t ty = colon + 1;
            std::string type = parse_type_text(ty, hi);
            if (!name.empty())
                unit_.nodes[fn].props.fields.emplace_back(name, type);
            i = find_punct(ty, hi, ",");
            if (i < hi)
                ++i;
        }
    }

    std::size_t parse_struct_like(std::size_t i, std::size_t hi, NodeId parent,
                                  std::vector<NodeId>& attrs, std::size_t start_byte,
                                  const std::string& kw) {
        NodeKind kind = kw == "struct" ? NodeKind::StructItem
                        : kw == "union" ? NodeKind::UnionItem
                                        : NodeKind::EnumItem;
        ++i;
        std::string name;
        if (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            name = tok(i).text;
            ++i;
        }
        if (at(i, hi) && tok(i).is_punct("<"))
            i = skip_angles(i, hi);
        if (at(i, hi) && tok(i).is_ident("where"))
            while (at(i, hi) && tok(i).kind != TokenKind::OpenBrace && !tok(i).is_punct(";"))
                i = tok(i).is_open() ? skip_group(i) : i + 1;

        NodeId item = new_node(kind, start_byte, start_byte, parent);
        attach(attrs, item);
        unit_.nodes[item].props.name = name;

        std::size_t end_byte = start_byte;
        if (at(i, hi) && tok(i).kind == TokenKind::OpenBrace) {
            std::size_t close = match_[i];
            if (kind != NodeKind::EnumItem)
                parse_fields(i + 1, close, item);
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (at(i, hi) && tok(i).kind == TokenKind::OpenParen) {
            std::size_t close = match_[i];
            std::size_t p = i + 1;
            int idx = 0;
            while (p < close) {
                while (p < close && tok(p).is_ident("pub"))
                    p = at(p + 1, close) && tok(p + 1).kind == TokenKind::OpenParen
                            ? skip_group(p + 1)
                            : p + 1;
                if (p >= close)
                    break;
                std::string type = parse_type_text(p, close);
                unit_.nodes[item].props.fields.emplace_back(std::to_string(idx++), type);
                p = find_punct(p, close, ",");
                if (p < close)
                    ++p;
            }
            i = close + 1;
            end_byte = tok(close).byte_end;
            if (at(i, hi) && tok(i).is_punct(";")) {
                end_byte = tok(i).byte_end;
                ++i;
            }
        } else if (at(i, hi) && tok(i).is_punct(";")) {
            end_byte = tok(i).byte_end;
            ++i;
        } else {
            end_byte = i > 0 ? tok(i - 1).byte_end : start_byte;
        }
        finish_span(item, start_byte, end_byte);
        return i;
    }

    void parse_fields(std::size_t lo, std::size_t hi, NodeId item) {
        std::size_t i = lo;
        while (i < hi) {
            std::vector<NodeId> attrs;
            i = parse_attributes(i, hi, item, attrs);
            while (i < hi && tok(i).is_ident("pub"))
                i = at(i + 1, hi) && tok(i + 1).kind == TokenKind::OpenParen ? skip_group(i + 1)
                                                                             : i + 1;
            if (i >= hi)
                break;
            if (tok(i).kind != TokenKind::Ident) {
                ++i;
                continue;
            }
            std::string name = tok(i).text;
            ++i;
            if (i < hi && tok(i).is_punct(":")) {
                ++i;
                std::string type = parse_type_text(i, hi);
                unit_.nodes[item].props.fields.emplace_back(name, type);
            }
            i = find_punct(i, hi, ",");
            if (i < hi)
                ++i;
        }
    }

    std::size_t parse_trait(std::size_t i, std::size_t hi, NodeId parent,
                            std::vector<NodeId>& attrs, std::size_t start_byte, bool is_unsafe) {
        ++i;
        std::string name;
        if (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            name = tok(i).text;
            ++i;
        }
        NodeId item = new_node(NodeKind::TraitItem, start_byte, start_byte, parent);
        attach(attrs, item);
        unit_.nodes[item].props.name = name;
        unit_.nodes[item].props.is_unsafe = is_unsafe;
        while (at(i, hi) && tok(i).kind != TokenKind::OpenBrace && !tok(i).is_punct(";")) {
            if (tok(i).is_punct("<")) {
                i = skip_angles(i, hi);
                continue;
            }
            i = tok(i).is_open() ? skip_group(i) : i + 1;
        }
        std::size_t end_byte = start_byte;
        if (at(i, hi) && tok(i).kind == TokenKind::OpenBrace) {
            std::size_t close = match_[i];
            parse_items(i + 1, close, item);
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (at(i, hi)) {
            end_byte = tok(i).byte_end;
            ++i;
        }
        finish_span(item, start_byte, end_byte);
        return i;
    }

    std::size_t parse_impl(std::size_t i, std::size_t hi, NodeId parent,
                           std::vector<NodeId>& attrs, std::size_t start_byte, bool is_unsafe) {
        ++i;
        if (at(i, hi) && tok(i).is_punct("<"))
            i = skip_angles(i, hi);
        std::size_t head_lo = i;
        std::size_t for_pos = SIZE_MAX;
        while (at(i, hi) && tok(i).kind != TokenKind::OpenBrace && !tok(i).is_ident("where") &&
               !tok(i).is_punct(";")) {
            if (tok(i).is_ident("for") && for_pos == SIZE_MAX) {
                for_pos = i;
                ++i;
                continue;
            }
            if (tok(i).is_punct("<")) {
                i = skip_angles(i, hi);
                continue;
            }
            i = tok(i).is_open() ? skip_group(i) : i + 1;
        }
        std::size_t head_hi = i;
        while (at(i, hi) && tok(i).kind != TokenKind::OpenBrace && !tok(i).is_punct(";"))
            i = tok(i).is_open() ? skip_group(i) : i + 1;

        NodeId item = new_node(NodeKind::ImplBlock, start_byte, start_byte, parent);
        attach(attrs, item);
        {
            auto& props = unit_.nodes[item].props;
            props.is_unsafe = is_unsafe;
            if (for_pos != SIZE_MAX) {
                props.trait_path = normalize_tokens(head_lo, for_pos);
                props.type_text = normalize_tokens(for_pos + 1, head_hi);
            } else {
                props.type_text = normalize_tokens(head_lo, head_hi);
            }
        }

        std::size_t end_byte = start_byte;
        if (at(i, hi) && tok(i).kind == TokenKind::OpenBrace) {
            std::size_t close = match_[i];
            parse_items(i + 1, close, item);
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (at(i, hi)) {
            end_byte = tok(i).byte_end;
            ++i;
        }
        finish_span(item, start_byte, end_byte);
        return i;
    }

    std::size_t parse_static(std::size_t i, std::size_t hi, NodeId parent,
                             std::vector<NodeId>& attrs, std::size_t start_byte) {
        ++i;
        bool is_mut = at(i, hi) && tok(i).is_ident("mut");
        if (is_mut)
            ++i;
        std::string name;
        if (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            name = tok(i).text;
            ++i;
        }
        NodeId item = new_node(NodeKind::StaticItem, start_byte, start_byte, parent);
        attach(attrs, item);
        unit_.nodes[item].props.name = name;
        unit_.nodes[item].props.is_mut = is_mut;
        if (at(i, hi) && tok(i).is_punct(":")) {
            ++i;
            unit_.nodes[item].props.type_text = parse_type_text(i, hi);
        }
        std::size_t semi = find_punct(i, hi, ";");
        if (at(i, hi) && tok(i).is_punct("=")) {
            ExprInfo info;
            parse_expr_range(i + 1, semi, item, &info);
        }
        std::size_t end_byte = semi < hi ? tok(semi).byte_end
                                         : (semi > 0 ? tok(semi - 1).byte_end : start_byte);
        finish_span(item, start_byte, end_byte);
        return semi < hi ? semi + 1 : hi;
    }

    std::size_t parse_const_item(std::size_t i, std::size_t hi, NodeId parent,
                                 std::vector<NodeId>& attrs, std::size_t start_byte) {
        ++i; // `const`
        std::string name;
        if (at(i, hi) && (tok(i).kind == TokenKind::Ident || tok(i).is_punct("_"))) {
            name = tok(i).text;
            ++i;
        }
        NodeId item = new_node(NodeKind::ConstItem, start_byte, start_byte, parent);
        attach(attrs, item);
        unit_.nodes[item].props.name = name;
        if (at(i, hi) && tok(i).is_punct(":")) {
            ++i;
            unit_.nodes[item].props.type_text = parse_type_text(i, hi);
        }
        std::size_t semi = find_punct(i, hi, ";");
        if (at(i, hi) && tok(i).is_punct("=")) {
            ExprInfo info;
            parse_expr_range(i + 1, semi, item, &info);
        }
        std::size_t end_byte = semi < hi ? tok(semi).byte_end
                                         : (semi > 0 ? tok(semi - 1).byte_end : start_byte);
        finish_span(item, start_byte, end_byte);
        return semi < hi ? semi + 1 : hi;
    }

    std::size_t parse_const_block(std::size_t i, std::size_t hi, NodeId parent) {
        (void)hi;
        std::size_t close = match_[i + 1];
        NodeId blk = new_node(NodeKind::ConstBlock, tok(i).byte_start, tok(close).byte_end, parent);
        parse_block_contents(i + 2, close, blk);
        return close + 1;
    }

    std::size_t parse_mod(std::size_t i, std::size_t hi, NodeId parent,
                          std::vector<NodeId>& attrs, std::size_t start_byte) {
        ++i;
        std::string name;
        if (at(i, hi) && tok(i).kind == TokenKind::Ident) {
            name = tok(i).text;
            ++i;
        }
        NodeId item = new_node(NodeKind::ModuleItem, start_byte, start_byte, parent);
        attach(attrs, item);
        unit_.nodes[item].props.name = name;
        std::size_t end_byte = start_byte;
        if (at(i, hi) && tok(i).kind == TokenKind::OpenBrace) {
            std::size_t close = match_[i];
            parse_items(i + 1, close, item);
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (at(i, hi) && tok(i).is_punct(";")) {
            end_byte = tok(i).byte_end;
            ++i;
        }
        finish_span(item, start_byte, end_byte);
        return i;
    }

    std::size_t parse_use(std::size_t i, std::size_t hi, NodeId parent,
                          std::vector<NodeId>& attrs, std::size_t start_byte) {
        ++i; // `use`
        std::size_t semi = find_punct(i, hi, ";");
        std::size_t end_byte = semi < hi ? tok(semi).byte_end
                                         : (semi > i ? tok(semi - 1).byte_end : start_byte);
        std::vector<NodeId> leaves;
        parse_use_tree(i, semi, "", parent, start_byte, end_byte, leaves);
        if (leaves.empty()) {
            NodeId item = new_node(NodeKind::UseDecl, start_byte, end_byte, parent);
            attach(attrs, item);
        } else {
            for (NodeId l : leaves)
                attach(attrs, l);
        }
        return semi < hi ? semi + 1 : hi;
    }

    /// Flattens grouped use trees: one UseDecl per leaf path, each spanning
    /// the whole `use` statement.
    void parse_use_tree(std::size_t lo, std::size_t hi, std::string prefix, NodeId parent,
                        std::size_t start_byte, std::size_t end_byte, std::vector<NodeId>& out) {
        std::size_t i = lo;
        std::string path = prefix;
        bool emitted_for_path = false;
        auto emit = [&](const std::string& p, bool glob) {
            NodeId leaf = new_node(NodeKind::UseDecl, start_byte, end_byte, parent);
            unit_.nodes[leaf].props.path_text = p;
            unit_.nodes[leaf].props.is_glob = glob;
            out.push_back(leaf);
            emitted_for_path = true;
        };
        while (i < hi) {
            const Token& t = tok(i);
            if (t.kind == TokenKind::OpenBrace) {
                std::size_t close = match_[i];
                std::size_t s = i + 1;
                while (s < close) {
                    std::size_t comma = find_punct(s, close, ",");
                    parse_use_tree(s, comma, path, parent, start_byte, end_byte, out);
                    s = comma < close ? comma + 1 : close;
                }
                emitted_for_path = true; // the group covered this prefix
                i = close + 1;
                continue;
            }
            if (t.is_punct("*")) {
                emit(path + "*", true);
                ++i;
                continue;
            }
            if (t.is_ident("as")) {
                if (!emitted_for_path)
                    emit(path, false);
                if (at(i + 1, hi) && tok(i + 1).kind == TokenKind::Ident && !out.empty())
                    unit_.nodes[out.back()].props.rename = tok(i + 1).text;
                i += 2;
                continue;
            }
            if (t.kind == TokenKind::Ident || t.is_punct("::")) {
                path += t.text;
                emitted_for_path = false;
                ++i;
                continue;
            }
            if (t.is_punct(",")) {
                if (!emitted_for_path && path != prefix)
                    emit(path, false);
                path = prefix;
                emitted_for_path = false;
                ++i;
                continue;
            }
            ++i;
        }
        if (!emitted_for_path && path != prefix && !path.empty())
            emit(path, false);
    }

    std::size_t parse_macro_item(std::size_t i, std::size_t hi, NodeId parent,
                                 std::vector<NodeId>& attrs) {
        std::size_t next = parse_macro_invocation(i, hi, parent);
        if (!unit_.nodes.empty() && unit_.nodes.back().kind == NodeKind::MacroInvocation)
            attach(attrs, unit_.nodes.back().node_id);
        return next;
    }

    std::size_t parse_opaque(std::size_t i, std::size_t hi, NodeId parent,
                             std::vector<NodeId>& attrs, std::size_t start_byte) {
        std::size_t end = i;
        while (end < hi) {
            const Token& t = tok(end);
            if (t.is_punct(";")) {
                ++end;
                break;
            }
            if (t.kind == TokenKind::OpenBrace) {
                end = match_[end] + 1;
                if (end < hi && tok(end).is_punct(";"))
                    ++end;
                break;
            }
            end = t.is_open() ? skip_group(end) : end + 1;
        }
        if (end == i)
            end = i + 1;
        NodeId node = new_node(NodeKind::Opaque, start_byte, tok(end - 1).byte_end, parent);
        attach(attrs, node);
        return end;
    }

    // ---- statements & expressions ----------------------------------------------

    void parse_block_contents(std::size_t lo, std::size_t hi, NodeId parent) {
        std::size_t i = lo;
        while (i < hi) {
            std::size_t next = parse_statement(i, hi, parent);
            assert(next > i);
            if (next <= i)
                next = i + 1;
            i = next;
        }
    }

    std::size_t parse_statement(std::size_t i, std::size_t hi, NodeId parent) {
        const Token& t = tok(i);
        if (t.is_punct(";"))
            return i + 1;
        if (t.is_punct("#")) {
            std::size_t after = probe_attributes(i, hi);
            if (after >= hi)
                return parse_item(i, hi, parent); // trailing attributes
            const Token& nx = tok(after);
            if (detail::is_item_keyword(nx) || nx.is_ident("pub") || nx.is_ident("const") ||
                nx.is_ident("unsafe") || nx.is_ident("async"))
                return parse_item(i, hi, parent);
            // attribute on an expression statement
            std::vector<NodeId> attrs;
            i = parse_attributes(i, hi, parent, attrs);
            if (i >= hi)
                return hi;
            ExprInfo info;
            return parse_expr_range(i, statement_end(i, hi), parent, &info);
        }
        if (t.kind == TokenKind::Ident) {
            const std::string& s = t.text;
            if (s == "let")
                return parse_let(i, hi, parent);
            bool block_follows = at(i + 1, hi) && tok(i + 1).kind == TokenKind::OpenBrace;
            if ((s == "unsafe" || s == "const") && block_follows) {
                ExprInfo info;
                return parse_expr_range(i, statement_end(i, hi), parent, &info);
            }
            if (detail::is_item_keyword(t) || s == "pub" ||
                ((s == "unsafe" || s == "const" || s == "async") && at(i + 1, hi) &&
                 (tok(i + 1).is_ident("fn") || tok(i + 1).is_ident("impl") ||
                  tok(i + 1).is_ident("trait") || tok(i + 1).is_ident("extern") ||
                  (s == "const" && tok(i + 1).kind == TokenKind::Ident &&
                   !detail::is_expr_keyword(tok(i + 1).text)))))
                return parse_item(i, hi, parent);
        }
        ExprInfo info;
        return parse_expr_range(i, statement_end(i, hi), parent, &info);
    }

    std::size_t parse_let(std::size_t i, std::size_t hi, NodeId parent) {
        std::size_t start_byte = tok(i).byte_start;
        ++i; // `let`
        std::string name;
        while (i < hi) {
            const Token& t = tok(i);
            if (t.is_punct(":") || t.is_punct("=") || t.is_punct(";"))
                break;
            if (t.kind == TokenKind::Ident && !t.is_ident("mut") && !t.is_ident("ref") &&
                name.empty())
                name = t.text;
            i = t.is_open() ? skip_group(i) : i + 1;
        }
        NodeId let = new_node(NodeKind::LetBinding, start_byte, start_byte, parent);
        unit_.nodes[let].props.name = name;
        if (at(i, hi) && tok(i).is_punct(":")) {
            ++i;
            unit_.nodes[let].props.type_text = parse_type_text(i, hi);
        }
        std::size_t stmt_end = statement_end(i, hi);
        if (at(i, hi) && tok(i).is_punct("=")) {
            std::size_t init_lo = i + 1;
            std::size_t init_hi = stmt_end;
            if (init_hi > init_lo && init_hi - 1 < toks_.size() && tok(init_hi - 1).is_punct(";"))
                --init_hi;
            // `let x = Path { .. };` gives the binding a known type
            if (init_lo < init_hi && tok(init_lo).kind == TokenKind::Ident &&
                !detail::is_expr_keyword(tok(init_lo).text)) {
                std::size_t p = init_lo;
                while (p + 2 < init_hi && tok(p + 1).is_punct("::") &&
                       tok(p + 2).kind == TokenKind::Ident)
                    p += 2;
                if (at(p + 1, init_hi) && tok(p + 1).kind == TokenKind::OpenBrace &&
                    match_[p + 1] + 1 >= init_hi)
                    unit_.nodes[let].props.inferred_type_text = normalize_tokens(init_lo, p + 1);
            }
            ExprInfo info;
            parse_expr_range(init_lo, init_hi, let, &info);
            if (unit_.nodes[let].props.inferred_type_text.empty() &&
                info.last_cast != invalid_node) {
                const std::string& ty = unit_.nodes[info.last_cast].props.type_text;
                if (ty.starts_with("*const") || ty.starts_with("*mut"))
                    unit_.nodes[let].props.inferred_type_text = ty;
            }
        }
        std::size_t end_byte = stmt_end > 0 && stmt_end - 1 < toks_.size()
                                   ? tok(stmt_end - 1).byte_end
                                   : start_byte;
        finish_span(let, start_byte, end_byte);
        return stmt_end;
    }

    struct Primary {
        enum Kind { None, Ident, Float, Lit, Group, Cast, Other } kind = None;
        std::string root_ident; // single-segment identifier, if any
        NodeId cast_node = invalid_node;
        bool group_last_cast_raw = false;
        std::size_t byte_start = 0, byte_end = 0;
    };

    struct ExprInfo {
        NodeId last_cast = invalid_node; // last top-level CastExpr in the range
    };

    bool prefix_position(const Token* prev) const {
        if (!prev)
            return true;
        if (prev->kind == TokenKind::Ident)
            return detail::is_expr_keyword(prev->text);
        if (prev->is_close() || prev->kind == TokenKind::IntLiteral ||
            prev->kind == TokenKind::FloatLiteral || prev->kind == TokenKind::StrLiteral ||
            prev->kind == TokenKind::CharLiteral || prev->kind == TokenKind::Lifetime)
            return false;
        return true; // operators, open delimiters, `;`, `=`, ...
    }

    /// Scan an expression token range, materializing the expression-level
    /// constructs the checks care about.
    std::size_t parse_expr_range(std::size_t lo, std::size_t hi, NodeId parent, ExprInfo* info) {
        std::size_t i = lo;
        Primary last;
        const Token* prev = nullptr;
        while (i < hi) {
            const Token& t = tok(i);
            if (t.kind == TokenKind::Ident) {
                const std::string& s = t.text;
                if (s == "as") {
                    std::size_t ty_lo = i + 1;
                    std::size_t ty_i = ty_lo;
                    std::string ty = ty_lo < hi ? parse_type_text(ty_i, hi) : std::string();
                    if (ty_i > hi)
                        ty_i = hi;
                    std::size_t start_byte =
                        last.kind != Primary::None ? last.byte_start : t.byte_start;
                    std::size_t end_byte =
                        ty_i > ty_lo && ty_i - 1 < toks_.size() ? tok(ty_i - 1).byte_end : t.byte_end;
                    NodeId cast = new_node(NodeKind::CastExpr, start_byte, end_byte, parent);
                    auto& cp = unit_.nodes[cast].props;
                    cp.type_text = ty;
                    if (last.kind == Primary::Ident)
                        cp.operand_ident = last.root_ident;
                    if (last.kind == Primary::Cast && last.cast_node != invalid_node) {
                        const std::string& prev_ty = unit_.nodes[last.cast_node].props.type_text;
                        cp.operand_is_raw_cast =
                            prev_ty.starts_with("*const") || prev_ty.starts_with("*mut");
                    }
                    if (last.kind == Primary::Group && last.group_last_cast_raw)
                        cp.operand_is_raw_cast = true;
                    if (info)
                        info->last_cast = cast;
                    last = Primary{Primary::Cast, "", cast, false, start_byte, end_byte};
                    prev = ty_i > 0 ? &toks_[ty_i - 1] : &t;
                    i = ty_i > i ? ty_i : i + 1;
                    continue;
                }
                bool block_follows = at(i + 1, hi) && tok(i + 1).kind == TokenKind::OpenBrace;
                if (s == "unsafe" && block_follows) {
                    std::size_t close = match_[i + 1];
                    NodeId blk =
                        new_node(NodeKind::UnsafeBlock, t.byte_start, tok(close).byte_end, parent);
                    parse_block_contents(i + 2, close, blk);
                    last = Primary{Primary::Group, "", invalid_node, false, t.byte_start,
                                   tok(close).byte_end};
                    prev = &toks_[close];
                    i = close + 1;
                    continue;
                }
                if (s == "const" && block_follows) {
                    std::size_t close = match_[i + 1];
                    NodeId blk =
                        new_node(NodeKind::ConstBlock, t.byte_start, tok(close).byte_end, parent);
                    parse_block_contents(i + 2, close, blk);
                    last = Primary{Primary::Group, "", invalid_node, false, t.byte_start,
                                   tok(close).byte_end};
                    prev = &toks_[close];
                    i = close + 1;
                    continue;
                }
                if (s == "match") {
                    i = parse_match(i, hi, parent);
                    prev = i > 0 && i - 1 < toks_.size() ? &toks_[i - 1] : nullptr;
                    last = Primary{};
                    continue;
                }
                if (s == "let") { // `if let`/`while let`: skip the pattern
                    std::size_t eq = find_punct(i + 1, hi, "=");
                    i = eq < hi ? eq + 1 : hi;
                    prev = nullptr;
                    last = Primary{};
                    continue;
                }
                if (s == "fn" || s == "struct" || s == "enum" || s == "union" || s == "trait" ||
                    s == "impl" || s == "mod" || s == "static" || s == "use" ||
                    s == "macro_rules") {
                    i = parse_item(i, hi, parent);
                    prev = i > 0 && i - 1 < toks_.size() ? &toks_[i - 1] : nullptr;
                    last = Primary{};
                    continue;
                }
                if (detail::is_expr_keyword(s)) {
                    prev = &t;
                    last = Primary{};
                    ++i;
                    continue;
                }
                // path
                std::size_t p = i + 1;
                std::string path = s;
                int segments = 1;
                while (at(p, hi) && tok(p).is_punct("::")) {
                    if (at(p + 1, hi) && tok(p + 1).kind == TokenKind::Ident) {
                        path += "::" + tok(p + 1).text;
                        segments++;
                        p += 2;
                        continue;
                    }
                    if (at(p + 1, hi) && tok(p + 1).is_punct("<")) { // turbofish
                        p = skip_angles(p + 1, hi);
                        continue;
                    }
                    break;
                }
                if (at(p, hi) && tok(p).is_punct("!") && at(p + 1, hi) && tok(p + 1).is_open()) {
                    i = parse_macro_invocation(i, hi, parent);
                    prev = i > 0 && i - 1 < toks_.size() ? &toks_[i - 1] : nullptr;
                    last = Primary{Primary::Other, "", invalid_node, false, t.byte_start,
                                   i > 0 ? toks_[i - 1].byte_end : t.byte_end};
                    continue;
                }
                if (at(p, hi) && tok(p).kind == TokenKind::OpenParen) {
                    std::size_t close = match_[p];
                    NodeId call =
                        new_node(NodeKind::CallExpr, t.byte_start, tok(close).byte_end, parent);
                    unit_.nodes[call].props.path_text = path;
                    ExprInfo sub;
                    parse_expr_range(p + 1, close, call, &sub);
                    last = Primary{Primary::Group, "", invalid_node, false, t.byte_start,
                                   tok(close).byte_end};
                    prev = &toks_[close];
                    i = close + 1;
                    continue;
                }
                last = Primary{Primary::Ident, segments == 1 ? path : "", invalid_node, false,
                               t.byte_start, tok(p - 1).byte_end};
                prev = &toks_[p - 1];
                i = p;
                continue;
            }
            if (t.is_punct(".") && at(i + 1, hi)) {
                const Token& nx = tok(i + 1);
                if (nx.is_ident("await")) {
                    i += 2;
                    prev = &nx;
                    continue;
                }
                if (nx.kind == TokenKind::Ident || nx.kind == TokenKind::IntLiteral) {
                    std::size_t after = i + 2;
                    if (nx.kind == TokenKind::Ident && at(after, hi) && tok(after).is_punct("::") &&
                        at(after + 1, hi) && tok(after + 1).is_punct("<"))
                        after = skip_angles(after + 1, hi);
                    std::size_t start_byte =
                        last.kind != Primary::None ? last.byte_start : t.byte_start;
                    if (nx.kind == TokenKind::Ident && at(after, hi) &&
                        tok(after).kind == TokenKind::OpenParen) {
                        std::size_t close = match_[after];
                        NodeId mc = new_node(NodeKind::MethodCallExpr, start_byte,
                                             tok(close).byte_end, parent);
                        unit_.nodes[mc].props.name = nx.text;
                        unit_.nodes[mc].props.operand_ident =
                            last.kind == Primary::Ident || last.kind == Primary::Other ||
                                    last.kind == Primary::Group
                                ? last.root_ident
                                : "";
                        ExprInfo sub;
                        parse_expr_range(after + 1, close, mc, &sub);
                        last = Primary{Primary::Group, last.root_ident, invalid_node, false,
                                       start_byte, tok(close).byte_end};
                        prev = &toks_[close];
                        i = close + 1;
                        continue;
                    }
                    NodeId fa = new_node(NodeKind::FieldAccessExpr, start_byte, nx.byte_end, parent);
                    unit_.nodes[fa].props.name = nx.text;
                    unit_.nodes[fa].props.operand_ident =
                        last.kind == Primary::Ident || last.kind == Primary::Other
                            ? last.root_ident
                            : "";
                    last = Primary{Primary::Other, last.root_ident, invalid_node, false, start_byte,
                                   nx.byte_end};
                    prev = &nx;
                    i += 2;
                    continue;
                }
            }
            if (t.is_punct("*") && prefix_position(prev) && at(i + 1, hi)) {
                std::size_t end_byte = t.byte_end;
                std::string root;
                std::size_t p = i + 1;
                if (tok(p).kind == TokenKind::Ident && !detail::is_expr_keyword(tok(p).text)) {
                    root = tok(p).text;
                    end_byte = tok(p).byte_end;
                    if (at(p + 1, hi) && tok(p + 1).is_punct("::"))
                        root.clear(); // qualified path, not a local binding
                } else if (tok(p).kind == TokenKind::OpenParen) {
                    std::size_t close = match_[p];
                    if (p + 1 < close && tok(p + 1).kind == TokenKind::Ident &&
                        !detail::is_expr_keyword(tok(p + 1).text))
                        root = tok(p + 1).text;
                    end_byte = tok(close).byte_end;
                }
                NodeId d = new_node(NodeKind::DerefExpr, t.byte_start, end_byte, parent);
                unit_.nodes[d].props.operand_ident = root;
                prev = &t;
                last = Primary{};
                ++i;
                continue;
            }
            if (t.is_punct("==") || t.is_punct("!=") || t.is_punct("<=") || t.is_punct(">=") ||
                ((t.is_punct("<") || t.is_punct(">")) && comparison_heuristic(t, prev))) {
                std::size_t start_byte = last.kind != Primary::None ? last.byte_start : t.byte_start;
                std::size_t end_byte = t.byte_end;
                std::string rhs_ident;
                bool rhs_float = false;
                std::size_t r = i + 1;
                if (at(r, hi) && tok(r).is_punct("-") && at(r + 1, hi))
                    ++r; // negative literal
                if (at(r, hi)) {
                    const Token& rt = tok(r);
                    if (rt.kind == TokenKind::FloatLiteral) {
                        rhs_float = true;
                        end_byte = rt.byte_end;
                    } else if (rt.kind == TokenKind::Ident && !detail::is_expr_keyword(rt.text)) {
                        if (!(at(r + 1, hi) && tok(r + 1).is_punct("::")))
                            rhs_ident = rt.text;
                        end_byte = rt.byte_end;
                    } else if (rt.kind == TokenKind::IntLiteral ||
                               rt.kind == TokenKind::StrLiteral ||
                               rt.kind == TokenKind::CharLiteral) {
                        end_byte = rt.byte_end;
                    }
                }
                NodeId cmp = new_node(NodeKind::ComparisonExpr, start_byte, end_byte, parent);
                auto& cp = unit_.nodes[cmp].props;
                cp.text = t.text;
                cp.operand_ident = last.kind == Primary::Ident ? last.root_ident : "";
                cp.lhs_is_float = last.kind == Primary::Float;
                cp.operand_ident_rhs = rhs_ident;
                cp.rhs_is_float = rhs_float;
                prev = &t;
                last = Primary{};
                ++i;
                continue;
            }
            if (t.kind == TokenKind::FloatLiteral) {
                new_node(NodeKind::FloatLiteral, t.byte_start, t.byte_end, parent);
                last = Primary{Primary::Float, "", invalid_node, false, t.byte_start, t.byte_end};
                prev = &t;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::IntLiteral || t.kind == TokenKind::StrLiteral ||
                t.kind == TokenKind::CharLiteral) {
                last = Primary{Primary::Lit, "", invalid_node, false, t.byte_start, t.byte_end};
                prev = &t;
                ++i;
                continue;
            }
            if (t.kind == TokenKind::OpenParen || t.kind == TokenKind::OpenBracket) {
                std::size_t close = match_[i];
                ExprInfo sub;
                parse_expr_range(i + 1, close, parent, &sub);
                bool raw = false;
                if (sub.last_cast != invalid_node) {
                    const std::string& ty = unit_.nodes[sub.last_cast].props.type_text;
                    raw = ty.starts_with("*const") || ty.starts_with("*mut");
                }
                last = Primary{Primary::Group, "", invalid_node, raw, t.byte_start,
                               tok(close).byte_end};
                prev = &toks_[close];
                i = close + 1;
                continue;
            }
            if (t.kind == TokenKind::OpenBrace) {
                std::size_t close = match_[i];
                parse_block_contents(i + 1, close, parent);
                last = Primary{Primary::Group, "", invalid_node, false, t.byte_start,
                               tok(close).byte_end};
                prev = &toks_[close];
                i = close + 1;
                continue;
            }
            if ((t.is_punct("|") || t.is_punct("||")) && prefix_position(prev)) {
                if (t.is_punct("|")) { // skip closure parameters
                    std::size_t bar = i + 1;
                    while (bar < hi && !tok(bar).is_punct("|"))
                        bar = tok(bar).is_open() ? skip_group(bar) : bar + 1;
                    i = bar < hi ? bar + 1 : hi;
                } else {
                    ++i;
                }
                prev = nullptr;
                last = Primary{};
                continue;
            }
            if (!t.is_punct("&") && !t.is_punct("?"))
                last = Primary{};
            prev = &t;
            ++i;
        }
        return hi;
    }

    bool comparison_heuristic(const Token& t, const Token* prev) const {
        // `<`/`>` count as comparisons only when spaced on both sides and
        // following a value; generic argument lists are written unspaced.
        if (!prev)
            return false;
        bool value_before = prev->is_close() || prev->kind == TokenKind::IntLiteral ||
                            prev->kind == TokenKind::FloatLiteral ||
                            (prev->kind == TokenKind::Ident && !detail::is_expr_keyword(prev->text));
        if (!value_before)
            return false;
        if (t.byte_start == 0 || t.byte_end >= unit_.source.size())
            return false;
        return unit_.source[t.byte_start - 1] == ' ' && unit_.source[t.byte_end] == ' ';
    }

    std::size_t parse_match(std::size_t i, std::size_t hi, NodeId parent) {
        std::size_t brace = i + 1;
        while (brace < hi && tok(brace).kind != TokenKind::OpenBrace)
            brace = tok(brace).is_open() ? skip_group(brace) : brace + 1;
        ExprInfo scrut;
        parse_expr_range(i + 1, brace, parent, &scrut);
        if (brace >= hi)
            return hi;
        std::size_t close = match_[brace];
        std::size_t p = brace + 1;
        while (p < close) {
            std::size_t arrow = p;
            std::size_t guard = SIZE_MAX;
            while (arrow < close && !tok(arrow).is_punct("=>")) {
                if (tok(arrow).is_ident("if") && guard == SIZE_MAX)
                    guard = arrow;
                arrow = tok(arrow).is_open() ? skip_group(arrow) : arrow + 1;
            }
            if (guard != SIZE_MAX) {
                ExprInfo g;
                parse_expr_range(guard + 1, arrow, parent, &g);
            }
            if (arrow >= close)
                break;
            std::size_t body = arrow + 1;
            if (body >= close)
                break;
            std::size_t body_end;
            if (tok(body).kind == TokenKind::OpenBrace) {
                body_end = match_[body] + 1;
            } else {
                body_end = body;
                while (body_end < close && !tok(body_end).is_punct(","))
                    body_end = tok(body_end).is_open() ? skip_group(body_end) : body_end + 1;
            }
            ExprInfo b;
            parse_expr_range(body, body_end, parent, &b);
            p = body_end < close && tok(body_end).is_punct(",") ? body_end + 1 : body_end;
            if (p <= arrow)
                p = arrow + 1;
        }
        return close + 1;
    }

    std::size_t parse_macro_invocation(std::size_t i, std::size_t hi, NodeId parent) {
        std::size_t start_byte = tok(i).byte_start;
        std::string path = tok(i).text;
        std::string name = tok(i).text;
        ++i;
        while (at(i + 1, hi) && tok(i).is_punct("::") && tok(i + 1).kind == TokenKind::Ident) {
            path += "::" + tok(i + 1).text;
            name = tok(i + 1).text;
            i += 2;
        }
        if (at(i, hi) && tok(i).is_punct("!"))
            ++i;
        std::size_t end_byte = start_byte;
        std::string args;
        if (at(i, hi) && tok(i).is_open()) {
            std::size_t close = match_[i];
            if (close > i + 1)
                args = std::string(unit_.source.substr(
                    tok(i).byte_end, tok(close).byte_start - tok(i).byte_end));
            end_byte = tok(close).byte_end;
            i = close + 1;
        } else if (i > 0) {
            end_byte = tok(i - 1).byte_end;
        }
        if (at(i, hi) && tok(i).is_punct(";")) {
            end_byte = tok(i).byte_end;
            ++i;
        }
        NodeId m = new_node(NodeKind::MacroInvocation, start_byte, end_byte, parent);
        unit_.nodes[m].props.name = name;
        unit_.nodes[m].props.path_text = path;
        unit_.nodes[m].props.text = args;
        return i;
    }

    SourceUnit unit_;
    std::vector<Token> toks_;
    std::vector<Token> comment_tokens_;
    std::vector<std::size_t> match_;
};

/// Parse one source file into a construct tree. Throws ParseError on
/// malformed input (unbalanced delimiters, unterminated literals).
inline SourceUnit parse(std::string path, std::string source) {
    return Parser::parse(std::move(path), std::move(source));
}

} // namespace misrust
