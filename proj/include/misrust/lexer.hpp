#pragma once

// Lexer for Rust (2024 edition) source text. Produces a flat token stream
// with byte spans; comments are kept as tokens so later passes can attach
// them to constructs.

#include "misrust/span.hpp"

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace misrust {

enum class TokenKind {
    Ident,      // identifiers and keywords (raw r#idents are unescaped)
    Lifetime,   // 'a  (includes the quote)
    IntLiteral,
    FloatLiteral,
    StrLiteral,  // all string-like literals, including raw/byte/c variants
    CharLiteral,
    LineComment,  // text = content after //
    BlockComment, // text = content between /* and */
    Punct,        // one multi-char operator or single punctuation char
    OpenParen, CloseParen,
    OpenBracket, CloseBracket,
    OpenBrace, CloseBrace,
};

struct Token {
    TokenKind kind;
    std::string text;       // token payload, see kind comments
    std::size_t byte_start = 0;
    std::size_t byte_end = 0;

    bool is(TokenKind k) const { return kind == k; }
    bool is_ident(std::string_view s) const { return kind == TokenKind::Ident && text == s; }
    bool is_punct(std::string_view s) const { return kind == TokenKind::Punct && text == s; }
    bool is_comment() const { return kind == TokenKind::LineComment || kind == TokenKind::BlockComment; }
    bool is_open() const {
        return kind == TokenKind::OpenParen || kind == TokenKind::OpenBracket || kind == TokenKind::OpenBrace;
    }
    bool is_close() const {
        return kind == TokenKind::CloseParen || kind == TokenKind::CloseBracket || kind == TokenKind::CloseBrace;
    }
};

struct LexError {
    std::size_t byte = 0;
    std::string message;
};

namespace detail {

inline bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           static_cast<unsigned char>(c) >= 0x80; // permit non-ASCII identifiers
}
inline bool is_ident_continue(char c) {
    return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}
inline bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

} // namespace detail

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    /// Lex the whole input. On a lexical error (unterminated string/comment)
    /// sets `error` and returns the tokens produced so far.
    std::vector<Token> run(std::optional<LexError>& error) {
        std::vector<Token> out;
        error.reset();
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
                continue;
            }
            std::size_t start = pos_;
            if (c == '/' && peek(1) == '/') {
                pos_ += 2;
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
                out.push_back({TokenKind::LineComment,
                               std::string(src_.substr(start + 2, pos_ - start - 2)), start, pos_});
                continue;
            }
            if (c == '/' && peek(1) == '*') {
                pos_ += 2;
                int depth = 1;
                while (pos_ < src_.size() && depth > 0) {
                    if (src_[pos_] == '/' && peek(1) == '*') { depth++; pos_ += 2; }
                    else if (src_[pos_] == '*' && peek(1) == '/') { depth--; pos_ += 2; }
                    else ++pos_;
                }
                if (depth > 0) {
                    error = LexError{start, "unterminated block comment"};
                    return out;
                }
                out.push_back({TokenKind::BlockComment,
                               std::string(src_.substr(start + 2, pos_ - start - 4)), start, pos_});
                continue;
            }
            if (c == 'r' && (peek(1) == '"' || peek(1) == '#')) {
                if (lex_raw_string(start, out, error)) continue;
                if (error) return out;
                // fall through: r followed by # but not a raw string (raw ident handled below)
            }
            if ((c == 'b' || c == 'c') && peek(1) == '"') {
                ++pos_;
                if (!lex_string(start, out, error)) return out;
                continue;
            }
            if (c == 'b' && peek(1) == 'r' && (peek(2) == '"' || peek(2) == '#')) {
                ++pos_;
                if (lex_raw_string(start, out, error)) continue;
                if (error) return out;
            }
            if (c == 'b' && peek(1) == '\'') {
                ++pos_;
                if (!lex_char(start, out, error)) return out;
                continue;
            }
            if (c == '"') {
                if (!lex_string(start, out, error)) return out;
                continue;
            }
            if (c == '\'') {
                if (lex_lifetime(start, out)) continue;
                if (!lex_char(start, out, error)) return out;
                continue;
            }
            if (detail::is_digit(c)) {
                // a digit run right after `.` is a tuple index, never a float
                bool after_dot = !out.empty() && out.back().is_punct(".");
                lex_number(start, out, after_dot);
                continue;
            }
            if (c == 'r' && peek(1) == '#' && pos_ + 2 < src_.size() && detail::is_ident_start(src_[pos_ + 2])) {
                pos_ += 2; // raw identifier: keep the unescaped name
                std::size_t istart = pos_;
                while (pos_ < src_.size() && detail::is_ident_continue(src_[pos_]))
                    ++pos_;
                out.push_back({TokenKind::Ident, std::string(src_.substr(istart, pos_ - istart)), start, pos_});
                continue;
            }
            if (detail::is_ident_start(c)) {
                while (pos_ < src_.size() && detail::is_ident_continue(src_[pos_]))
                    ++pos_;
                out.push_back({TokenKind::Ident, std::string(src_.substr(start, pos_ - start)), start, pos_});
                continue;
            }
            switch (c) {
                case '(': out.push_back({TokenKind::OpenParen, "(", start, start + 1}); ++pos_; continue;
                case ')': out.push_back({TokenKind::CloseParen, ")", start, start + 1}); ++pos_; continue;
                case '[': out.push_back({TokenKind::OpenBracket, "[", start, start + 1}); ++pos_; continue;
                case ']': out.push_back({TokenKind::CloseBracket, "]", start, start + 1}); ++pos_; continue;
                case '{': out.push_back({TokenKind::OpenBrace, "{", start, start + 1}); ++pos_; continue;
                case '}': out.push_back({TokenKind::CloseBrace, "}", start, start + 1}); ++pos_; continue;
                default: break;
            }
            lex_punct(start, out);
        }
        return out;
    }

private:
    char peek(std::size_t ahead) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    bool lex_string(std::size_t start, std::vector<Token>& out, std::optional<LexError>& error) {
        // pos_ at the opening quote
        ++pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') { pos_ += 2; continue; }
            if (c == '"') {
                ++pos_;
                out.push_back({TokenKind::StrLiteral, std::string(src_.substr(start, pos_ - start)), start, pos_});
                return true;
            }
            ++pos_;
        }
        error = LexError{start, "unterminated string literal"};
        return false;
    }

    // pos_ at 'r'; returns false (without error) if this is not a raw string.
    bool lex_raw_string(std::size_t start, std::vector<Token>& out, std::optional<LexError>& error) {
        std::size_t p = pos_ + 1;
        std::size_t hashes = 0;
        while (p < src_.size() && src_[p] == '#') { ++hashes; ++p; }
        if (p >= src_.size() || src_[p] != '"')
            return false; // raw identifier or lone 'r'
        ++p;
        std::string close = "\"" + std::string(hashes, '#');
        std::size_t end = src_.find(close, p);
        if (end == std::string_view::npos) {
            error = LexError{start, "unterminated raw string literal"};
            return false;
        }
        pos_ = end + close.size();
        out.push_back({TokenKind::StrLiteral, std::string(src_.substr(start, pos_ - start)), start, pos_});
        return true;
    }

    // Try to lex 'a / 'static; returns false if this is a char literal instead.
    bool lex_lifetime(std::size_t start, std::vector<Token>& out) {
        if (pos_ + 1 >= src_.size() || !detail::is_ident_start(src_[pos_ + 1]))
            return false;
        // a lifetime is a quote plus identifier NOT followed by another quote
        std::size_t p = pos_ + 1;
        while (p < src_.size() && detail::is_ident_continue(src_[p]))
            ++p;
        if (p < src_.size() && src_[p] == '\'')
            return false; // 'x' (any width) is a char literal
        pos_ = p;
        out.push_back({TokenKind::Lifetime, std::string(src_.substr(start, pos_ - start)), start, pos_});
        return true;
    }

    bool lex_char(std::size_t start, std::vector<Token>& out, std::optional<LexError>& error) {
        // pos_ at the opening quote
        ++pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\') { pos_ += 2; continue; }
            if (c == '\'') {
                ++pos_;
                out.push_back({TokenKind::CharLiteral, std::string(src_.substr(start, pos_ - start)), start, pos_});
                return true;
            }
            if (c == '\n') break;
            ++pos_;
        }
        error = LexError{start, "unterminated character literal"};
        return false;
    }

    void lex_number(std::size_t start, std::vector<Token>& out, bool after_dot = false) {
        bool is_float = false;
        if (after_dot) {
            while (pos_ < src_.size() && detail::is_digit(src_[pos_]))
                ++pos_;
            out.push_back({TokenKind::IntLiteral, std::string(src_.substr(start, pos_ - start)),
                           start, pos_});
            return;
        }
        if (src_[pos_] == '0' && (peek(1) == 'x' || peek(1) == 'o' || peek(1) == 'b')) {
            pos_ += 2;
            while (pos_ < src_.size() &&
                   (std::isxdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
        } else {
            while (pos_ < src_.size() && (detail::is_digit(src_[pos_]) || src_[pos_] == '_'))
                ++pos_;
            // fractional part: `1.0`, `1.` but not `1.method()` or `1..2`
            if (pos_ < src_.size() && src_[pos_] == '.' && peek(1) != '.' &&
                !detail::is_ident_start(peek(1))) {
                is_float = true;
                ++pos_;
                while (pos_ < src_.size() && (detail::is_digit(src_[pos_]) || src_[pos_] == '_'))
                    ++pos_;
            }
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E') &&
                (detail::is_digit(peek(1)) || ((peek(1) == '+' || peek(1) == '-') && detail::is_digit(peek(2))))) {
                is_float = true;
                pos_ += (peek(1) == '+' || peek(1) == '-') ? 2 : 1;
                while (pos_ < src_.size() && (detail::is_digit(src_[pos_]) || src_[pos_] == '_'))
                    ++pos_;
            }
        }
        // type suffix
        if (pos_ < src_.size() && detail::is_ident_start(src_[pos_])) {
            std::size_t sstart = pos_;
            while (pos_ < src_.size() && detail::is_ident_continue(src_[pos_]))
                ++pos_;
            std::string_view suffix = src_.substr(sstart, pos_ - sstart);
            if (suffix == "f32" || suffix == "f64")
                is_float = true;
        }
        out.push_back({is_float ? TokenKind::FloatLiteral : TokenKind::IntLiteral,
                       std::string(src_.substr(start, pos_ - start)), start, pos_});
    }

    void lex_punct(std::size_t start, std::vector<Token>& out) {
        static const char* three[] = {"<<=", ">>=", "..=", "..."};
        static const char* two[] = {"::", "->", "=>", "==", "!=", "<=", ">=", "&&", "||",
                                    "<<", ">>", "+=", "-=", "*=", "/=", "%=", "^=", "&=",
                                    "|=", ".."};
        std::string_view rest = src_.substr(pos_);
        for (const char* op : three) {
            if (rest.starts_with(op)) {
                pos_ += 3;
                out.push_back({TokenKind::Punct, op, start, pos_});
                return;
            }
        }
        for (const char* op : two) {
            if (rest.starts_with(op)) {
                pos_ += 2;
                out.push_back({TokenKind::Punct, op, start, pos_});
                return;
            }
        }
        ++pos_;
        out.push_back({TokenKind::Punct, std::string(1, src_[start]), start, pos_});
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

inline std::vector<Token> lex(std::string_view source, std::optional<LexError>& error) {
    return Lexer(source).run(error);
}

} // namespace misrust
