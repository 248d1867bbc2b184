#include "lexer.hpp"

#include <array>
#include <cctype>

namespace vulnseed::detail {
namespace {

// Longest first so that prefixes never shadow longer operators.
constexpr std::array<std::string_view, 27> multi_char_puncts = {
    ">>>=", "<<=", ">>=", ">>>", "**", "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=",   "-=",  "*=",  "/=",  "%=", "|=", "&=", "^=", "<<", ">>", "->", ":=", "=:",
};

constexpr std::string_view single_char_puncts = "+-*/%<>=!~&|^?:;,.(){}[]@";

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run()
    {
        while (true) {
            skip_trivia();
            if (pos_ >= text_.size()) break;
            lex_one();
        }
        tokens_.push_back({TokenKind::End, {text_.size(), text_.size()}, {}});
        return std::move(tokens_);
    }

private:
    char peek(std::size_t ahead = 0) const
    {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    void skip_trivia()
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else if (c == '/' && peek(1) == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else if (c == '/' && peek(1) == '*') {
                std::size_t start = pos_;
                auto close = text_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) throw LexError({start, text_.size()}, "unterminated block comment");
                pos_ = close + 2;
            } else {
                break;
            }
        }
    }

    void push(TokenKind kind, std::size_t start)
    {
        tokens_.push_back({kind, {start, pos_}, text_.substr(start, pos_ - start)});
    }

    void lex_string(std::size_t start)
    {
        char quote = text_[pos_++];
        while (true) {
            if (pos_ >= text_.size() || text_[pos_] == '\n') throw LexError({start, pos_}, "unterminated string literal");
            char c = text_[pos_++];
            if (c == '\\') {
                if (pos_ >= text_.size()) throw LexError({start, pos_}, "unterminated string literal");
                ++pos_;
            } else if (c == quote) {
                break;
            }
        }
        push(TokenKind::String, start);
    }

    bool previous_ends_operand() const
    {
        if (tokens_.empty()) return false;
        const Token& prev = tokens_.back();
        return prev.kind != TokenKind::Punct || prev.text == ")" || prev.text == "]";
    }

    void lex_number(std::size_t start)
    {
        if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
            pos_ += 2;
            while (std::isxdigit(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
        } else {
            while (is_digit(peek()) || peek() == '_') ++pos_;
            if (peek() == '.' && is_digit(peek(1))) {
                ++pos_;
                while (is_digit(peek()) || peek() == '_') ++pos_;
            }
            if ((peek() == 'e' || peek() == 'E') && (is_digit(peek(1)) || (peek(1) == '-' && is_digit(peek(2))))) {
                pos_ += peek(1) == '-' ? 2 : 1;
                while (is_digit(peek()) || peek() == '_') ++pos_;
            }
        }
        if (is_ident_char(peek())) throw LexError({start, pos_ + 1}, "malformed number literal");
        push(TokenKind::Number, start);
    }

    void lex_one()
    {
        std::size_t start = pos_;
        char c = text_[pos_];

        if (static_cast<unsigned char>(c) >= 0x80) throw LexError({start, start + 1}, "unexpected non-ASCII character");

        if (is_ident_start(c)) {
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
            std::string_view word = text_.substr(start, pos_ - start);
            if ((word == "hex" || word == "unicode") && (peek() == '"' || peek() == '\'')) {
                lex_string(start);
                tokens_.back().span.start = start;
                tokens_.back().text = text_.substr(start, pos_ - start);
                return;
            }
            push(TokenKind::Identifier, start);
            return;
        }
        if (is_digit(c) || (c == '.' && is_digit(peek(1)) && !previous_ends_operand())) {
            if (c == '.') {
                ++pos_;
                while (is_digit(peek()) || peek() == '_') ++pos_;
                push(TokenKind::Number, start);
                return;
            }
            lex_number(start);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(start);
            return;
        }
        for (std::string_view p : multi_char_puncts) {
            if (text_.substr(pos_, p.size()) == p) {
                pos_ += p.size();
                push(TokenKind::Punct, start);
                return;
            }
        }
        if (single_char_puncts.find(c) != std::string_view::npos) {
            ++pos_;
            push(TokenKind::Punct, start);
            return;
        }
        throw LexError({start, start + 1}, std::string("unexpected character '") + c + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<Token> tokens_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text)
{
    return Lexer(text).run();
}

}  // namespace vulnseed::detail
