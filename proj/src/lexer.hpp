#pragma once

#include "vulnseed/source.hpp"

#include <stdexcept>
#include <string_view>
#include <vector>

namespace vulnseed::detail {

enum class TokenKind { Identifier, Number, String, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    Span span;
    std::string_view text;

    bool is(std::string_view s) const { return (kind == TokenKind::Punct || kind == TokenKind::Identifier) && text == s; }
};

struct LexError : std::runtime_error {
    LexError(Span where, const std::string& what) : std::runtime_error(what), span(where) {}
    Span span;
};

/// Splits Solidity source into tokens, dropping whitespace and comments.
/// The returned list always ends with an End token positioned at the end of the text.
std::vector<Token> tokenize(std::string_view text);

}  // namespace vulnseed::detail
