#pragma once

// Shared tokenizer for the spec language, structure files, history literals
// and environment scripts.

#include "isa/error.hpp"

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace isa::detail {

enum class TokenKind {
    Word,   // [A-Za-z0-9_]+
    Punct,  // ( ) { } , ; : = := -> @ / ?
    Hash,   // '#' directly followed by a word character (literal mode only)
    End,
};

struct Token
{
    TokenKind kind = TokenKind::End;
    std::string text;
    SourceSpan span;
};

enum class LexMode {
    Source,  // '#' always starts a comment
    Literal, // '#word' marks an element; a lone '#' starts a comment
};

std::vector<Token> tokenize(std::string_view text, LexMode mode);

/// Recursive-descent cursor with SyntaxError reporting.
class TokenStream
{
public:
    TokenStream(std::string_view text, LexMode mode);

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const;
    const Token& next();
    [[nodiscard]] bool at_end() const { return peek().kind == TokenKind::End; }

    [[nodiscard]] bool is_punct(std::string_view p, std::size_t ahead = 0) const;
    [[nodiscard]] bool is_word(std::string_view w, std::size_t ahead = 0) const;
    [[nodiscard]] bool is_any_word(std::size_t ahead = 0) const { return peek(ahead).kind == TokenKind::Word; }

    bool accept_punct(std::string_view p);
    bool accept_word(std::string_view w);

    const Token& expect_punct(std::string_view p);
    const Token& expect_word(std::string_view w);
    /// Any word token; `what` names it in the error message.
    const Token& expect_identifier(std::string_view what);
    std::size_t expect_number(std::string_view what);

    [[noreturn]] void fail(std::vector<std::string> expected) const;

    /// Span from `start` to the end of the most recently consumed token.
    [[nodiscard]] SourceSpan span_from(const SourceSpan& start) const;
    [[nodiscard]] std::string_view source() const { return _source; }

private:
    std::string_view _source;
    std::vector<Token> _tokens;
    std::size_t _pos = 0;
};

std::string describe(const Token& t);
bool is_number(std::string_view word);

} // namespace isa::detail
