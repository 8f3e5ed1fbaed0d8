#include "lexer.hpp"

#include <algorithm>
#include <cctype>

namespace isa::detail {

namespace {

bool word_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

} // namespace

bool is_number(std::string_view word)
{
    return !word.empty() && std::all_of(word.begin(), word.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c)) != 0;
    });
}

std::vector<Token> tokenize(std::string_view text, LexMode mode)
{
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;

    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto emit = [&](TokenKind kind, std::size_t len) {
        Token t{kind, std::string(text.substr(i, len)), SourceSpan{line, col, i, i + len}};
        advance(len);
        out.push_back(std::move(t));
    };

    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            advance(1);
            continue;
        }
        if (c == '#') {
            bool element = mode == LexMode::Literal && i + 1 < text.size() && word_char(text[i + 1]);
            if (element) {
                emit(TokenKind::Hash, 1);
                continue;
            }
            while (i < text.size() && text[i] != '\n')
                advance(1);
            continue;
        }
        if (word_char(c)) {
            std::size_t len = 0;
            while (i + len < text.size() && word_char(text[i + len]))
                ++len;
            emit(TokenKind::Word, len);
            continue;
        }
        if (text.substr(i, 2) == ":=" || text.substr(i, 2) == "->") {
            emit(TokenKind::Punct, 2);
            continue;
        }
        if (std::string_view("(){},;:=@/?").find(c) != std::string_view::npos) {
            emit(TokenKind::Punct, 1);
            continue;
        }
        throw SyntaxError(SourceSpan{line, col, i, i + 1}, "character '" + std::string(1, c) + "'",
                          {"a token"});
    }
    out.push_back(Token{TokenKind::End, "", SourceSpan{line, col, i, i}});
    return out;
}

std::string describe(const Token& t)
{
    switch (t.kind) {
    case TokenKind::End:
        return "end of input";
    case TokenKind::Hash:
        return "'#'";
    default:
        return "'" + t.text + "'";
    }
}

/* -------------------------------------------------------------------------- */

TokenStream::TokenStream(std::string_view text, LexMode mode)
    : _source(text), _tokens(tokenize(text, mode))
{
}

const Token& TokenStream::peek(std::size_t ahead) const
{
    return _tokens[std::min(_pos + ahead, _tokens.size() - 1)];
}

const Token& TokenStream::next()
{
    const Token& t = _tokens[_pos];
    if (_pos + 1 < _tokens.size())
        ++_pos;
    return t;
}

bool TokenStream::is_punct(std::string_view p, std::size_t ahead) const
{
    const auto& t = peek(ahead);
    return t.kind == TokenKind::Punct && t.text == p;
}

bool TokenStream::is_word(std::string_view w, std::size_t ahead) const
{
    const auto& t = peek(ahead);
    return t.kind == TokenKind::Word && t.text == w;
}

bool TokenStream::accept_punct(std::string_view p)
{
    if (!is_punct(p))
        return false;
    next();
    return true;
}

bool TokenStream::accept_word(std::string_view w)
{
    if (!is_word(w))
        return false;
    next();
    return true;
}

const Token& TokenStream::expect_punct(std::string_view p)
{
    if (!is_punct(p))
        fail({"'" + std::string(p) + "'"});
    return next();
}

const Token& TokenStream::expect_word(std::string_view w)
{
    if (!is_word(w))
        fail({"'" + std::string(w) + "'"});
    return next();
}

const Token& TokenStream::expect_identifier(std::string_view what)
{
    if (!is_any_word())
        fail({std::string(what)});
    return next();
}

std::size_t TokenStream::expect_number(std::string_view what)
{
    if (!is_any_word() || !is_number(peek().text))
        fail({std::string(what)});
    const auto& t = next();
    try {
        return std::stoull(t.text);
    } catch (const std::exception&) {
        throw SyntaxError(t.span, describe(t), {std::string(what)});
    }
}

void TokenStream::fail(std::vector<std::string> expected) const
{
    throw SyntaxError(peek().span, describe(peek()), std::move(expected));
}

SourceSpan TokenStream::span_from(const SourceSpan& start) const
{
    const auto& last = _pos == 0 ? _tokens[0] : _tokens[_pos - 1];
    SourceSpan s = start;
    s.end = std::max(start.begin, last.span.end);
    return s;
}

} // namespace isa::detail
