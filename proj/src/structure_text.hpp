#pragma once

// Pieces of the structure format shared with the spec language, where a
// state block is a structure body without symbol declarations.

#include "isa/structure.hpp"
#include "lexer.hpp"

#include <string>

namespace isa::detail {

bool is_structure_keyword(const Token& t);

/// `base e1 e2 ...`
std::vector<Element> parse_base(TokenStream& ts);

/// Zero or more `interp` lines applied on top of the conventional defaults.
Structure parse_interpretations(TokenStream& ts, const Vocabulary& vocabulary, std::vector<Element> base);

/// `base ...` line and non-default `interp` lines, each prefixed by `indent`.
std::string print_structure_body(const Structure& x, const std::string& indent);

/// `static f/1` style declaration of a user symbol.
std::string declaration(const Symbol& s);

} // namespace isa::detail
