#pragma once

#include "isa/history.hpp"
#include "lexer.hpp"

namespace isa::detail {

Query parse_query(TokenStream& ts);
AnswerFunction parse_answers(TokenStream& ts);
History parse_history(TokenStream& ts);

} // namespace isa::detail
