#pragma once

#include "isa/history.hpp"

#include <string>
#include <string_view>

namespace isa {

// Literal syntax:
//   query    (offer0)   (offer, #client0)      labels bare, elements '#id'
//   history  { (offer0) -> yes @0 ; (offer1) -> no @1 }
//   batch    { (offer0) -> yes ; (offer1) -> yes }
//   set      { (offer0) ; (timeout) }
// Formatting is canonical (entries by phase, then query) and parsing it back
// is the identity.

std::string format_query(const Query& q);
std::string format_query_set(const QuerySet& qs);
std::string format_answers(const AnswerFunction& af);
std::string format_history(const History& xi);

Query parse_query(std::string_view text);
AnswerFunction parse_answers(std::string_view text);
/// Phase labels are normalised (order-isomorphic relabelling to 0..k-1).
History parse_history(std::string_view text);

} // namespace isa
