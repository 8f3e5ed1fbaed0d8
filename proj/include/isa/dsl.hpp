#pragma once

#include "isa/algorithm.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace isa {

/// Parsed `.isa` source. The syntax tree and the algorithm share one
/// representation; every node carries its span.
using SpecAst = AlgorithmSpec;

/// Parses a `.isa` file.
///
///     algorithm NAME [strict]
///     vocabulary { (static|dynamic|relational|dynamic relational) f/n ... }
///     labels { l1 l2 ... }
///     state S { base e1 e2 ...  interp f (e1) = e2 ... }
///     initial S1 S2 ...
///     query Q = (component, ...)
///     issue NAME: when GUARD emit Q
///     final NAME: when GUARD (succeed|fail)
///     update NAME: when GUARD f(t1, ...) := t
///     bounds { query_length N issued N }
///     witness { t1, t2, ... }
///
/// Guards: `start`, `answered(Q)`, `unanswered(Q)`, `reply(Q) = t`,
/// `before(Q1, Q2)`, `simultaneous(Q1, Q2)`, `t1 = t2`, `not`, `and`, `or`
/// and parentheses; precedence not > and > or, binary operators associate
/// to the left. Terms are symbol applications and `reply(Q)`; witness terms
/// use `?x` variables instead. `#` starts a comment.
///
/// Throws SyntaxError, NameError or ArityError with the offending span.
SpecAst parse_spec(std::string_view text);

/// Canonical text; parse_spec(print_spec(ast)) == ast.
std::string print_spec(const SpecAst& ast);

std::string print_term(const Term& t, bool witness_context = false);
std::string print_guard(const Guard& g);

/// Static checks beyond parsing: nonempty states and initial states, initial
/// states declared, structures valid, positive bounds, acyclic templates,
/// label/symbol name separation, and (strict mode) a final rule present.
std::vector<Diagnostic> validate_spec(const SpecAst& ast);

/// Reads and parses a file; I/O failures throw isa::Error.
SpecAst load_spec(const std::string& path);
std::string read_file(const std::string& path);

} // namespace isa
