#pragma once

#include "isa/structure.hpp"

#include <string>
#include <string_view>

namespace isa {

/// Parses the line-oriented structure format:
///
///     base e1 e2 ...
///     static f/1
///     dynamic owner/0
///     relational p/1
///     dynamic relational q/2
///     interp f (e1) = e2
///
/// Logic names are generated from the conventions; `interp` lines may
/// override any entry, including logic ones.
Structure parse_structure(std::string_view text);

/// Canonical form: sorted base, user symbols by name, then only the
/// interpretation entries that differ from their implicit value.
std::string print_structure(const Structure& x);

} // namespace isa
