#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace isa::cli {

/// Runs one `isa` invocation. `args` excludes the program name; `in` feeds
/// the interactive environment of `repl`. Returns the process exit code.
int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace isa::cli
