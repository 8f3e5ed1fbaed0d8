#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace isa {

/// Position of a node in DSL or literal source text.
///
/// Spans are bookkeeping only: two spans always compare equal, so the
/// defaulted equality of every AST node that carries one is structural
/// equality "modulo spans".
struct SourceSpan
{
    std::size_t line = 0;   // 1-based; 0 means "not from source"
    std::size_t column = 0; // 1-based
    std::size_t begin = 0;  // byte offsets, begin <= end
    std::size_t end = 0;

    [[nodiscard]] bool known() const { return line != 0; }
    friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

std::string to_string(const SourceSpan& span);

enum class Severity { Error, Warning };

struct Diagnostic
{
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
};

std::string to_string(const Diagnostic& d);

[[nodiscard]] inline bool has_errors(const std::vector<Diagnostic>& ds)
{
    for (const auto& d : ds)
        if (d.severity == Severity::Error)
            return true;
    return false;
}

/* -------------------------------------------------------------------------- */

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// structure-core
class UnboundVariable : public Error { public: using Error::Error; };
class ArityMismatch : public Error { public: using Error::Error; };
class ElementNotInDomain : public Error { public: using Error::Error; };
class UnknownSymbol : public Error { public: using Error::Error; };

class ClashError : public Error
{
public:
    ClashError(std::string location, const std::string& what)
        : Error(what), _location(std::move(location)) {}
    [[nodiscard]] const std::string& location() const { return _location; }

private:
    std::string _location;
};

// history-algebra
class NonContiguousPhases : public Error { public: using Error::Error; };
class DomainMismatch : public Error { public: using Error::Error; };
class QueryNotInDomain : public Error { public: using Error::Error; };
class OverlappingDomain : public Error { public: using Error::Error; };
class EmptyBatch : public Error { public: using Error::Error; };
class PreconditionViolation : public Error { public: using Error::Error; };

class CapExceeded : public Error
{
public:
    explicit CapExceeded(std::size_t cap)
        : Error("pending queries remain after " + std::to_string(cap) + " completion rounds"), _cap(cap) {}
    [[nodiscard]] std::size_t cap() const { return _cap; }

private:
    std::size_t _cap;
};

// algorithm-model
class InstantiationError : public Error { public: using Error::Error; };
class NotSuccessful : public Error { public: using Error::Error; };
class IncompatibleHistory : public Error { public: using Error::Error; };

// parsing
class ParseError : public Error
{
public:
    ParseError(SourceSpan span, const std::string& message)
        : Error(to_string(span) + ": " + message), _span(span), _message(message) {}
    [[nodiscard]] const SourceSpan& span() const { return _span; }
    [[nodiscard]] const std::string& message() const { return _message; }

private:
    SourceSpan _span;
    std::string _message;
};

class SyntaxError : public ParseError
{
public:
    SyntaxError(SourceSpan span, std::string found, std::vector<std::string> expected);
    [[nodiscard]] const std::vector<std::string>& expected() const { return _expected; }

private:
    std::vector<std::string> _expected;
};

class NameError : public ParseError { public: using ParseError::ParseError; };
class ArityError : public ParseError { public: using ParseError::ParseError; };

// execution
class EnvironmentProtocolError : public Error { public: using Error::Error; };

// analysis
class ConfigMismatch : public Error { public: using Error::Error; };

} // namespace isa
