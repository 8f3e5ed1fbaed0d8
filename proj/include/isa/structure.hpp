#pragma once

#include "isa/error.hpp"

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace isa {

/// Opaque element identifier. The lexical order is the canonical order used
/// for iteration and reporting; it carries no semantic weight.
struct Element
{
    std::string id;

    friend auto operator<=>(const Element&, const Element&) = default;
};

using Tuple = std::vector<Element>;

/* -------------------------------------------------------------------------- */
/* Vocabulary                                                                 */
/* -------------------------------------------------------------------------- */

struct Symbol
{
    std::string name;
    std::size_t arity = 0;
    bool is_static = false;
    bool is_relational = false;

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

namespace logic {
inline constexpr std::string_view true_name = "true";
inline constexpr std::string_view false_name = "false";
inline constexpr std::string_view undef_name = "undef";
inline constexpr std::string_view boole_name = "Boole";
inline constexpr std::string_view eq_name = "eq";
inline constexpr std::string_view not_name = "not";
inline constexpr std::string_view and_name = "and";
inline constexpr std::string_view or_name = "or";

bool is_logic_name(std::string_view name);
} // namespace logic

/// Finite signature. Always contains the logic names (static; all but undef
/// relational), which cannot be redeclared.
class Vocabulary
{
public:
    Vocabulary();

    /// Adds a non-logic symbol; throws NameError-free Error on duplicates.
    void add(Symbol symbol);

    [[nodiscard]] const Symbol* find(std::string_view name) const;
    [[nodiscard]] const Symbol& at(std::string_view name) const;
    [[nodiscard]] bool contains(std::string_view name) const { return find(name) != nullptr; }

    /// All symbols in name order, logic names included.
    [[nodiscard]] const std::map<std::string, Symbol, std::less<>>& symbols() const { return _symbols; }
    [[nodiscard]] std::vector<Symbol> user_symbols() const;

    friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

private:
    std::map<std::string, Symbol, std::less<>> _symbols;
};

/* -------------------------------------------------------------------------- */
/* Terms                                                                      */
/* -------------------------------------------------------------------------- */

struct Term
{
    enum class Kind { Var, App };

    Kind kind = Kind::App;
    std::string name; // variable name or symbol name
    std::vector<Term> args;

    static Term var(std::string name) { return Term{Kind::Var, std::move(name), {}}; }
    static Term app(std::string symbol, std::vector<Term> args = {})
    {
        return Term{Kind::App, std::move(symbol), std::move(args)};
    }

    [[nodiscard]] bool is_var() const { return kind == Kind::Var; }
    /// Variable names occurring in the term, sorted and deduplicated.
    [[nodiscard]] std::vector<std::string> variables() const;

    friend auto operator<=>(const Term&, const Term&) = default;
};

using Valuation = std::map<std::string, Element, std::less<>>;

/* -------------------------------------------------------------------------- */
/* Locations and updates                                                      */
/* -------------------------------------------------------------------------- */

struct Location
{
    std::string symbol;
    Tuple args;

    friend auto operator<=>(const Location&, const Location&) = default;
};

struct Update
{
    Location location;
    Element value;

    friend auto operator<=>(const Update&, const Update&) = default;
};

using UpdateSet = std::set<Update>;

std::string to_string(const Location& l);
std::string to_string(const Update& u);
std::string to_string(const UpdateSet& us);

/* -------------------------------------------------------------------------- */
/* Structures                                                                 */
/* -------------------------------------------------------------------------- */

/// Designated elements for the nullary logic names.
struct LogicConstants
{
    Element true_value{"true"};
    Element false_value{"false"};
    Element undef_value{"undef"};
};

/// Finite first-order structure with total interpretations.
///
/// Every symbol is stored as an explicit table over base^arity. Library
/// operations never mutate a structure they were given; `assign` exists for
/// construction (parsers, fixtures, tests).
class Structure
{
public:
    using Table = std::map<Tuple, Element>;

    /// Builds the structure with convention-conforming logic tables and
    /// default values (undef, or false for relational symbols) elsewhere.
    /// The base is sorted and deduplicated.
    Structure(Vocabulary vocabulary, std::vector<Element> base, LogicConstants constants = {});

    [[nodiscard]] const Vocabulary& vocabulary() const { return _vocabulary; }
    [[nodiscard]] const std::vector<Element>& base() const { return _base; }
    [[nodiscard]] bool contains(const Element& e) const;

    [[nodiscard]] const Element& value(std::string_view symbol, const Tuple& args) const;
    [[nodiscard]] const Element& value(const Location& l) const { return value(l.symbol, l.args); }
    [[nodiscard]] const Table& table(std::string_view symbol) const;

    [[nodiscard]] const Element& true_value() const { return value(logic::true_name, {}); }
    [[nodiscard]] const Element& false_value() const { return value(logic::false_name, {}); }
    [[nodiscard]] const Element& undef_value() const { return value(logic::undef_name, {}); }

    /// Value the structure format treats as implicit for `symbol` at `args`.
    [[nodiscard]] Element default_value(const Symbol& symbol, const Tuple& args) const;

    void assign(std::string_view symbol, const Tuple& args, Element value);

    friend bool operator==(const Structure&, const Structure&) = default;

private:
    Vocabulary _vocabulary;
    std::vector<Element> _base;
    std::map<std::string, Table, std::less<>> _interp;
};

/// Calls `fn(tuple)` for every tuple in base^arity, in lexical order.
template<class Fn>
void for_each_tuple(const std::vector<Element>& base, std::size_t arity, Fn&& fn)
{
    Tuple tuple(arity);
    if (arity > 0 && base.empty())
        return;
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
        for (std::size_t i = 0; i < arity; ++i)
            tuple[i] = base[idx[i]];
        fn(static_cast<const Tuple&>(tuple));
        std::size_t pos = arity;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < base.size())
                break;
            idx[pos] = 0;
            if (pos == 0)
                return;
        }
        if (arity == 0)
            return;
    }
}

/// Empty iff every vocabulary convention holds; each entry names the symbol
/// and a witness tuple.
std::vector<Diagnostic> validate_structure(const Vocabulary& vocabulary, const Structure& x);

Element eval_term(const Structure& x, const Term& t, const Valuation& valuation);

/// First location (in update order) carrying two distinct values, if any.
std::optional<Location> detect_clash(const UpdateSet& updates);

Structure apply_updates(const Structure& x, const UpdateSet& updates);

/// Whether `u` is trivial in `x`, i.e. assigns the location its current value.
bool is_trivial(const Structure& x, const Update& u);

/* -------------------------------------------------------------------------- */
/* Isomorphisms                                                               */
/* -------------------------------------------------------------------------- */

class Isomorphism
{
public:
    Isomorphism() = default;
    explicit Isomorphism(std::map<Element, Element> mapping) : _mapping(std::move(mapping)) {}

    static Isomorphism identity(const std::vector<Element>& base);

    [[nodiscard]] const std::map<Element, Element>& mapping() const { return _mapping; }
    [[nodiscard]] const Element& operator()(const Element& e) const;
    [[nodiscard]] Isomorphism inverse() const;

private:
    std::map<Element, Element> _mapping;
};

Tuple apply_isomorphism(const Isomorphism& i, const Tuple& t);
Structure apply_isomorphism(const Isomorphism& i, const Structure& x);
Update apply_isomorphism(const Isomorphism& i, const Update& u);
UpdateSet apply_isomorphism(const Isomorphism& i, const UpdateSet& us);

/// True iff `i` is a bijection base(x) -> base(y) commuting with every
/// interpretation.
bool check_isomorphism(const std::map<Element, Element>& i, const Structure& x, const Structure& y);

} // namespace isa
