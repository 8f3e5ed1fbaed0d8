#include "isa/structure.hpp"

#include <algorithm>
#include <sstream>

namespace isa {

std::string to_string(const SourceSpan& span)
{
    if (!span.known())
        return "<no location>";
    return std::to_string(span.line) + ":" + std::to_string(span.column);
}

std::string to_string(const Diagnostic& d)
{
    std::string out = d.severity == Severity::Error ? "error" : "warning";
    if (d.span.known())
        out += " at " + to_string(d.span);
    return out + ": " + d.message;
}

namespace {

std::string join_expected(const std::vector<std::string>& expected)
{
    std::string out;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0)
            out += i + 1 == expected.size() ? " or " : ", ";
        out += expected[i];
    }
    return out;
}

} // namespace

SyntaxError::SyntaxError(SourceSpan span, std::string found, std::vector<std::string> expected)
    : ParseError(span, "expected " + join_expected(expected) + ", found " + found),
      _expected(std::move(expected))
{
}

/* -------------------------------------------------------------------------- */

bool logic::is_logic_name(std::string_view name)
{
    return name == true_name || name == false_name || name == undef_name || name == boole_name ||
           name == eq_name || name == not_name || name == and_name || name == or_name;
}

Vocabulary::Vocabulary()
{
    auto put = [this](std::string_view name, std::size_t arity, bool relational) {
        _symbols.emplace(std::string(name), Symbol{std::string(name), arity, true, relational});
    };
    put(logic::true_name, 0, true);
    put(logic::false_name, 0, true);
    put(logic::undef_name, 0, false);
    put(logic::boole_name, 1, true);
    put(logic::eq_name, 2, true);
    put(logic::not_name, 1, true);
    put(logic::and_name, 2, true);
    put(logic::or_name, 2, true);
}

void Vocabulary::add(Symbol symbol)
{
    if (_symbols.contains(symbol.name))
        throw Error("symbol '" + symbol.name + "' declared twice");
    auto name = symbol.name;
    _symbols.emplace(std::move(name), std::move(symbol));
}

const Symbol* Vocabulary::find(std::string_view name) const
{
    auto it = _symbols.find(name);
    return it == _symbols.end() ? nullptr : &it->second;
}

const Symbol& Vocabulary::at(std::string_view name) const
{
    if (const auto* s = find(name))
        return *s;
    throw UnknownSymbol("unknown symbol '" + std::string(name) + "'");
}

std::vector<Symbol> Vocabulary::user_symbols() const
{
    std::vector<Symbol> out;
    for (const auto& [name, s] : _symbols)
        if (!logic::is_logic_name(name))
            out.push_back(s);
    return out;
}

/* -------------------------------------------------------------------------- */

std::vector<std::string> Term::variables() const
{
    std::set<std::string> seen;
    auto walk = [&seen](const Term& t, auto&& self) -> void {
        if (t.is_var())
            seen.insert(t.name);
        for (const auto& a : t.args)
            self(a, self);
    };
    walk(*this, walk);
    return {seen.begin(), seen.end()};
}

/* -------------------------------------------------------------------------- */

std::string to_string(const Location& l)
{
    std::string out = l.symbol + "(";
    for (std::size_t i = 0; i < l.args.size(); ++i) {
        if (i > 0)
            out += ", ";
        out += l.args[i].id;
    }
    return out + ")";
}

std::string to_string(const Update& u)
{
    return to_string(u.location) + " := " + u.value.id;
}

std::string to_string(const UpdateSet& us)
{
    std::string out = "{";
    bool first = true;
    for (const auto& u : us) {
        out += first ? " " : " ; ";
        out += to_string(u);
        first = false;
    }
    return out + " }";
}

/* -------------------------------------------------------------------------- */

Structure::Structure(Vocabulary vocabulary, std::vector<Element> base, LogicConstants constants)
    : _vocabulary(std::move(vocabulary)), _base(std::move(base))
{
    std::sort(_base.begin(), _base.end());
    _base.erase(std::unique(_base.begin(), _base.end()), _base.end());

    // Nullary logic names first: the other defaults are derived from them.
    _interp[std::string(logic::true_name)][{}] = constants.true_value;
    _interp[std::string(logic::false_name)][{}] = constants.false_value;
    _interp[std::string(logic::undef_name)][{}] = constants.undef_value;

    for (const auto& [name, symbol] : _vocabulary.symbols()) {
        if (symbol.arity == 0 && logic::is_logic_name(name))
            continue;
        auto& table = _interp[name];
        for_each_tuple(_base, symbol.arity, [&](const Tuple& args) {
            table.emplace(args, default_value(symbol, args));
        });
    }
}

bool Structure::contains(const Element& e) const
{
    return std::binary_search(_base.begin(), _base.end(), e);
}

const Structure::Table& Structure::table(std::string_view symbol) const
{
    auto it = _interp.find(symbol);
    if (it == _interp.end())
        throw UnknownSymbol("unknown symbol '" + std::string(symbol) + "'");
    return it->second;
}

const Element& Structure::value(std::string_view symbol, const Tuple& args) const
{
    const auto& t = table(symbol);
    auto it = t.find(args);
    if (it == t.end()) {
        const auto& s = _vocabulary.at(symbol);
        if (args.size() != s.arity)
            throw ArityMismatch("symbol '" + s.name + "' has arity " + std::to_string(s.arity) +
                                ", applied to " + std::to_string(args.size()) + " arguments");
        throw ElementNotInDomain("argument of '" + s.name + "' outside the base set");
    }
    return it->second;
}

Element Structure::default_value(const Symbol& symbol, const Tuple& args) const
{
    const auto& name = symbol.name;
    if (name == logic::true_name)
        return true_value();
    if (name == logic::false_name)
        return false_value();
    if (name == logic::undef_name)
        return undef_value();

    const Element& t = true_value();
    const Element& f = false_value();
    auto boolean = [&](const Element& e) { return e == t || e == f; };
    auto truth = [&](bool b) { return b ? t : f; };

    if (name == logic::boole_name)
        return truth(boolean(args[0]));
    if (name == logic::eq_name)
        return truth(args[0] == args[1]);
    if (name == logic::not_name)
        return truth(args[0] == f);
    if (name == logic::and_name)
        return truth(args[0] == t && args[1] == t);
    if (name == logic::or_name)
        return truth(boolean(args[0]) && boolean(args[1]) && (args[0] == t || args[1] == t));
    return symbol.is_relational ? f : undef_value();
}

void Structure::assign(std::string_view symbol, const Tuple& args, Element value)
{
    const auto& s = _vocabulary.at(symbol);
    if (args.size() != s.arity)
        throw ArityMismatch("symbol '" + s.name + "' has arity " + std::to_string(s.arity));
    for (const auto& a : args)
        if (!contains(a))
            throw ElementNotInDomain("element '" + a.id + "' is not in the base set");
    if (!contains(value))
        throw ElementNotInDomain("element '" + value.id + "' is not in the base set");
    _interp.find(symbol)->second[args] = std::move(value);
}

/* -------------------------------------------------------------------------- */

std::vector<Diagnostic> validate_structure(const Vocabulary& vocabulary, const Structure& x)
{
    std::vector<Diagnostic> out;
    auto report = [&out](std::string message) {
        out.push_back(Diagnostic{Severity::Error, std::move(message), {}});
    };
    auto render = [](const std::string& symbol, const Tuple& args) {
        return to_string(Location{symbol, args});
    };

    if (!(vocabulary == x.vocabulary()))
        report("structure vocabulary differs from the declared vocabulary");
    if (x.base().empty()) {
        report("base set is empty");
        return out;
    }

    const Element& t = x.true_value();
    const Element& f = x.false_value();
    const Element& u = x.undef_value();
    if (t == f || t == u || f == u)
        report("true, false and undef are not distinct (true=" + t.id + ", false=" + f.id +
               ", undef=" + u.id + ")");

    for (const auto& [name, symbol] : x.vocabulary().symbols()) {
        const auto& table = x.table(name);
        for_each_tuple(x.base(), symbol.arity, [&](const Tuple& args) {
            auto it = table.find(args);
            if (it == table.end()) {
                report("symbol " + name + " has no value at " + render(name, args));
                return;
            }
            const Element& v = it->second;
            if (!x.contains(v))
                report("symbol " + name + " takes value " + v.id + " outside the base at " +
                       render(name, args));
            if (symbol.is_relational && v != t && v != f)
                report("relational symbol " + name + " takes non-boolean value " + v.id + " at " +
                       render(name, args));
            if (logic::is_logic_name(name) && symbol.arity > 0 && v != x.default_value(symbol, args))
                report("logic symbol " + name + " deviates from its convention at " +
                       render(name, args) + " (value " + v.id + ")");
        });
    }
    return out;
}

Element eval_term(const Structure& x, const Term& t, const Valuation& valuation)
{
    if (t.is_var()) {
        auto it = valuation.find(t.name);
        if (it == valuation.end())
            throw UnboundVariable("variable '" + t.name + "' has no value");
        return it->second;
    }
    const auto& symbol = x.vocabulary().at(t.name);
    if (symbol.arity != t.args.size())
        throw ArityMismatch("symbol '" + t.name + "' has arity " + std::to_string(symbol.arity) +
                            ", applied to " + std::to_string(t.args.size()) + " arguments");
    Tuple args;
    args.reserve(t.args.size());
    for (const auto& a : t.args)
        args.push_back(eval_term(x, a, valuation));
    return x.value(t.name, args);
}

std::optional<Location> detect_clash(const UpdateSet& updates)
{
    // Updates are ordered by location first, so clashing pairs are adjacent.
    const Update* prev = nullptr;
    for (const auto& u : updates) {
        if (prev != nullptr && prev->location == u.location && prev->value != u.value)
            return u.location;
        prev = &u;
    }
    return std::nullopt;
}

Structure apply_updates(const Structure& x, const UpdateSet& updates)
{
    if (auto clash = detect_clash(updates))
        throw ClashError(to_string(*clash), "clashing updates at " + to_string(*clash));
    Structure next = x;
    for (const auto& u : updates) {
        const auto& s = x.vocabulary().at(u.location.symbol);
        if (s.is_static)
            throw Error("update of static symbol '" + s.name + "'");
        next.assign(u.location.symbol, u.location.args, u.value);
    }
    return next;
}

bool is_trivial(const Structure& x, const Update& u)
{
    return x.value(u.location) == u.value;
}

/* -------------------------------------------------------------------------- */

Isomorphism Isomorphism::identity(const std::vector<Element>& base)
{
    std::map<Element, Element> m;
    for (const auto& e : base)
        m.emplace(e, e);
    return Isomorphism(std::move(m));
}

const Element& Isomorphism::operator()(const Element& e) const
{
    auto it = _mapping.find(e);
    if (it == _mapping.end())
        throw ElementNotInDomain("element '" + e.id + "' is outside the isomorphism's domain");
    return it->second;
}

Isomorphism Isomorphism::inverse() const
{
    std::map<Element, Element> inv;
    for (const auto& [a, b] : _mapping)
        inv.emplace(b, a);
    return Isomorphism(std::move(inv));
}

Tuple apply_isomorphism(const Isomorphism& i, const Tuple& t)
{
    Tuple out;
    out.reserve(t.size());
    for (const auto& e : t)
        out.push_back(i(e));
    return out;
}

Structure apply_isomorphism(const Isomorphism& i, const Structure& x)
{
    std::vector<Element> base;
    for (const auto& e : x.base())
        base.push_back(i(e));
    LogicConstants constants{i(x.true_value()), i(x.false_value()), i(x.undef_value())};
    Structure y(x.vocabulary(), std::move(base), constants);
    for (const auto& [name, symbol] : x.vocabulary().symbols()) {
        if (symbol.arity == 0 && logic::is_logic_name(name))
            continue;
        for (const auto& [args, value] : x.table(name))
            y.assign(name, apply_isomorphism(i, args), i(value));
    }
    return y;
}

Update apply_isomorphism(const Isomorphism& i, const Update& u)
{
    return Update{Location{u.location.symbol, apply_isomorphism(i, u.location.args)}, i(u.value)};
}

UpdateSet apply_isomorphism(const Isomorphism& i, const UpdateSet& us)
{
    UpdateSet out;
    for (const auto& u : us)
        out.insert(apply_isomorphism(i, u));
    return out;
}

bool check_isomorphism(const std::map<Element, Element>& i, const Structure& x, const Structure& y)
{
    if (!(x.vocabulary() == y.vocabulary()))
        return false;
    if (i.size() != x.base().size() || x.base().size() != y.base().size())
        return false;
    std::set<Element> image;
    for (const auto& e : x.base()) {
        auto it = i.find(e);
        if (it == i.end() || !y.contains(it->second))
            return false;
        image.insert(it->second);
    }
    if (image.size() != y.base().size())
        return false;

    Isomorphism iso(i);
    for (const auto& [name, symbol] : x.vocabulary().symbols()) {
        bool ok = true;
        for_each_tuple(x.base(), symbol.arity, [&](const Tuple& args) {
            if (ok && iso(x.value(name, args)) != y.value(name, apply_isomorphism(iso, args)))
                ok = false;
        });
        if (!ok)
            return false;
    }
    return true;
}

} // namespace isa
