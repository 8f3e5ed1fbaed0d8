#include "isa/structure_io.hpp"

#include "structure_text.hpp"

namespace isa {
namespace detail {

bool is_structure_keyword(const Token& t)
{
    if (t.kind != TokenKind::Word)
        return false;
    return t.text == "base" || t.text == "static" || t.text == "dynamic" ||
           t.text == "relational" || t.text == "interp";
}

std::vector<Element> parse_base(TokenStream& ts)
{
    ts.expect_word("base");
    std::vector<Element> base;
    while (ts.is_any_word() && !is_structure_keyword(ts.peek()))
        base.push_back(Element{ts.next().text});
    if (base.empty())
        ts.fail({"an element identifier"});
    return base;
}

namespace {

struct InterpLine
{
    std::string symbol;
    Tuple args;
    Element value;
    SourceSpan span;
};

InterpLine parse_interp_line(TokenStream& ts, const Vocabulary& vocabulary)
{
    const auto start = ts.expect_word("interp").span;
    const auto& name_tok = ts.expect_identifier("a symbol name");
    const auto* symbol = vocabulary.find(name_tok.text);
    if (symbol == nullptr)
        throw NameError(name_tok.span, "undeclared symbol '" + name_tok.text + "'");
    InterpLine line{name_tok.text, {}, {}, {}};
    ts.expect_punct("(");
    if (!ts.is_punct(")")) {
        do {
            line.args.push_back(Element{ts.expect_identifier("an element identifier").text});
        } while (ts.accept_punct(","));
    }
    ts.expect_punct(")");
    line.span = ts.span_from(start);
    if (line.args.size() != symbol->arity)
        throw ArityError(line.span, "symbol '" + symbol->name + "' has arity " +
                                        std::to_string(symbol->arity) + ", given " +
                                        std::to_string(line.args.size()) + " arguments");
    ts.expect_punct("=");
    line.value = Element{ts.expect_identifier("an element identifier").text};
    return line;
}

} // namespace

Structure parse_interpretations(TokenStream& ts, const Vocabulary& vocabulary, std::vector<Element> base)
{
    std::vector<InterpLine> lines;
    while (ts.is_word("interp"))
        lines.push_back(parse_interp_line(ts, vocabulary));

    LogicConstants constants;
    for (const auto& l : lines) {
        if (l.symbol == logic::true_name)
            constants.true_value = l.value;
        else if (l.symbol == logic::false_name)
            constants.false_value = l.value;
        else if (l.symbol == logic::undef_name)
            constants.undef_value = l.value;
    }

    std::set<Element> members(base.begin(), base.end());
    auto check_member = [&members](const Element& e, const SourceSpan& span) {
        if (!members.contains(e))
            throw NameError(span, "element '" + e.id + "' is not in the base set");
    };
    for (const auto& l : lines) {
        for (const auto& a : l.args)
            check_member(a, l.span);
        check_member(l.value, l.span);
    }
    for (const auto* c : {&constants.true_value, &constants.false_value, &constants.undef_value})
        if (!members.contains(*c))
            throw NameError(ts.peek().span,
                            "element '" + c->id + "' is not in the base set (needed for a logic name)");

    Structure x(vocabulary, std::move(base), constants);
    for (const auto& l : lines) {
        const auto& s = vocabulary.at(l.symbol);
        if (s.arity == 0 && logic::is_logic_name(s.name))
            continue;
        x.assign(l.symbol, l.args, l.value);
    }
    return x;
}

std::string declaration(const Symbol& s)
{
    std::string kind;
    if (s.is_relational)
        kind = s.is_static ? "relational" : "dynamic relational";
    else
        kind = s.is_static ? "static" : "dynamic";
    return kind + " " + s.name + "/" + std::to_string(s.arity);
}

std::string print_structure_body(const Structure& x, const std::string& indent)
{
    std::string out = indent + "base";
    for (const auto& e : x.base())
        out += " " + e.id;
    out += "\n";

    for (const auto& [name, symbol] : x.vocabulary().symbols()) {
        for (const auto& [args, value] : x.table(name)) {
            Element implicit = symbol.arity == 0 && logic::is_logic_name(name)
                                   ? Element{name}
                                   : x.default_value(symbol, args);
            if (value == implicit)
                continue;
            out += indent + "interp " + name + " (";
            for (std::size_t i = 0; i < args.size(); ++i)
                out += (i > 0 ? ", " : "") + args[i].id;
            out += ") = " + value.id + "\n";
        }
    }
    return out;
}

} // namespace detail

/* -------------------------------------------------------------------------- */

Structure parse_structure(std::string_view text)
{
    using namespace detail;
    TokenStream ts(text, LexMode::Source);
    auto base = parse_base(ts);

    Vocabulary vocabulary;
    while (true) {
        bool is_static = false, is_relational = false;
        if (ts.accept_word("static")) {
            is_static = true;
        } else if (ts.accept_word("dynamic")) {
            is_relational = ts.accept_word("relational");
        } else if (ts.accept_word("relational")) {
            is_static = true;
            is_relational = true;
        } else {
            break;
        }
        const auto& name = ts.expect_identifier("a symbol name");
        ts.expect_punct("/");
        auto arity = ts.expect_number("an arity");
        if (vocabulary.contains(name.text))
            throw NameError(name.span, "symbol '" + name.text + "' declared twice or is a logic name");
        vocabulary.add(Symbol{name.text, arity, is_static, is_relational});
    }

    auto x = parse_interpretations(ts, vocabulary, std::move(base));
    if (!ts.at_end())
        ts.fail({"'interp'", "a declaration", "end of input"});
    return x;
}

std::string print_structure(const Structure& x)
{
    std::string body = detail::print_structure_body(x, "");
    auto eol = body.find('\n');
    std::string out = body.substr(0, eol + 1);
    for (const auto& s : x.vocabulary().user_symbols())
        out += detail::declaration(s) + "\n";
    return out + body.substr(eol + 1);
}

} // namespace isa
