#include "isa/dsl.hpp"

#include "lexer.hpp"
#include "structure_text.hpp"

#include <array>
#include <fstream>
#include <sstream>

namespace isa {

namespace {

using detail::Token;
using detail::TokenKind;
using detail::TokenStream;

constexpr std::array reserved_words = {
    "algorithm", "strict",  "vocabulary", "labels",     "state",    "initial",     "query",
    "issue",     "final",   "update",     "bounds",     "witness",  "when",        "emit",
    "succeed",   "fail",    "start",      "answered",   "unanswered", "reply",     "before",
    "simultaneous", "not",  "and",        "or",         "base",     "static",      "dynamic",
    "relational", "interp",
};

bool is_reserved(std::string_view w)
{
    for (const auto* r : reserved_words)
        if (w == r)
            return true;
    return false;
}

class SpecParser
{
public:
    explicit SpecParser(std::string_view text) : _ts(text, detail::LexMode::Source) {}

    SpecAst parse()
    {
        const auto start = _ts.expect_word("algorithm").span;
        _spec.name = name("an algorithm name").text;
        _spec.strict = _ts.accept_word("strict");
        _spec.span = _ts.span_from(start);

        if (_ts.accept_word("vocabulary"))
            parse_vocabulary();
        if (_ts.accept_word("labels"))
            parse_labels();
        while (_ts.is_word("state"))
            parse_state();
        if (_ts.accept_word("initial")) {
            while (_ts.is_any_word() && !is_reserved(_ts.peek().text)) {
                const auto& t = _ts.next();
                _spec.initial.push_back(NameRef{t.text, t.span});
            }
        }
        while (_ts.is_word("query"))
            parse_query();
        while (_ts.is_word("issue") || _ts.is_word("final") || _ts.is_word("update"))
            parse_rule();
        if (_ts.is_word("bounds"))
            parse_bounds();
        if (_ts.accept_word("witness"))
            parse_witness();
        if (!_ts.at_end())
            _ts.fail({"a section or rule keyword", "end of input"});
        return std::move(_spec);
    }

private:
    const Token& name(std::string_view what)
    {
        if (_ts.is_any_word() && is_reserved(_ts.peek().text))
            throw SyntaxError(_ts.peek().span, "reserved word " + describe(_ts.peek()),
                                      {std::string(what)});
        return _ts.expect_identifier(what);
    }

    void parse_vocabulary()
    {
        _ts.expect_punct("{");
        while (!_ts.accept_punct("}")) {
            bool is_static = false, is_relational = false;
            if (_ts.accept_word("static")) {
                is_static = true;
            } else if (_ts.accept_word("dynamic")) {
                is_relational = _ts.accept_word("relational");
            } else if (_ts.accept_word("relational")) {
                is_static = is_relational = true;
            } else {
                _ts.fail({"'static'", "'dynamic'", "'relational'", "'}'"});
            }
            // One keyword may introduce several declarations.
            do {
                const auto& n = name("a symbol name");
                _ts.expect_punct("/");
                auto arity = _ts.expect_number("an arity");
                if (_spec.vocabulary.contains(n.text))
                    throw NameError(n.span, "symbol '" + n.text + "' is already declared");
                _spec.vocabulary.add(Symbol{n.text, arity, is_static, is_relational});
            } while (_ts.is_any_word() && !is_reserved(_ts.peek().text) && _ts.is_punct("/", 1));
        }
    }

    void parse_labels()
    {
        _ts.expect_punct("{");
        while (!_ts.accept_punct("}")) {
            const auto& n = name("a label");
            if (_spec.vocabulary.contains(n.text))
                throw NameError(n.span, "label '" + n.text + "' clashes with a symbol name");
            for (const auto& l : _spec.labels)
                if (l.name == n.text)
                    throw NameError(n.span, "label '" + n.text + "' declared twice");
            _spec.labels.push_back(NameRef{n.text, n.span});
        }
    }

    void parse_state()
    {
        const auto start = _ts.expect_word("state").span;
        const auto& n = name("a state name");
        _ts.expect_punct("{");
        auto base = detail::parse_base(_ts);
        auto structure = detail::parse_interpretations(_ts, _spec.vocabulary, std::move(base));
        _ts.expect_punct("}");
        _spec.states.push_back(StateDecl{n.text, std::move(structure), _ts.span_from(start)});
    }

    bool is_label(std::string_view w) const
    {
        for (const auto& l : _spec.labels)
            if (l.name == w)
                return true;
        return false;
    }

    void parse_query()
    {
        const auto start = _ts.expect_word("query").span;
        const auto& n = name("a query template name");
        if (_spec.find_query(n.text) != nullptr)
            throw NameError(n.span, "query template '" + n.text + "' declared twice");
        _ts.expect_punct("=");
        _ts.expect_punct("(");
        QueryTemplate tmpl{n.text, {}, {}};
        do {
            if (_ts.is_any_word() && is_label(_ts.peek().text) && !_ts.is_punct("(", 1))
                tmpl.components.emplace_back(Label{_ts.next().text});
            else
                tmpl.components.emplace_back(term(false));
        } while (_ts.accept_punct(","));
        _ts.expect_punct(")");
        tmpl.span = _ts.span_from(start);
        _spec.queries.push_back(std::move(tmpl));
    }

    std::string query_ref()
    {
        const auto& t = _ts.expect_identifier("a query template name");
        if (_spec.find_query(t.text) == nullptr)
            throw NameError(t.span, "undeclared query template '" + t.text + "'");
        return t.text;
    }

    Term term(bool witness)
    {
        const auto start = _ts.peek().span;
        if (witness && _ts.accept_punct("?"))
            return Term::var(_ts.expect_identifier("a variable name").text);
        if (!witness && _ts.accept_word("reply")) {
            _ts.expect_punct("(");
            auto q = query_ref();
            _ts.expect_punct(")");
            return Term::var(std::move(q));
        }
        if (!_ts.is_any_word())
            _ts.fail({witness ? "a term or '?variable'" : "a term"});
        const auto& t = _ts.next();
        const auto* symbol = _spec.vocabulary.find(t.text);
        if (symbol == nullptr)
            throw NameError(t.span, "undeclared symbol '" + t.text + "'");
        Term out = Term::app(t.text);
        if (symbol->arity == 0) {
            if (_ts.is_punct("(") && _ts.is_punct(")", 1)) {
                _ts.next();
                _ts.next();
            }
            return out;
        }
        if (!_ts.is_punct("("))
            throw ArityError(_ts.span_from(start), "symbol '" + t.text + "' has arity " +
                                                       std::to_string(symbol->arity) + " but no arguments");
        _ts.next();
        do {
            out.args.push_back(term(witness));
        } while (_ts.accept_punct(","));
        _ts.expect_punct(")");
        if (out.args.size() != symbol->arity)
            throw ArityError(_ts.span_from(start), "symbol '" + t.text + "' has arity " +
                                                       std::to_string(symbol->arity) + ", given " +
                                                       std::to_string(out.args.size()) + " arguments");
        return out;
    }

    /* ---------------------------------------------------------------------- */

    Guard guard() { return disjunction(); }

    Guard disjunction()
    {
        const auto start = _ts.peek().span;
        Guard g = conjunction();
        while (_ts.accept_word("or")) {
            g = Guard::disj(std::move(g), conjunction());
            g.span = _ts.span_from(start);
        }
        return g;
    }

    Guard conjunction()
    {
        const auto start = _ts.peek().span;
        Guard g = negation();
        while (_ts.accept_word("and")) {
            g = Guard::conj(std::move(g), negation());
            g.span = _ts.span_from(start);
        }
        return g;
    }

    Guard negation()
    {
        const auto start = _ts.peek().span;
        if (_ts.accept_word("not")) {
            Guard g = Guard::negate(negation());
            g.span = _ts.span_from(start);
            return g;
        }
        return atom();
    }

    Guard atom()
    {
        const auto start = _ts.peek().span;
        Guard g;
        if (_ts.accept_punct("(")) {
            g = guard();
            _ts.expect_punct(")");
            return g;
        }
        if (_ts.accept_word("start")) {
            g = Guard::start();
        } else if (_ts.is_word("answered") || _ts.is_word("unanswered")) {
            bool answered = _ts.next().text == "answered";
            _ts.expect_punct("(");
            auto q = query_ref();
            _ts.expect_punct(")");
            g = answered ? Guard::answered(std::move(q)) : Guard::unanswered(std::move(q));
        } else if (_ts.is_word("before") || _ts.is_word("simultaneous")) {
            bool before = _ts.next().text == "before";
            _ts.expect_punct("(");
            auto a = query_ref();
            _ts.expect_punct(",");
            auto b = query_ref();
            _ts.expect_punct(")");
            g = before ? Guard::before(std::move(a), std::move(b))
                       : Guard::simultaneous(std::move(a), std::move(b));
        } else if (_ts.accept_word("reply")) {
            _ts.expect_punct("(");
            auto q = query_ref();
            _ts.expect_punct(")");
            _ts.expect_punct("=");
            g = Guard::reply_eq(std::move(q), term(false));
        } else if (_ts.is_any_word() && !is_reserved(_ts.peek().text)) {
            Term lhs = term(false);
            _ts.expect_punct("=");
            g = Guard::term_eq(std::move(lhs), term(false));
        } else {
            _ts.fail({"a guard atom", "'not'", "'('"});
        }
        g.span = _ts.span_from(start);
        return g;
    }

    void parse_rule()
    {
        const auto start = _ts.peek().span;
        const std::string kind = _ts.next().text;
        const auto& n = _ts.expect_identifier("a rule name");
        std::string rule_name = n.text;
        _ts.expect_punct(":");
        _ts.expect_word("when");
        Guard g = guard();

        if (kind == "issue") {
            _ts.expect_word("emit");
            auto q = query_ref();
            _spec.issue_rules.push_back(IssueRule{rule_name, std::move(g), std::move(q), _ts.span_from(start)});
        } else if (kind == "final") {
            FinalKind fk = FinalKind::Succeed;
            if (_ts.accept_word("fail"))
                fk = FinalKind::Fail;
            else if (!_ts.accept_word("succeed"))
                _ts.fail({"'succeed'", "'fail'", "'and'", "'or'"});
            _spec.final_rules.push_back(FinalRule{rule_name, std::move(g), fk, _ts.span_from(start)});
        } else {
            if (!_ts.is_any_word() || is_reserved(_ts.peek().text))
                _ts.fail({"a location", "'and'", "'or'"});
            const auto loc_start = _ts.peek().span;
            Term loc = term(false);
            if (loc.is_var())
                throw SyntaxError(_ts.span_from(loc_start), "reply(" + loc.name + ")", {"a location"});
            _ts.expect_punct(":=");
            Term value = term(false);
            _spec.update_rules.push_back(UpdateRule{rule_name, std::move(g), loc.name, std::move(loc.args),
                                                    std::move(value), _ts.span_from(start)});
        }
    }

    void parse_bounds()
    {
        const auto start = _ts.expect_word("bounds").span;
        _ts.expect_punct("{");
        _ts.expect_word("query_length");
        _spec.bounds.max_query_len = _ts.expect_number("a query length bound");
        _ts.expect_word("issued");
        _spec.bounds.max_issued = _ts.expect_number("an issued-count bound");
        _ts.expect_punct("}");
        _spec.bounds.span = _ts.span_from(start);
    }

    void parse_witness()
    {
        _ts.expect_punct("{");
        if (_ts.accept_punct("}"))
            return;
        do {
            const auto start = _ts.peek().span;
            Term t = term(true);
            _spec.witness.push_back(WitnessTerm{std::move(t), _ts.span_from(start)});
        } while (_ts.accept_punct(","));
        _ts.expect_punct("}");
    }

    TokenStream _ts;
    SpecAst _spec;
};

} // namespace

SpecAst parse_spec(std::string_view text)
{
    return SpecParser(text).parse();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SpecAst load_spec(const std::string& path)
{
    return parse_spec(read_file(path));
}

} // namespace isa
