#include "isa/dsl.hpp"

#include "structure_text.hpp"

namespace isa {

std::string print_term(const Term& t, bool witness_context)
{
    if (t.is_var())
        return witness_context ? "?" + t.name : "reply(" + t.name + ")";
    if (t.args.empty())
        return t.name;
    std::string out = t.name + "(";
    for (std::size_t i = 0; i < t.args.size(); ++i)
        out += (i > 0 ? ", " : "") + print_term(t.args[i], witness_context);
    return out + ")";
}

namespace {

// Binding strength: or < and < not < atoms.
int precedence(const Guard& g)
{
    switch (g.kind) {
    case Guard::Kind::Or:
        return 1;
    case Guard::Kind::And:
        return 2;
    case Guard::Kind::Not:
        return 3;
    default:
        return 4;
    }
}

std::string print_guard_at(const Guard& g, int required)
{
    std::string out;
    using K = Guard::Kind;
    switch (g.kind) {
    case K::Start:
        out = "start";
        break;
    case K::Answered:
        out = "answered(" + g.queries[0] + ")";
        break;
    case K::Unanswered:
        out = "unanswered(" + g.queries[0] + ")";
        break;
    case K::ReplyEq:
        out = "reply(" + g.queries[0] + ") = " + print_term(g.terms[0]);
        break;
    case K::Before:
        out = "before(" + g.queries[0] + ", " + g.queries[1] + ")";
        break;
    case K::Simultaneous:
        out = "simultaneous(" + g.queries[0] + ", " + g.queries[1] + ")";
        break;
    case K::TermEq:
        out = print_term(g.terms[0]) + " = " + print_term(g.terms[1]);
        break;
    case K::Not:
        out = "not " + print_guard_at(g.operands[0], 3);
        break;
    case K::And:
        // Left-associative: a right operand of equal strength needs parentheses.
        out = print_guard_at(g.operands[0], 2) + " and " + print_guard_at(g.operands[1], 3);
        break;
    case K::Or:
        out = print_guard_at(g.operands[0], 1) + " or " + print_guard_at(g.operands[1], 2);
        break;
    }
    return precedence(g) < required ? "(" + out + ")" : out;
}

} // namespace

std::string print_guard(const Guard& g)
{
    return print_guard_at(g, 0);
}

std::string print_spec(const SpecAst& ast)
{
    std::string out = "algorithm " + ast.name + (ast.strict ? " strict" : "") + "\n\n";

    auto users = ast.vocabulary.user_symbols();
    if (users.empty()) {
        out += "vocabulary { }\n\n";
    } else {
        out += "vocabulary {\n";
        for (const auto& s : users)
            out += "  " + detail::declaration(s) + "\n";
        out += "}\n\n";
    }

    out += "labels {";
    for (const auto& l : ast.labels)
        out += " " + l.name;
    out += " }\n\n";

    for (const auto& s : ast.states)
        out += "state " + s.name + " {\n" + detail::print_structure_body(s.structure, "  ") + "}\n\n";
    if (!ast.initial.empty()) {
        out += "initial";
        for (const auto& i : ast.initial)
            out += " " + i.name;
        out += "\n\n";
    }

    for (const auto& q : ast.queries) {
        out += "query " + q.name + " = (";
        for (std::size_t i = 0; i < q.components.size(); ++i) {
            if (i > 0)
                out += ", ";
            if (const auto* l = std::get_if<Label>(&q.components[i]))
                out += l->name;
            else
                out += print_term(std::get<Term>(q.components[i]));
        }
        out += ")\n";
    }
    if (!ast.queries.empty())
        out += "\n";

    for (const auto& r : ast.issue_rules)
        out += "issue " + r.name + ": when " + print_guard(r.guard) + " emit " + r.query + "\n";
    for (const auto& r : ast.final_rules)
        out += "final " + r.name + ": when " + print_guard(r.guard) +
               (r.kind == FinalKind::Succeed ? " succeed" : " fail") + "\n";
    for (const auto& r : ast.update_rules)
        out += "update " + r.name + ": when " + print_guard(r.guard) + " " +
               print_term(Term::app(r.symbol, r.args)) + " := " + print_term(r.value) + "\n";
    if (!ast.issue_rules.empty() || !ast.final_rules.empty() || !ast.update_rules.empty())
        out += "\n";

    out += "bounds { query_length " + std::to_string(ast.bounds.max_query_len) + " issued " +
           std::to_string(ast.bounds.max_issued) + " }\n\n";

    out += "witness {";
    for (std::size_t i = 0; i < ast.witness.size(); ++i)
        out += (i > 0 ? ", " : " ") + print_term(ast.witness[i].term, true);
    out += " }\n";
    return out;
}

} // namespace isa
