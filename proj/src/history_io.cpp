#include "isa/history_io.hpp"

#include "literal_text.hpp"

namespace isa {

std::string format_query(const Query& q)
{
    std::string out = "(";
    for (std::size_t i = 0; i < q.components.size(); ++i) {
        if (i > 0)
            out += ", ";
        if (const auto* e = std::get_if<Element>(&q.components[i]))
            out += "#" + e->id;
        else
            out += std::get<Label>(q.components[i]).name;
    }
    return out + ")";
}

namespace {

template<class Range, class Fn>
std::string braced(const Range& items, Fn&& render)
{
    if (items.empty())
        return "{ }";
    std::string out = "{ ";
    bool first = true;
    for (const auto& item : items) {
        if (!first)
            out += " ; ";
        out += render(item);
        first = false;
    }
    return out + " }";
}

} // namespace

std::string format_query_set(const QuerySet& qs)
{
    return braced(qs, [](const Query& q) { return format_query(q); });
}

std::string format_answers(const AnswerFunction& af)
{
    return braced(af, [](const auto& kv) { return format_query(kv.first) + " -> " + kv.second.id; });
}

std::string format_history(const History& xi)
{
    return braced(xi.entries(), [](const History::Entry& e) {
        return format_query(e.query) + " -> " + e.reply.id + " @" + std::to_string(e.phase);
    });
}

namespace detail {

Query parse_query(TokenStream& ts)
{
    ts.expect_punct("(");
    Query q;
    do {
        if (ts.peek().kind == TokenKind::Hash) {
            ts.next();
            q.components.emplace_back(Element{ts.expect_identifier("an element identifier").text});
        } else {
            q.components.emplace_back(Label{ts.expect_identifier("a label or '#element'").text});
        }
    } while (ts.accept_punct(","));
    ts.expect_punct(")");
    return q;
}

namespace {

// Shared body of batches and histories; `with_phase` demands '@n'.
template<class OnEntry>
void parse_entries(TokenStream& ts, bool with_phase, OnEntry&& on_entry)
{
    ts.expect_punct("{");
    if (ts.accept_punct("}"))
        return;
    do {
        const auto start = ts.peek().span;
        Query q = parse_query(ts);
        ts.expect_punct("->");
        Element reply{ts.expect_identifier("a reply element").text};
        std::size_t phase = 0;
        if (with_phase) {
            ts.expect_punct("@");
            phase = ts.expect_number("a phase number");
        }
        on_entry(std::move(q), std::move(reply), phase, ts.span_from(start));
    } while (ts.accept_punct(";"));
    ts.expect_punct("}");
}

} // namespace

AnswerFunction parse_answers(TokenStream& ts)
{
    AnswerFunction af;
    parse_entries(ts, false, [&](Query q, Element r, std::size_t, const SourceSpan& span) {
        if (af.contains(q))
            throw NameError(span, "query " + format_query(q) + " answered twice");
        af.emplace(std::move(q), std::move(r));
    });
    return af;
}

History parse_history(TokenStream& ts)
{
    AnswerFunction af;
    PhaseMap phases;
    parse_entries(ts, true, [&](Query q, Element r, std::size_t p, const SourceSpan& span) {
        if (af.contains(q))
            throw NameError(span, "query " + format_query(q) + " answered twice");
        phases.emplace(q, p);
        af.emplace(std::move(q), std::move(r));
    });
    return mk_history(std::move(af), std::move(phases));
}

} // namespace detail

namespace {

template<class Fn>
auto parse_whole(std::string_view text, Fn&& fn)
{
    detail::TokenStream ts(text, detail::LexMode::Literal);
    auto value = fn(ts);
    if (!ts.at_end())
        ts.fail({"end of input"});
    return value;
}

} // namespace

Query parse_query(std::string_view text)
{
    return parse_whole(text, [](detail::TokenStream& ts) { return detail::parse_query(ts); });
}

AnswerFunction parse_answers(std::string_view text)
{
    return parse_whole(text, [](detail::TokenStream& ts) { return detail::parse_answers(ts); });
}

History parse_history(std::string_view text)
{
    return parse_whole(text, [](detail::TokenStream& ts) { return detail::parse_history(ts); });
}

} // namespace isa
