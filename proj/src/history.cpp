#include "isa/history.hpp"

#include "isa/history_io.hpp"

#include <algorithm>

namespace isa {

const Element& History::reply(const Query& q) const
{
    auto it = _answers.find(q);
    if (it == _answers.end())
        throw QueryNotInDomain("query " + format_query(q) + " has no reply");
    return it->second;
}

std::size_t History::phase(const Query& q) const
{
    auto it = _phases.find(q);
    if (it == _phases.end())
        throw QueryNotInDomain("query " + format_query(q) + " has no reply");
    return it->second;
}

QuerySet History::domain() const
{
    QuerySet out;
    for (const auto& [q, _] : _answers)
        out.insert(q);
    return out;
}

std::set<Element> History::range() const
{
    std::set<Element> out;
    for (const auto& [_, r] : _answers)
        out.insert(r);
    return out;
}

std::vector<Query> History::phase_class(std::size_t p) const
{
    std::vector<Query> out;
    for (const auto& [q, ph] : _phases)
        if (ph == p)
            out.push_back(q);
    return out;
}

std::vector<History::Entry> History::entries() const
{
    std::vector<Entry> out;
    out.reserve(_answers.size());
    for (const auto& [q, r] : _answers)
        out.push_back(Entry{_phases.at(q), q, r});
    std::sort(out.begin(), out.end());
    return out;
}

History History::prefix(std::size_t classes) const
{
    if (classes >= _length)
        return *this;
    History h;
    for (const auto& [q, p] : _phases) {
        if (p < classes) {
            h._answers.emplace(q, _answers.at(q));
            h._phases.emplace(q, p);
        }
    }
    h._length = classes;
    return h;
}

std::strong_ordering operator<=>(const History& a, const History& b)
{
    if (auto c = a._length <=> b._length; c != 0)
        return c;
    if (auto c = a._answers.size() <=> b._answers.size(); c != 0)
        return c;
    auto ea = a.entries();
    auto eb = b.entries();
    return std::lexicographical_compare_three_way(ea.begin(), ea.end(), eb.begin(), eb.end());
}

/* -------------------------------------------------------------------------- */

History mk_history(AnswerFunction answers, PhaseMap phases, bool normalize)
{
    if (answers.size() != phases.size())
        throw DomainMismatch("phase assignment and answer function have different domains");
    for (const auto& [q, _] : answers)
        if (!phases.contains(q))
            throw DomainMismatch("query " + format_query(q) + " has a reply but no phase");

    std::set<std::size_t> used;
    for (const auto& [_, p] : phases)
        used.insert(p);
    std::map<std::size_t, std::size_t> rank;
    for (auto p : used)
        rank.emplace(p, rank.size());

    bool contiguous = used.empty() || *used.rbegin() + 1 == used.size();
    if (!contiguous) {
        if (!normalize)
            throw NonContiguousPhases("phase labels are not contiguous from 0");
        for (auto& [_, p] : phases)
            p = rank.at(p);
    }

    History h;
    h._answers = std::move(answers);
    h._phases = std::move(phases);
    h._length = used.size();
    return h;
}

bool is_initial_segment(const History& eta, const History& xi)
{
    if (eta.size() > xi.size() || eta.length() > xi.length())
        return false;
    // The segment is determined by its number of classes: it must be the
    // prefix of xi with that many classes, answers and order included.
    return xi.prefix(eta.length()) == eta;
}

std::vector<History> initial_segments(const History& xi)
{
    std::vector<History> out;
    out.reserve(xi.length() + 1);
    for (std::size_t j = 0; j <= xi.length(); ++j)
        out.push_back(xi.prefix(j));
    return out;
}

History restrict_before(const History& xi, const Query& q)
{
    return xi.prefix(xi.phase(q));
}

History restrict_upto(const History& xi, const Query& q)
{
    return xi.prefix(xi.phase(q) + 1);
}

History append_class(const History& xi, const AnswerFunction& batch)
{
    if (batch.empty())
        throw EmptyBatch("cannot append an empty phase");
    History out = xi;
    for (const auto& [q, r] : batch) {
        if (xi.contains(q))
            throw OverlappingDomain("query " + format_query(q) + " is already answered");
        out._answers.emplace(q, r);
        out._phases.emplace(q, xi.length());
    }
    out._length = xi.length() + 1;
    return out;
}

bool common_prefix_comparable(const History& xi1, const History& xi2, const History& xi)
{
    if (!is_initial_segment(xi1, xi) || !is_initial_segment(xi2, xi))
        throw PreconditionViolation("both histories must be initial segments of the third");
    return is_initial_segment(xi1, xi2) || is_initial_segment(xi2, xi1);
}

History complete_history(const IssuedFunction& issued, const History& xi, const Chooser& chooser,
                         std::size_t cap)
{
    History current = xi;
    for (std::size_t round = 0;; ++round) {
        QuerySet pending;
        for (auto& q : issued(current))
            if (!current.contains(q))
                pending.insert(q);
        if (pending.empty())
            return current;
        if (round == cap)
            throw CapExceeded(cap);

        AnswerFunction batch = chooser(pending);
        if (batch.size() != pending.size() ||
            !std::all_of(pending.begin(), pending.end(), [&](const Query& q) { return batch.contains(q); }))
            throw PreconditionViolation("chooser must answer exactly the pending queries");
        current = append_class(current, batch);
    }
}

/* -------------------------------------------------------------------------- */

Query apply_isomorphism(const Isomorphism& i, const Query& q)
{
    Query out;
    out.components.reserve(q.components.size());
    for (const auto& c : q.components) {
        if (const auto* e = std::get_if<Element>(&c))
            out.components.emplace_back(i(*e));
        else
            out.components.push_back(c);
    }
    return out;
}

QuerySet apply_isomorphism(const Isomorphism& i, const QuerySet& qs)
{
    QuerySet out;
    for (const auto& q : qs)
        out.insert(apply_isomorphism(i, q));
    return out;
}

History apply_isomorphism(const Isomorphism& i, const History& xi)
{
    AnswerFunction answers;
    PhaseMap phases;
    for (const auto& [q, r] : xi.answers()) {
        auto iq = apply_isomorphism(i, q);
        answers.emplace(iq, i(r));
        phases.emplace(iq, xi.phase(q));
    }
    return mk_history(std::move(answers), std::move(phases));
}

} // namespace isa
