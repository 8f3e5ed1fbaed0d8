#include "isa/algorithm.hpp"

#include "isa/history_io.hpp"

#include <algorithm>

namespace isa {

const QueryTemplate* AlgorithmSpec::find_query(std::string_view name) const
{
    for (const auto& q : queries)
        if (q.name == name)
            return &q;
    return nullptr;
}

const StateDecl* AlgorithmSpec::find_state(std::string_view name) const
{
    for (const auto& s : states)
        if (s.name == name)
            return &s;
    return nullptr;
}

std::set<std::string> AlgorithmSpec::label_set() const
{
    std::set<std::string> out;
    for (const auto& l : labels)
        out.insert(l.name);
    return out;
}

std::vector<const StateDecl*> AlgorithmSpec::initial_states() const
{
    std::vector<const StateDecl*> out;
    for (const auto& ref : initial)
        if (const auto* s = find_state(ref.name))
            out.push_back(s);
    return out;
}

std::string to_string(const Verdict& v)
{
    switch (v.kind) {
    case Verdict::Kind::NotFinal:
        return "not-final";
    case Verdict::Kind::Success:
        return "success";
    case Verdict::Kind::Fail:
        return "fail(" + v.reason + ")";
    }
    return "?";
}

/* -------------------------------------------------------------------------- */

namespace {

/// Evaluates templates, terms and guards of one spec against one (state,
/// history) pair, memoising template instances.
class Evaluator
{
public:
    Evaluator(const AlgorithmSpec& spec, const Structure& x, const History& xi)
        : _spec(spec), _x(x), _xi(xi) {}

    std::optional<Query> instance(std::string_view name)
    {
        auto key = std::string(name);
        if (auto it = _cache.find(key); it != _cache.end())
            return it->second;
        const auto* tmpl = _spec.find_query(name);
        if (tmpl == nullptr)
            throw InstantiationError("undeclared query template '" + key + "'");
        if (!_active.insert(key).second)
            throw InstantiationError("query template '" + key + "' depends on its own reply");

        std::optional<Query> result = Query{};
        for (const auto& c : tmpl->components) {
            if (const auto* l = std::get_if<Label>(&c)) {
                result->components.emplace_back(*l);
                continue;
            }
            auto v = eval(std::get<Term>(c));
            if (!v) {
                result.reset();
                break;
            }
            result->components.emplace_back(std::move(*v));
        }
        _active.erase(key);
        _cache.emplace(key, result);
        return result;
    }

    std::optional<Element> reply(std::string_view name)
    {
        auto q = instance(name);
        if (!q || !_xi.contains(*q))
            return std::nullopt;
        return _xi.reply(*q);
    }

    std::optional<std::size_t> phase(std::string_view name)
    {
        auto q = instance(name);
        if (!q || !_xi.contains(*q))
            return std::nullopt;
        return _xi.phase(*q);
    }

    /// nullopt when some reply(Q) variable is unavailable.
    std::optional<Element> eval(const Term& t)
    {
        Valuation valuation;
        for (const auto& var : t.variables()) {
            auto r = reply(var);
            if (!r)
                return std::nullopt;
            valuation.emplace(var, std::move(*r));
        }
        return eval_term(_x, t, valuation);
    }

    bool holds(const Guard& g)
    {
        using K = Guard::Kind;
        switch (g.kind) {
        case K::Start:
            return _xi.empty();
        case K::Answered:
            return reply(g.queries[0]).has_value();
        case K::Unanswered:
            return !reply(g.queries[0]).has_value();
        case K::ReplyEq: {
            auto r = reply(g.queries[0]);
            auto v = eval(g.terms[0]);
            return r && v && *r == *v;
        }
        case K::Before:
        case K::Simultaneous: {
            auto p = phase(g.queries[0]);
            auto q = phase(g.queries[1]);
            if (!p || !q)
                return false;
            return g.kind == K::Before ? *p < *q : *p == *q;
        }
        case K::TermEq: {
            auto a = eval(g.terms[0]);
            auto b = eval(g.terms[1]);
            return a && b && *a == *b;
        }
        case K::Not:
            return !holds(g.operands[0]);
        case K::And:
            return holds(g.operands[0]) && holds(g.operands[1]);
        case K::Or:
            return holds(g.operands[0]) || holds(g.operands[1]);
        }
        return false;
    }

    Element eval_strict(const Term& t, const std::string& rule)
    {
        auto v = eval(t);
        if (!v)
            throw InstantiationError("rule '" + rule + "' reads a reply that is not available at " +
                                     format_history(_xi));
        return *v;
    }

private:
    const AlgorithmSpec& _spec;
    const Structure& _x;
    const History& _xi;
    std::map<std::string, std::optional<Query>> _cache;
    std::set<std::string> _active;
};

} // namespace

std::optional<Query> instantiate(const AlgorithmSpec& spec, const Structure& x, const History& xi,
                                 std::string_view name)
{
    return Evaluator(spec, x, xi).instance(name);
}

bool holds(const AlgorithmSpec& spec, const Structure& x, const History& xi, const Guard& guard)
{
    return Evaluator(spec, x, xi).holds(guard);
}

QuerySet causes(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    Evaluator ev(spec, x, xi);
    QuerySet out;
    for (const auto& rule : spec.issue_rules) {
        if (!ev.holds(rule.guard))
            continue;
        auto q = ev.instance(rule.query);
        if (!q)
            throw InstantiationError("issue rule '" + rule.name + "' fires but template '" + rule.query +
                                     "' mentions an unanswered reply at " + format_history(xi));
        out.insert(std::move(*q));
    }
    return out;
}

QuerySet issued(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    QuerySet out;
    for (std::size_t j = 0; j <= xi.length(); ++j)
        out.merge(causes(spec, x, xi.prefix(j)));
    return out;
}

QuerySet pending(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    QuerySet out;
    for (auto& q : issued(spec, x, xi))
        if (!xi.contains(q))
            out.insert(q);
    return out;
}

bool is_coherent(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    // Phase j must consist of queries issued by the prefix of the first j
    // phases; those issued sets grow with j, so accumulate them.
    QuerySet issued_so_far;
    for (std::size_t j = 0; j < xi.length(); ++j) {
        issued_so_far.merge(causes(spec, x, xi.prefix(j)));
        for (const auto& q : xi.phase_class(j))
            if (!issued_so_far.contains(q))
                return false;
    }
    return true;
}

bool is_complete(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    return pending(spec, x, xi).empty();
}

UpdateSet update_set(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    Evaluator ev(spec, x, xi);
    UpdateSet out;
    for (const auto& rule : spec.update_rules) {
        if (!ev.holds(rule.guard))
            continue;
        Tuple args;
        for (const auto& a : rule.args)
            args.push_back(ev.eval_strict(a, rule.name));
        out.insert(Update{Location{rule.symbol, std::move(args)}, ev.eval_strict(rule.value, rule.name)});
    }
    return out;
}

Verdict verdict(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    Evaluator ev(spec, x, xi);
    bool final_rule = false;
    const FinalRule* failing = nullptr;
    for (const auto& rule : spec.final_rules) {
        if (!ev.holds(rule.guard))
            continue;
        final_rule = true;
        if (rule.kind == FinalKind::Fail && failing == nullptr)
            failing = &rule;
    }
    if (!final_rule && (spec.strict || !is_complete(spec, x, xi)))
        return Verdict::not_final();
    if (failing != nullptr)
        return Verdict::fail("rule " + failing->name);
    if (auto clash = detect_clash(update_set(spec, x, xi)))
        return Verdict::fail("clash at " + to_string(*clash));
    return Verdict::success();
}

bool is_attainable(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    if (!is_coherent(spec, x, xi))
        return false;
    for (std::size_t j = 0; j < xi.length(); ++j)
        if (verdict(spec, x, xi.prefix(j)).is_final())
            return false;
    return true;
}

Structure next_state(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    auto v = verdict(spec, x, xi);
    if (!v.is_success())
        throw NotSuccessful("history " + format_history(xi) + " is " + to_string(v) + ", not successful");
    return apply_updates(x, update_set(spec, x, xi));
}

/* -------------------------------------------------------------------------- */

std::vector<Diagnostic> check_bounds(const AlgorithmSpec& spec, const Structure& x,
                                     const std::vector<History>& attainables)
{
    std::vector<Diagnostic> out;
    auto report = [&out](std::string message) {
        out.push_back(Diagnostic{Severity::Error, std::move(message), {}});
    };
    const auto& b = spec.bounds;
    for (const auto& xi : attainables) {
        auto is = issued(spec, x, xi);
        for (const auto& q : is)
            if (q.length() > b.max_query_len)
                report("query " + format_query(q) + " has length " + std::to_string(q.length()) +
                       " > " + std::to_string(b.max_query_len) + " at " + format_history(xi));
        if (is.size() > b.max_issued)
            report(std::to_string(is.size()) + " issued queries > " + std::to_string(b.max_issued) +
                   " at " + format_history(xi));
        if (xi.size() > b.max_issued)
            report("domain size " + std::to_string(xi.size()) + " > " + std::to_string(b.max_issued) +
                   " at " + format_history(xi));
    }
    return out;
}

namespace {

void require_compatible(const Structure& x, const History& xi, const char* which)
{
    auto fail = [&](const Element& e) {
        throw IncompatibleHistory(std::string("element '") + e.id + "' of " + format_history(xi) +
                                  " is not in the base of the " + which + " state");
    };
    for (const auto& [q, r] : xi.answers()) {
        if (!x.contains(r))
            fail(r);
        for (const auto& c : q.components)
            if (const auto* e = std::get_if<Element>(&c); e != nullptr && !x.contains(*e))
                fail(*e);
    }
}

bool agree_on_witness(const AlgorithmSpec& spec, const Structure& x, const Structure& x2, const History& xi)
{
    auto range = xi.range();
    std::vector<Element> values(range.begin(), range.end());
    for (const auto& w : spec.witness) {
        auto vars = w.term.variables();
        if (!vars.empty() && values.empty())
            continue; // no valuation into an empty range
        bool agree = true;
        for_each_tuple(values, vars.size(), [&](const Tuple& assignment) {
            if (!agree)
                return;
            Valuation v;
            for (std::size_t i = 0; i < vars.size(); ++i)
                v.emplace(vars[i], assignment[i]);
            agree = eval_term(x, w.term, v) == eval_term(x2, w.term, v);
        });
        if (!agree)
            return false;
    }
    return true;
}

} // namespace

std::vector<Diagnostic> check_witness(const AlgorithmSpec& spec, const Structure& x, const Structure& x2,
                                      const History& xi)
{
    if (!(x.vocabulary() == x2.vocabulary()))
        throw IncompatibleHistory("states have different vocabularies");
    require_compatible(x, xi, "first");
    require_compatible(x2, xi, "second");

    std::vector<Diagnostic> out;
    if (!agree_on_witness(spec, x, x2, xi))
        return out;

    auto report = [&](const std::string& what) {
        out.push_back(Diagnostic{Severity::Error,
                                 "witness insufficient: " + what + " differ at " + format_history(xi), {}});
    };
    if (causes(spec, x, xi) != causes(spec, x2, xi))
        report("caused queries");
    if (verdict(spec, x, xi).kind != verdict(spec, x2, xi).kind)
        report("verdicts");
    if (update_set(spec, x, xi) != update_set(spec, x2, xi))
        report("update sets");
    return out;
}

} // namespace isa
