#pragma once

// Fixtures, independent oracles and random generators shared by the unit
// tests and the acceptance binary.

#include "isa/analysis.hpp"
#include "isa/dsl.hpp"
#include "isa/execution.hpp"
#include "isa/history_io.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace isa::test {

inline std::string fixture(const std::string& name)
{
    return std::string(ISA_FIXTURE_DIR) + "/" + name;
}

inline AlgorithmSpec load_fixture(const std::string& name)
{
    return load_spec(fixture(name));
}

inline const Structure& state_of(const AlgorithmSpec& spec, const std::string& name)
{
    const auto* s = spec.find_state(name);
    if (s == nullptr)
        throw Error("fixture has no state " + name);
    return s->structure;
}

inline Element E(const std::string& id)
{
    return Element{id};
}

inline Query Q(const std::string& label)
{
    return Query::of_label(label);
}

inline std::vector<Element> elements(std::initializer_list<const char*> ids)
{
    std::vector<Element> out;
    for (const auto* id : ids)
        out.push_back(Element{id});
    return out;
}

inline std::vector<Element> broker_pool()
{
    return elements({"yes", "no", "client0", "client1", "t"});
}

inline std::vector<Query> broker_universe()
{
    return {Q("offer0"), Q("offer1"), Q("timeout"), Q("choose")};
}

/* -------------------------------------------------------------------------- */
/* Brute-force oracle                                                         */
/* -------------------------------------------------------------------------- */

/// Every history over `universe` with replies from `pool` and at most
/// `max_phases` phases, each phase nonempty.
template<class Fn>
void for_each_bounded_history(const std::vector<Query>& universe, const std::vector<Element>& pool,
                              std::size_t max_phases, Fn&& fn)
{
    // slot[i] == 0: unanswered; otherwise phase slot[i]-1.
    std::vector<std::size_t> slot(universe.size(), 0);
    while (true) {
        std::vector<bool> used(max_phases, false);
        std::vector<std::size_t> answered;
        for (std::size_t i = 0; i < slot.size(); ++i) {
            if (slot[i] > 0) {
                used[slot[i] - 1] = true;
                answered.push_back(i);
            }
        }
        bool contiguous = true;
        for (std::size_t p = 1; p < max_phases; ++p)
            if (used[p] && !used[p - 1])
                contiguous = false;
        if (contiguous) {
            std::vector<std::size_t> reply(answered.size(), 0);
            while (true) {
                AnswerFunction af;
                PhaseMap pm;
                for (std::size_t k = 0; k < answered.size(); ++k) {
                    af.emplace(universe[answered[k]], pool[reply[k]]);
                    pm.emplace(universe[answered[k]], slot[answered[k]] - 1);
                }
                fn(mk_history(std::move(af), std::move(pm), false));
                std::size_t pos = 0;
                while (pos < reply.size() && ++reply[pos] == pool.size())
                    reply[pos++] = 0;
                if (pos == reply.size())
                    break;
            }
        }
        std::size_t pos = 0;
        while (pos < slot.size() && ++slot[pos] > max_phases)
            slot[pos++] = 0;
        if (pos == slot.size())
            return;
    }
}

/// Attainable by definition: every phase answers queries issued by the
/// phases before it, and no proper prefix is final.
inline bool oracle_attainable(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    for (std::size_t j = 0; j < xi.length(); ++j) {
        const History before = xi.prefix(j);
        QuerySet issued_before;
        for (std::size_t i = 0; i <= j; ++i)
            for (auto& q : causes(spec, x, xi.prefix(i)))
                issued_before.insert(q);
        for (const auto& q : xi.phase_class(j))
            if (!issued_before.contains(q))
                return false;
        if (verdict(spec, x, before).is_final())
            return false;
    }
    return true;
}

inline std::set<History> oracle_attainable_set(const AlgorithmSpec& spec, const Structure& x,
                                               const std::vector<Query>& universe, const std::vector<Element>& pool,
                                               std::size_t max_phases)
{
    std::set<History> out;
    for_each_bounded_history(universe, pool, max_phases, [&](const History& xi) {
        if (oracle_attainable(spec, x, xi))
            out.insert(xi);
    });
    return out;
}

/* -------------------------------------------------------------------------- */
/* Random histories                                                           */
/* -------------------------------------------------------------------------- */

template<class T>
const T& pick(const std::vector<T>& v, std::mt19937& rng)
{
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline bool coin(std::mt19937& rng, double p = 0.5)
{
    return std::bernoulli_distribution(p)(rng);
}

/// Random coherent history: each phase answers a random nonempty subset of
/// the pending queries, finality ignored.
inline History random_coherent(const AlgorithmSpec& spec, const Structure& x, const std::vector<Element>& pool,
                               std::mt19937& rng, std::size_t max_phases)
{
    History xi;
    const auto phases = std::uniform_int_distribution<std::size_t>(0, max_phases)(rng);
    for (std::size_t p = 0; p < phases; ++p) {
        auto open = pending(spec, x, xi);
        if (open.empty())
            break;
        std::vector<Query> qs(open.begin(), open.end());
        std::shuffle(qs.begin(), qs.end(), rng);
        const auto n = std::uniform_int_distribution<std::size_t>(1, qs.size())(rng);
        AnswerFunction batch;
        for (std::size_t i = 0; i < n; ++i)
            batch.emplace(qs[i], pick(pool, rng));
        xi = append_class(xi, batch);
    }
    return xi;
}

/* -------------------------------------------------------------------------- */
/* Spec perturbations                                                         */
/* -------------------------------------------------------------------------- */

inline Guard contradiction(const std::string& q)
{
    return Guard::conj(Guard::unanswered(q), Guard::answered(q));
}

inline void rename_template(AlgorithmSpec& spec, const std::string& from, const std::string& to)
{
    auto fix_term = [&](auto&& self, Term& t) -> void {
        if (t.is_var() && t.name == from)
            t.name = to;
        for (auto& a : t.args)
            self(self, a);
    };
    auto fix_guard = [&](auto&& self, Guard& g) -> void {
        for (auto& q : g.queries)
            if (q == from)
                q = to;
        for (auto& t : g.terms)
            fix_term(fix_term, t);
        for (auto& o : g.operands)
            self(self, o);
    };
    for (auto& q : spec.queries) {
        if (q.name == from)
            q.name = to;
        for (auto& c : q.components)
            if (auto* t = std::get_if<Term>(&c))
                fix_term(fix_term, *t);
    }
    for (auto& r : spec.issue_rules) {
        fix_guard(fix_guard, r.guard);
        if (r.query == from)
            r.query = to;
    }
    for (auto& r : spec.final_rules)
        fix_guard(fix_guard, r.guard);
    for (auto& r : spec.update_rules) {
        fix_guard(fix_guard, r.guard);
        for (auto& a : r.args)
            fix_term(fix_term, a);
        fix_term(fix_term, r.value);
    }
}

/// A behaviour-preserving or behaviour-changing edit of a broker-like spec.
/// Returns a short description.
inline std::string perturb(AlgorithmSpec& spec, std::mt19937& rng)
{
    const std::vector<std::string> templates = [&] {
        std::vector<std::string> out;
        for (const auto& q : spec.queries)
            out.push_back(q.name);
        return out;
    }();
    switch (std::uniform_int_distribution<int>(0, 8)(rng)) {
    case 0: {
        auto q = pick(templates, rng);
        spec.issue_rules.push_back(IssueRule{"dead" + std::to_string(spec.issue_rules.size()), contradiction(q),
                                             pick(templates, rng), {}});
        return "unsatisfiable issue rule";
    }
    case 1: {
        auto q = pick(templates, rng);
        spec.final_rules.push_back(FinalRule{"deadfinal" + std::to_string(spec.final_rules.size()),
                                             contradiction(q), coin(rng) ? FinalKind::Fail : FinalKind::Succeed, {}});
        return "unsatisfiable final rule";
    }
    case 2: {
        auto q = pick(templates, rng);
        spec.update_rules.push_back(UpdateRule{"deadupdate" + std::to_string(spec.update_rules.size()),
                                               contradiction(q), "owner", {}, Term::app("no"), {}});
        return "unsatisfiable update rule";
    }
    case 3:
        std::shuffle(spec.issue_rules.begin(), spec.issue_rules.end(), rng);
        std::shuffle(spec.final_rules.begin(), spec.final_rules.end(), rng);
        std::shuffle(spec.update_rules.begin(), spec.update_rules.end(), rng);
        return "reordered rules";
    case 4: {
        auto q = pick(templates, rng);
        rename_template(spec, q, q + "_r");
        return "renamed template " + q;
    }
    case 5: {
        // Tie goes to client0 without asking.
        if (spec.find_query("offer0") == nullptr || spec.find_query("offer1") == nullptr)
            return "nothing";
        std::erase_if(spec.issue_rules, [](const IssueRule& r) { return r.query == "choose"; });
        for (auto& r : spec.final_rules)
            if (r.name == "win0")
                r.guard = Guard::conj(Guard::reply_eq("offer0", Term::app("yes")),
                                      Guard::negate(Guard::conj(Guard::reply_eq("offer1", Term::app("yes")),
                                                                Guard::before("offer1", "offer0"))));
        for (auto& r : spec.update_rules)
            if (r.name == "sell0")
                r.guard = Guard::conj(Guard::reply_eq("offer0", Term::app("yes")),
                                      Guard::negate(Guard::conj(Guard::reply_eq("offer1", Term::app("yes")),
                                                                Guard::before("offer1", "offer0"))));
        return "changed tie-break";
    }
    case 6: {
        if (spec.final_rules.empty())
            return "nothing";
        auto& r = spec.final_rules[std::uniform_int_distribution<std::size_t>(0, spec.final_rules.size() - 1)(rng)];
        r.kind = r.kind == FinalKind::Succeed ? FinalKind::Fail : FinalKind::Succeed;
        return "flipped final rule " + r.name;
    }
    case 7: {
        if (spec.final_rules.empty())
            return "nothing";
        auto i = std::uniform_int_distribution<std::size_t>(0, spec.final_rules.size() - 1)(rng);
        auto name = spec.final_rules[i].name;
        spec.final_rules.erase(spec.final_rules.begin() + static_cast<std::ptrdiff_t>(i));
        return "dropped final rule " + name;
    }
    default: {
        if (spec.update_rules.empty())
            return "nothing";
        auto& r = spec.update_rules[std::uniform_int_distribution<std::size_t>(0, spec.update_rules.size() - 1)(rng)];
        r.value = Term::app(coin(rng) ? "client0" : "client1");
        return "changed update value of " + r.name;
    }
    }
}

/* -------------------------------------------------------------------------- */
/* Random syntax trees                                                        */
/* -------------------------------------------------------------------------- */

class AstGenerator
{
public:
    explicit AstGenerator(std::uint32_t seed) : _rng(seed) {}

    AlgorithmSpec make()
    {
        AlgorithmSpec s;
        s.name = "alg" + std::to_string(num(0, 999));
        s.strict = coin(_rng);

        const int nsym = num(0, 5);
        for (int i = 0; i < nsym; ++i) {
            bool is_static = coin(_rng), is_relational = coin(_rng, 0.3);
            s.vocabulary.add(Symbol{"f" + std::to_string(i), static_cast<std::size_t>(num(0, 2)), is_static,
                                    is_relational});
        }
        const int nlab = num(0, 3);
        for (int i = 0; i < nlab; ++i)
            s.labels.push_back(NameRef{"l" + std::to_string(i), {}});

        const int nstate = num(0, 2);
        for (int i = 0; i < nstate; ++i)
            s.states.push_back(StateDecl{"S" + std::to_string(i), random_structure(s.vocabulary), {}});
        for (const auto& st : s.states)
            if (coin(_rng))
                s.initial.push_back(NameRef{st.name, {}});

        const int nq = num(0, 4);
        for (int i = 0; i < nq; ++i) {
            QueryTemplate q{"q" + std::to_string(i), {}, {}};
            const int ncomp = num(1, 3);
            for (int k = 0; k < ncomp; ++k) {
                if (!s.labels.empty() && coin(_rng))
                    q.components.emplace_back(Label{pick(s.labels, _rng).name});
                else
                    q.components.emplace_back(term(s, static_cast<std::size_t>(i), 2, false));
            }
            s.queries.push_back(std::move(q));
        }

        if (!s.queries.empty()) {
            const int nissue = num(0, 3);
            for (int i = 0; i < nissue; ++i)
                s.issue_rules.push_back(IssueRule{"i" + std::to_string(i), guard(s, 3), pick(s.queries, _rng).name, {}});
            const int nfinal = num(0, 3);
            for (int i = 0; i < nfinal; ++i)
                s.final_rules.push_back(FinalRule{"fin" + std::to_string(i), guard(s, 3),
                                                  coin(_rng) ? FinalKind::Succeed : FinalKind::Fail, {}});
        }
        std::vector<Symbol> dynamic;
        for (const auto& sym : s.vocabulary.user_symbols())
            if (!sym.is_static)
                dynamic.push_back(sym);
        if (!dynamic.empty() && !s.queries.empty()) {
            const int nupd = num(0, 2);
            for (int i = 0; i < nupd; ++i) {
                const auto& sym = pick(dynamic, _rng);
                UpdateRule r{"u" + std::to_string(i), guard(s, 2), sym.name, {}, {}, {}};
                for (std::size_t a = 0; a < sym.arity; ++a)
                    r.args.push_back(term(s, s.queries.size(), 2, false));
                r.value = term(s, s.queries.size(), 2, false);
                s.update_rules.push_back(std::move(r));
            }
        }
        s.bounds.max_query_len = static_cast<std::size_t>(num(0, 9));
        s.bounds.max_issued = static_cast<std::size_t>(num(0, 99));
        if (!s.vocabulary.user_symbols().empty()) {
            const int nw = num(0, 3);
            for (int i = 0; i < nw; ++i)
                s.witness.push_back(WitnessTerm{term(s, 0, 2, true), {}});
        }
        return s;
    }

private:
    int num(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(_rng); }

    Structure random_structure(const Vocabulary& v)
    {
        std::vector<Element> base = elements({"true", "false", "undef"});
        const int extra = num(0, 3);
        for (int i = 0; i < extra; ++i)
            base.push_back(Element{"e" + std::to_string(i)});
        Structure x(v, base);
        for (const auto& sym : v.user_symbols()) {
            for_each_tuple(x.base(), sym.arity, [&](const Tuple& args) {
                if (coin(_rng, 0.2))
                    x.assign(sym.name, args, pick(x.base(), _rng));
            });
        }
        return x;
    }

    /// Term over user symbols; reply variables name templates below `visible`.
    Term term(const AlgorithmSpec& s, std::size_t visible, int depth, bool witness)
    {
        auto users = s.vocabulary.user_symbols();
        const bool can_var = witness || visible > 0;
        if (users.empty() || (can_var && coin(_rng, 0.3)) || depth == 0) {
            if (can_var) {
                if (witness)
                    return Term::var("x" + std::to_string(num(0, 2)));
                return Term::var(s.queries[static_cast<std::size_t>(num(0, static_cast<int>(visible) - 1))].name);
            }
            // Only logic constants are left.
            return Term::app(coin(_rng) ? "true" : "undef");
        }
        const auto& sym = pick(users, _rng);
        Term t = Term::app(sym.name);
        for (std::size_t a = 0; a < sym.arity; ++a)
            t.args.push_back(term(s, visible, depth - 1, witness));
        return t;
    }

    /// A term that parses as the left side of `t1 = t2` (not a reply).
    Term app_term(const AlgorithmSpec& s)
    {
        Term t = term(s, s.queries.size(), 2, false);
        return t.is_var() ? Term::app("false") : t;
    }

    Guard guard(const AlgorithmSpec& s, int depth)
    {
        const int kind = depth == 0 ? num(0, 6) : num(0, 9);
        auto q = [&] { return pick(s.queries, _rng).name; };
        switch (kind) {
        case 0:
            return Guard::start();
        case 1:
            return Guard::answered(q());
        case 2:
            return Guard::unanswered(q());
        case 3:
            return Guard::reply_eq(q(), term(s, s.queries.size(), 2, false));
        case 4:
            return Guard::before(q(), q());
        case 5:
            return Guard::simultaneous(q(), q());
        case 6:
            return Guard::term_eq(app_term(s), term(s, s.queries.size(), 2, false));
        case 7:
            return Guard::negate(guard(s, depth - 1));
        case 8:
            return Guard::conj(guard(s, depth - 1), guard(s, depth - 1));
        default:
            return Guard::disj(guard(s, depth - 1), guard(s, depth - 1));
        }
    }

    std::mt19937 _rng;
};

} // namespace isa::test
