#include "isa/analysis.hpp"

#include "isa/history_io.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <thread>

namespace isa {

void validate_config(const EnumerationConfig& cfg, const Structure& x)
{
    if (cfg.max_phases == 0)
        throw ConfigMismatch("max-phases must be positive");
    if (cfg.max_domain == 0)
        throw ConfigMismatch("max-domain must be positive");
    if (cfg.reply_pool) {
        if (cfg.reply_pool->empty())
            throw ConfigMismatch("reply pool is empty");
        for (const auto& e : *cfg.reply_pool)
            if (!x.contains(e))
                throw ConfigMismatch("pool element '" + e.id + "' is not in the base set");
    }
}

std::vector<Element> effective_pool(const EnumerationConfig& cfg, const Structure& x)
{
    if (!cfg.reply_pool)
        return x.base();
    std::vector<Element> pool = *cfg.reply_pool;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return pool;
}

std::string describe(const EnumerationConfig& cfg)
{
    std::string out = "pool ";
    if (!cfg.reply_pool) {
        out += "base";
    } else {
        out += "{";
        for (std::size_t i = 0; i < cfg.reply_pool->size(); ++i)
            out += (i > 0 ? ", " : "") + (*cfg.reply_pool)[i].id;
        out += "}";
    }
    return out + ", max-phases " + std::to_string(cfg.max_phases) + ", max-domain " +
           std::to_string(cfg.max_domain);
}

/* -------------------------------------------------------------------------- */

namespace {

struct Expansion
{
    std::vector<History> children;
    bool truncated = false;
};

/// Every nonempty partial assignment of pool replies to `open`, at most
/// `room` answers each; reports whether larger ones were skipped.
template<class Fn>
bool for_each_batch(const std::vector<Query>& open, const std::vector<Element>& pool, std::size_t room, Fn&& fn)
{
    bool skipped = false;
    std::vector<std::size_t> choice(open.size(), 0); // 0 = unanswered, k = pool[k-1]
    while (true) {
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] > pool.size())
            choice[pos++] = 0;
        if (pos == choice.size())
            return skipped;
        AnswerFunction batch;
        for (std::size_t i = 0; i < open.size(); ++i)
            if (choice[i] > 0)
                batch.emplace(open[i], pool[choice[i] - 1]);
        if (batch.size() > room) {
            skipped = true;
            continue;
        }
        fn(batch);
    }
}

template<class Expand>
std::vector<Expansion> expand_layer(const std::vector<History>& layer, std::size_t jobs, Expand&& expand)
{
    std::vector<Expansion> out(layer.size());
    jobs = std::max<std::size_t>(1, std::min(jobs, layer.size()));
    if (jobs == 1) {
        for (std::size_t i = 0; i < layer.size(); ++i)
            out[i] = expand(layer[i]);
        return out;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < layer.size(); i += jobs)
                    out[i] = expand(layer[i]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : workers)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

/// Breadth-first closure of {empty history} under `expand`; results do not
/// depend on the number of jobs.
template<class Expand>
Enumeration breadth_first(std::size_t jobs, Expand&& expand)
{
    Enumeration out;
    std::vector<History> layer{History{}};
    out.histories.insert(History{});
    while (!layer.empty()) {
        std::vector<History> next;
        for (auto& e : expand_layer(layer, jobs, expand)) {
            out.truncated = out.truncated || e.truncated;
            for (auto& c : e.children)
                if (out.histories.insert(c).second)
                    next.push_back(std::move(c));
        }
        layer = std::move(next);
    }
    return out;
}

Expansion expand_open(const History& xi, const QuerySet& open_set, const std::vector<Element>& pool,
                      const EnumerationConfig& cfg)
{
    Expansion e;
    if (open_set.empty())
        return e;
    if (xi.length() >= cfg.max_phases || xi.size() >= cfg.max_domain) {
        e.truncated = true;
        return e;
    }
    std::vector<Query> open(open_set.begin(), open_set.end());
    e.truncated = for_each_batch(open, pool, cfg.max_domain - xi.size(),
                                 [&](const AnswerFunction& b) { e.children.push_back(append_class(xi, b)); });
    return e;
}

} // namespace

Enumeration enumerate_attainable(const AlgorithmSpec& spec, const Structure& x, const EnumerationConfig& cfg)
{
    validate_config(cfg, x);
    const auto pool = effective_pool(cfg, x);
    return breadth_first(cfg.jobs, [&](const History& xi) {
        if (verdict(spec, x, xi).is_final())
            return Expansion{};
        return expand_open(xi, pending(spec, x, xi), pool, cfg);
    });
}

/* -------------------------------------------------------------------------- */

IsoCase parse_iso(std::string_view text)
{
    detail::TokenStream ts(text, detail::LexMode::Source);
    IsoCase out;
    ts.expect_word("from");
    out.from = ts.expect_identifier("a state name").text;
    ts.expect_word("to");
    out.to = ts.expect_identifier("a state name").text;
    std::map<Element, Element> mapping;
    while (!ts.at_end()) {
        const auto& a = ts.expect_identifier("an element");
        ts.expect_punct("->");
        Element b{ts.expect_identifier("an element").text};
        if (!mapping.emplace(Element{a.text}, b).second)
            throw NameError(a.span, "element '" + a.text + "' mapped twice");
    }
    out.map = Isomorphism(std::move(mapping));
    return out;
}

bool ConformanceReport::passed() const
{
    return std::all_of(sections.begin(), sections.end(), [](const auto& s) { return s.passed(); });
}

namespace {

bool fail_rule_holds(const AlgorithmSpec& spec, const Structure& x, const History& xi)
{
    for (const auto& r : spec.final_rules)
        if (r.kind == FinalKind::Fail && holds(spec, x, xi, r.guard))
            return true;
    return false;
}

void check_transport(const AlgorithmSpec& spec, const IsoCase& iso, const Structure& x, const Structure& y,
                     const std::set<History>& histories, std::vector<std::string>& out)
{
    const std::string tag = iso.from + " -> " + iso.to + ": ";
    if (!check_isomorphism(iso.map.mapping(), x, y)) {
        out.push_back(tag + "the mapping is not an isomorphism");
        return;
    }
    for (const auto& xi : histories) {
        History image;
        try {
            image = apply_isomorphism(iso.map, xi);
        } catch (const ElementNotInDomain& e) {
            out.push_back(tag + format_history(xi) + ": " + e.what());
            continue;
        }
        const std::string at = tag + "at " + format_history(xi) + ": ";
        if (!is_attainable(spec, y, image))
            out.push_back(at + "image " + format_history(image) + " is not attainable");
        if (causes(spec, y, image) != apply_isomorphism(iso.map, causes(spec, x, xi)))
            out.push_back(at + "caused queries do not commute");
        auto vx = verdict(spec, x, xi);
        auto vy = verdict(spec, y, image);
        if (vx.kind != vy.kind)
            out.push_back(at + "verdict " + to_string(vx) + " maps to " + to_string(vy));
        else if (vx.is_success() &&
                 update_set(spec, y, image) != apply_isomorphism(iso.map, update_set(spec, x, xi)))
            out.push_back(at + "update sets do not commute");
    }
}

} // namespace

ConformanceReport check_postulates(const AlgorithmSpec& spec, const EnumerationConfig& cfg,
                                   const std::vector<IsoCase>& isos)
{
    ConformanceReport report;
    ConformanceSection step_a{"step-a", {}};
    ConformanceSection exclusivity{"exclusivity", {}};
    ConformanceSection bounds{"bounds", {}};
    ConformanceSection transport{"isomorphism", {}};
    ConformanceSection witness{"witness", {}};

    std::map<std::string, std::set<History>> spaces;
    for (const auto& s : spec.states) {
        const auto& x = s.structure;
        auto e = enumerate_attainable(spec, x, cfg);
        report.truncated = report.truncated || e.truncated;
        const std::string tag = s.name + ": ";
        for (const auto& xi : e.histories) {
            try {
                auto v = verdict(spec, x, xi);
                if (!v.is_final() && is_complete(spec, x, xi))
                    step_a.violations.push_back(tag + "complete coherent history " + format_history(xi) +
                                                " has no final initial segment");
                if (v.is_final()) {
                    bool expect_fail =
                        fail_rule_holds(spec, x, xi) || detect_clash(update_set(spec, x, xi)).has_value();
                    if (expect_fail != v.is_fail())
                        exclusivity.violations.push_back(tag + format_history(xi) + " is " + to_string(v));
                }
            } catch (const Error& err) {
                exclusivity.violations.push_back(tag + format_history(xi) + ": " + err.what());
            }
        }
        for (auto& d : check_bounds(spec, x, std::vector<History>(e.histories.begin(), e.histories.end())))
            bounds.violations.push_back(tag + d.message);
        spaces.emplace(s.name, std::move(e.histories));
    }

    for (const auto& iso : isos) {
        const auto* from = spec.find_state(iso.from);
        const auto* to = spec.find_state(iso.to);
        if (from == nullptr || to == nullptr) {
            transport.violations.push_back("unknown state '" + (from == nullptr ? iso.from : iso.to) + "'");
            continue;
        }
        check_transport(spec, iso, from->structure, to->structure, spaces.at(iso.from), transport.violations);
    }

    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        for (std::size_t j = i + 1; j < spec.states.size(); ++j) {
            const auto& a = spec.states[i];
            const auto& b = spec.states[j];
            std::set<History> shared = spaces.at(a.name);
            shared.insert(spaces.at(b.name).begin(), spaces.at(b.name).end());
            for (const auto& xi : shared) {
                try {
                    for (auto& d : check_witness(spec, a.structure, b.structure, xi))
                        witness.violations.push_back(a.name + "/" + b.name + ": " + d.message);
                } catch (const IncompatibleHistory&) {
                    // history mentions elements outside one of the bases
                }
            }
        }
    }

    report.sections = {std::move(step_a), std::move(exclusivity), std::move(bounds), std::move(transport),
                       std::move(witness)};
    return report;
}

std::string format_report(const ConformanceReport& r)
{
    constexpr std::size_t shown = 20;
    std::string out;
    for (const auto& s : r.sections) {
        out += s.name + ": ";
        if (s.passed()) {
            out += "pass\n";
            continue;
        }
        out += "FAIL (" + std::to_string(s.violations.size()) + " violations)\n";
        for (std::size_t i = 0; i < s.violations.size() && i < shown; ++i)
            out += "  " + s.violations[i] + "\n";
        if (s.violations.size() > shown)
            out += "  ... and " + std::to_string(s.violations.size() - shown) + " more\n";
    }
    if (r.truncated)
        out += "note: enumeration truncated by the bounds\n";
    out += r.passed() ? "result: conforms\n" : "result: violations found\n";
    return out;
}

std::string format_report_machine(const ConformanceReport& r)
{
    std::string out;
    for (const auto& s : r.sections) {
        out += "section=" + s.name + "\n";
        out += "passed=" + std::string(s.passed() ? "true" : "false") + "\n";
        out += "violations=" + std::to_string(s.violations.size()) + "\n";
        for (const auto& v : s.violations)
            out += "violation=" + v + "\n";
        out += "\n";
    }
    out += "truncated=" + std::string(r.truncated ? "true" : "false") + "\n";
    out += "conforms=" + std::string(r.passed() ? "true" : "false") + "\n";
    return out;
}

/* -------------------------------------------------------------------------- */

std::string to_string(Clause c)
{
    switch (c) {
    case Clause::Structure:
        return "structure";
    case Clause::Attainable:
        return "attainable";
    case Clause::Issued:
        return "issued";
    case Clause::Finality:
        return "finality";
    case Clause::Updates:
        return "updates";
    }
    return "?";
}

namespace {

bool same_structure(const AlgorithmSpec& a, const AlgorithmSpec& b, std::string& details)
{
    auto names = [](const std::vector<NameRef>& refs) {
        std::set<std::string> out;
        for (const auto& r : refs)
            out.insert(r.name);
        return out;
    };
    if (a.states.size() != b.states.size()) {
        details = "different number of states";
        return false;
    }
    for (const auto& s : a.states) {
        const auto* t = b.find_state(s.name);
        if (t == nullptr) {
            details = "state '" + s.name + "' missing from the second algorithm";
            return false;
        }
        if (!(s.structure == t->structure)) {
            details = "state '" + s.name + "' differs";
            return false;
        }
    }
    if (names(a.initial) != names(b.initial)) {
        details = "different initial states";
        return false;
    }
    if (a.label_set() != b.label_set()) {
        details = "different labels";
        return false;
    }
    return true;
}

struct Candidate
{
    History history;
    Clause clause;
    std::string details;
};

void keep_least(std::optional<Candidate>& best, Candidate c)
{
    if (!best || std::tie(c.history, c.clause) < std::tie(best->history, best->clause))
        best = std::move(c);
}

std::string describe_verdict(const Verdict& v)
{
    switch (v.kind) {
    case Verdict::Kind::NotFinal:
        return "not-final";
    case Verdict::Kind::Success:
        return "success";
    case Verdict::Kind::Fail:
        return "fail";
    }
    return "?";
}

/// Clauses 3 to 5 at one history; returns the first failing clause.
std::optional<Candidate> compare_at(const AlgorithmSpec& a, const AlgorithmSpec& b, const Structure& x,
                                    const History& xi, ClauseResult& issued_r, ClauseResult& final_r,
                                    ClauseResult& updates_r)
{
    std::optional<Candidate> found;
    auto diverge = [&](ClauseResult& r, std::string details) {
        r.passed = false;
        if (!found)
            found = Candidate{xi, r.clause, std::move(details)};
    };
    try {
        auto ia = issued(a, x, xi);
        auto ib = issued(b, x, xi);
        ++issued_r.histories;
        if (ia != ib)
            diverge(issued_r, "issued " + format_query_set(ia) + " vs " + format_query_set(ib));
        auto va = verdict(a, x, xi);
        auto vb = verdict(b, x, xi);
        ++final_r.histories;
        if (va.kind != vb.kind)
            diverge(final_r, describe_verdict(va) + " vs " + describe_verdict(vb));
        if (va.is_success() && vb.is_success()) {
            ++updates_r.histories;
            auto ua = update_set(a, x, xi);
            auto ub = update_set(b, x, xi);
            if (ua != ub)
                diverge(updates_r, "updates " + to_string(ua) + " vs " + to_string(ub));
        }
    } catch (const Error& e) {
        diverge(issued_r, std::string("evaluation error: ") + e.what());
    }
    return found;
}

EquivalenceReport compare(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg, bool weak)
{
    if (!(a.vocabulary == b.vocabulary))
        throw ConfigMismatch("the algorithms have different vocabularies");

    EquivalenceReport report;
    report.weak = weak;
    std::string details;
    if (!same_structure(a, b, details)) {
        report.equivalent = false;
        report.structure_passed = false;
        report.divergence = Divergence{"", std::nullopt, Clause::Structure, details};
        return report;
    }

    for (const auto& s : a.states) {
        const auto& x = s.structure;
        StateReport sr{s.name, {}};
        ClauseResult attainable_r{Clause::Attainable};
        ClauseResult issued_r{Clause::Issued};
        ClauseResult final_r{Clause::Finality};
        ClauseResult updates_r{Clause::Updates};
        std::optional<Candidate> best;

        std::set<History> space;
        if (!weak) {
            auto ea = enumerate_attainable(a, x, cfg);
            auto eb = enumerate_attainable(b, x, cfg);
            report.bounded = report.bounded || ea.truncated || eb.truncated;
            space = ea.histories;
            space.insert(eb.histories.begin(), eb.histories.end());
            attainable_r.histories = space.size();
            for (const auto& xi : space) {
                bool in_a = ea.histories.contains(xi);
                bool in_b = eb.histories.contains(xi);
                if (in_a != in_b) {
                    attainable_r.passed = false;
                    keep_least(best, Candidate{xi, Clause::Attainable,
                                               std::string("attainable for the ") + (in_a ? "first" : "second") +
                                                   " algorithm only"});
                    break; // histories are visited in order: this is the least one
                }
            }
        } else {
            attainable_r.checked = false;
            validate_config(cfg, x);
            const auto pool = effective_pool(cfg, x);
            auto joint = breadth_first(cfg.jobs, [&](const History& xi) {
                try {
                    if (verdict(a, x, xi).is_final() || verdict(b, x, xi).is_final())
                        return Expansion{};
                    auto pa = pending(a, x, xi);
                    auto pb = pending(b, x, xi);
                    QuerySet common;
                    std::set_intersection(pa.begin(), pa.end(), pb.begin(), pb.end(),
                                          std::inserter(common, common.end()));
                    return expand_open(xi, common, pool, cfg);
                } catch (const Error&) {
                    return Expansion{}; // reported by compare_at
                }
            });
            report.bounded = report.bounded || joint.truncated;
            space = std::move(joint.histories);
        }

        for (const auto& xi : space)
            if (auto c = compare_at(a, b, x, xi, issued_r, final_r, updates_r))
                keep_least(best, std::move(*c));

        sr.clauses = {attainable_r, issued_r, final_r, updates_r};
        report.states.push_back(std::move(sr));
        if (best) {
            report.equivalent = false;
            if (!report.divergence)
                report.divergence = Divergence{s.name, best->history, best->clause, best->details};
        }
    }
    return report;
}

} // namespace

EquivalenceReport equivalent(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg)
{
    return compare(a, b, cfg, false);
}

EquivalenceReport weak_equivalent(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg)
{
    return compare(a, b, cfg, true);
}

bool agreement_property(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg)
{
    return equivalent(a, b, cfg).equivalent == weak_equivalent(a, b, cfg).equivalent;
}

std::string format_report(const EquivalenceReport& r)
{
    std::string out;
    if (!r.equivalent)
        out += "not equivalent\n";
    else
        out += r.bounded ? "equivalent up to bounds\n" : "equivalent\n";
    out += std::string("mode: ") + (r.weak ? "weak (jointly attainable histories)" : "full") + "\n";
    out += "clause 1 (structure): " + std::string(r.structure_passed ? "pass" : "FAIL") + "\n";
    for (const auto& s : r.states) {
        out += "state " + s.state + ":\n";
        for (const auto& c : s.clauses) {
            out += "  clause " + std::to_string(static_cast<int>(c.clause)) + " (" + to_string(c.clause) + "): ";
            if (!c.checked)
                out += "not checked\n";
            else
                out += std::string(c.passed ? "pass" : "FAIL") + " (" + std::to_string(c.histories) +
                       " histories)\n";
        }
    }
    if (r.divergence) {
        const auto& d = *r.divergence;
        out += "divergence: clause " + std::to_string(static_cast<int>(d.clause)) + " (" + to_string(d.clause) + ")";
        if (!d.state.empty())
            out += " in state " + d.state;
        if (d.history)
            out += " at " + format_history(*d.history);
        out += ": " + d.details + "\n";
    }
    return out;
}

std::string format_report_machine(const EquivalenceReport& r)
{
    auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    std::string out;
    out += "equivalent=" + flag(r.equivalent) + "\n";
    out += "mode=" + std::string(r.weak ? "weak" : "full") + "\n";
    out += "bounded=" + flag(r.bounded) + "\n\n";
    out += "clause=1\nname=structure\npassed=" + flag(r.structure_passed) + "\n\n";
    for (const auto& s : r.states) {
        for (const auto& c : s.clauses) {
            out += "state=" + s.state + "\n";
            out += "clause=" + std::to_string(static_cast<int>(c.clause)) + "\n";
            out += "name=" + to_string(c.clause) + "\n";
            out += "checked=" + flag(c.checked) + "\n";
            out += "passed=" + flag(c.passed) + "\n";
            out += "histories=" + std::to_string(c.histories) + "\n\n";
        }
    }
    if (r.divergence) {
        const auto& d = *r.divergence;
        out += "divergence.state=" + d.state + "\n";
        out += "divergence.clause=" + std::to_string(static_cast<int>(d.clause)) + "\n";
        out += "divergence.history=" + (d.history ? format_history(*d.history) : std::string()) + "\n";
        out += "divergence.details=" + d.details + "\n";
    }
    return out;
}

} // namespace isa
