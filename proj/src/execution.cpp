#include "isa/execution.hpp"

#include "isa/history_io.hpp"
#include "literal_text.hpp"
#include "structure_text.hpp"

#include <istream>
#include <ostream>

namespace isa {

Script parse_script(std::string_view text)
{
    detail::TokenStream ts(text, detail::LexMode::Literal);
    Script out;
    while (!ts.at_end()) {
        if (ts.accept_word("stall")) {
            out.emplace_back(std::nullopt);
        } else if (ts.accept_word("phase")) {
            const auto start = ts.peek().span;
            auto batch = detail::parse_answers(ts);
            if (batch.empty())
                throw SyntaxError(ts.span_from(start), "an empty phase", {"at least one answer"});
            out.emplace_back(std::move(batch));
        } else {
            ts.fail({"'phase'", "'stall'", "end of input"});
        }
    }
    return out;
}

std::string print_script(const Script& script)
{
    std::string out;
    for (const auto& entry : script)
        out += entry ? "phase " + format_answers(*entry) + "\n" : "stall\n";
    return out;
}

Batch ScriptedEnvironment::next_batch(const Structure&, const History& xi, const QuerySet& pending)
{
    if (_next >= _script.size() || !_script[_next]) {
        if (_next < _script.size())
            ++_next;
        return Stall{};
    }
    const auto& batch = *_script[_next];
    for (const auto& [q, r] : batch)
        if (!pending.contains(q))
            throw EnvironmentProtocolError("script phase " + std::to_string(_next) + " answers " + format_query(q) +
                                           ", which is not pending at " + format_history(xi));
    ++_next;
    return batch;
}

Batch InteractiveEnvironment::next_batch(const Structure& x, const History& xi, const QuerySet& pending)
{
    _out << "history " << format_history(xi) << "\n";
    _out << "pending " << format_query_set(pending) << "\n";
    AnswerFunction batch;
    std::string line;
    while (true) {
        _out << "> " << std::flush;
        if (!std::getline(_in, line)) {
            _out << "\n";
            return Stall{};
        }
        try {
            detail::TokenStream ts(line, detail::LexMode::Literal);
            if (ts.at_end())
                continue;
            if (ts.accept_word("stall"))
                return Stall{};
            if (ts.accept_word("go")) {
                if (batch.empty()) {
                    _out << "no answers yet; use 'answer (q) = element' or 'stall'\n";
                    continue;
                }
                return batch;
            }
            ts.expect_word("answer");
            Query q = detail::parse_query(ts);
            ts.expect_punct("=");
            Element r{ts.expect_identifier("an element").text};
            if (!ts.at_end())
                ts.fail({"end of line"});
            if (!pending.contains(q)) {
                _out << format_query(q) << " is not pending\n";
                continue;
            }
            if (!x.contains(r)) {
                _out << "'" << r.id << "' is not in the base set\n";
                continue;
            }
            batch[q] = r;
        } catch (const ParseError& e) {
            _out << e.what() << "\n";
        }
    }
}

/* -------------------------------------------------------------------------- */

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Success:
        return "success";
    case Outcome::Fail:
        return "fail";
    case Outcome::Hang:
        return "hang";
    case Outcome::ConformanceError:
        return "conformance-error";
    }
    return "?";
}

int exit_code(Outcome o)
{
    switch (o) {
    case Outcome::Success:
        return 0;
    case Outcome::Fail:
        return 1;
    case Outcome::Hang:
        return 2;
    case Outcome::ConformanceError:
        return 3;
    }
    return usage_exit_code;
}

namespace {

void check_batch(const Structure& x, const History& xi, const QuerySet& pending, const AnswerFunction& batch)
{
    if (batch.empty())
        throw EnvironmentProtocolError("empty batch at " + format_history(xi));
    for (const auto& [q, r] : batch) {
        if (!pending.contains(q))
            throw EnvironmentProtocolError("batch answers " + format_query(q) + ", which is not pending at " +
                                           format_history(xi));
        if (!x.contains(r))
            throw EnvironmentProtocolError("reply '" + r.id + "' to " + format_query(q) +
                                           " is not in the base set");
    }
}

} // namespace

StepTrace step(const AlgorithmSpec& spec, const Structure& x, Environment& env, std::size_t max_phases)
{
    StepTrace trace;
    History xi;
    while (true) {
        trace.verdict = verdict(spec, x, xi);
        if (trace.verdict.is_success()) {
            trace.outcome = Outcome::Success;
            trace.delta = update_set(spec, x, xi);
            trace.next = apply_updates(x, trace.delta);
            break;
        }
        if (trace.verdict.is_fail()) {
            trace.outcome = Outcome::Fail;
            trace.detail = trace.verdict.reason;
            break;
        }
        auto issued_now = issued(spec, x, xi);
        QuerySet open;
        for (const auto& q : issued_now)
            if (!xi.contains(q))
                open.insert(q);
        if (open.empty()) {
            trace.outcome = Outcome::ConformanceError;
            trace.detail = "complete history " + format_history(xi) + " is not final";
            break;
        }
        if (xi.length() >= max_phases) {
            trace.outcome = Outcome::Hang;
            trace.pending = std::move(open);
            trace.detail = "phase bound " + std::to_string(max_phases) + " reached";
            break;
        }
        auto batch = env.next_batch(x, xi, open);
        if (std::holds_alternative<Stall>(batch)) {
            trace.outcome = Outcome::Hang;
            trace.pending = std::move(open);
            trace.detail = "environment stalled";
            break;
        }
        auto& answers = std::get<AnswerFunction>(batch);
        check_batch(x, xi, open, answers);
        xi = append_class(xi, answers);
        trace.phases.push_back(PhaseRecord{std::move(issued_now), std::move(answers)});
    }
    trace.final_history = std::move(xi);
    return trace;
}

std::vector<RunStep> run(const AlgorithmSpec& spec, const Structure& x0, const EnvironmentFactory& env_factory,
                         std::size_t max_steps, std::size_t max_phases, bool stop_at_fixpoint)
{
    std::vector<RunStep> out;
    Structure state = x0;
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto env = env_factory();
        auto trace = step(spec, state, *env, max_phases);
        bool done = trace.outcome != Outcome::Success || (stop_at_fixpoint && *trace.next == state);
        std::optional<Structure> next = trace.next;
        out.push_back(RunStep{std::move(state), std::move(trace)});
        if (done)
            break;
        state = std::move(*next);
    }
    return out;
}

/* -------------------------------------------------------------------------- */

std::string format_trace(const StepTrace& trace)
{
    std::string out;
    for (std::size_t i = 0; i < trace.phases.size(); ++i)
        out += "phase " + std::to_string(i) + ": issued " + format_query_set(trace.phases[i].issued) + " batch " +
               format_answers(trace.phases[i].batch) + "\n";
    out += "history: " + format_history(trace.final_history) + "\n";
    out += "verdict: " + to_string(trace.verdict) + "\n";
    if (trace.outcome == Outcome::Success) {
        out += "updates: " + to_string(trace.delta) + "\n";
        out += "next:\n" + detail::print_structure_body(*trace.next, "  ");
    }
    if (trace.outcome == Outcome::Hang)
        out += "pending: " + format_query_set(trace.pending) + "\n";
    out += "outcome: " + to_string(trace.outcome);
    if (!trace.detail.empty())
        out += " (" + trace.detail + ")";
    return out + "\n";
}

std::string format_trace_machine(const StepTrace& trace)
{
    std::string out;
    out += "outcome=" + to_string(trace.outcome) + "\n";
    out += "phases=" + std::to_string(trace.phases.size()) + "\n";
    out += "history=" + format_history(trace.final_history) + "\n";
    out += "verdict=" + to_string(trace.verdict) + "\n";
    if (trace.outcome == Outcome::Success)
        out += "updates=" + to_string(trace.delta) + "\n";
    if (trace.outcome == Outcome::Hang)
        out += "pending=" + format_query_set(trace.pending) + "\n";
    if (!trace.detail.empty())
        out += "detail=" + trace.detail + "\n";
    return out;
}

} // namespace isa
