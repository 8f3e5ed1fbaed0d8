#include "isa/cli.hpp"

#include "isa/analysis.hpp"
#include "isa/dsl.hpp"
#include "isa/execution.hpp"
#include "isa/history_io.hpp"
#include "isa/structure_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <ostream>

namespace isa::cli {

namespace {

struct Options
{
    std::string format = "human";
    bool verbose = false;

    std::string spec;
    std::string spec_b;
    std::string state;
    std::string state_file;
    std::string script;
    std::size_t steps = 1;
    std::size_t max_phases = 0; // 0: command default
    std::size_t max_domain = 8;
    std::size_t jobs = 1;
    std::vector<std::string> pool;
    std::vector<std::string> isos;
    bool weak = false;
    bool fixpoint = false;
};

/// Usage or input problem; reported with exit code 4.
struct UsageError
{
    std::string message;
};

AlgorithmSpec load_valid_spec(const std::string& path)
{
    AlgorithmSpec spec;
    try {
        spec = load_spec(path);
    } catch (const ParseError& e) {
        throw UsageError{path + ":" + e.what()};
    }
    auto diagnostics = validate_spec(spec);
    if (has_errors(diagnostics)) {
        std::string message = path + ": invalid algorithm";
        for (const auto& d : diagnostics)
            if (d.severity == Severity::Error)
                message += "\n" + path + ":" + to_string(d.span) + ": " + d.message;
        throw UsageError{message};
    }
    return spec;
}

Structure select_state(const AlgorithmSpec& spec, const Options& o)
{
    if (!o.state_file.empty()) {
        Structure x = [&] {
            try {
                return parse_structure(read_file(o.state_file));
            } catch (const ParseError& e) {
                throw UsageError{o.state_file + ":" + e.what()};
            }
        }();
        if (!(x.vocabulary() == spec.vocabulary))
            throw UsageError{o.state_file + ": vocabulary differs from the algorithm's"};
        auto ds = validate_structure(spec.vocabulary, x);
        if (!ds.empty())
            throw UsageError{o.state_file + ": " + ds.front().message};
        return x;
    }
    if (o.state.empty()) {
        auto initial = spec.initial_states();
        if (initial.empty())
            throw UsageError{"no initial state; use --state"};
        return initial.front()->structure;
    }
    const auto* s = spec.find_state(o.state);
    if (s == nullptr)
        throw UsageError{"unknown state '" + o.state + "'"};
    return s->structure;
}

Script load_script(const Options& o)
{
    if (o.script.empty())
        return {};
    try {
        return parse_script(read_file(o.script));
    } catch (const ParseError& e) {
        throw UsageError{o.script + ":" + e.what()};
    }
}

EnumerationConfig enumeration_config(const Options& o)
{
    EnumerationConfig cfg;
    if (!o.pool.empty()) {
        cfg.reply_pool.emplace();
        for (const auto& e : o.pool)
            cfg.reply_pool->push_back(Element{e});
    }
    cfg.max_phases = o.max_phases == 0 ? 3 : o.max_phases;
    cfg.max_domain = o.max_domain;
    cfg.jobs = o.jobs;
    return cfg;
}

bool machine(const Options& o)
{
    return o.format == "machine";
}

/* -------------------------------------------------------------------------- */

int cmd_validate(const Options& o, std::ostream& out)
{
    AlgorithmSpec spec;
    try {
        spec = load_spec(o.spec);
    } catch (const ParseError& e) {
        throw UsageError{o.spec + ":" + e.what()};
    }
    auto diagnostics = validate_spec(spec);
    for (const auto& d : diagnostics)
        out << o.spec << ":" << to_string(d.span) << ": "
            << (d.severity == Severity::Error ? "error: " : "warning: ") << d.message << "\n";
    bool ok = !has_errors(diagnostics);
    if (machine(o)) {
        out << "valid=" << (ok ? "true" : "false") << "\n";
        out << "diagnostics=" << diagnostics.size() << "\n";
    } else {
        out << (ok ? "valid" : "invalid") << ": algorithm " << spec.name << "\n";
    }
    return ok ? 0 : 1;
}

void print_trace(const Options& o, const StepTrace& t, std::ostream& out)
{
    out << (machine(o) ? format_trace_machine(t) : format_trace(t));
}

int cmd_step(const Options& o, std::ostream& out)
{
    auto spec = load_valid_spec(o.spec);
    auto x = select_state(spec, o);
    ScriptedEnvironment env(load_script(o));
    auto trace = step(spec, x, env, o.max_phases == 0 ? 64 : o.max_phases);
    print_trace(o, trace, out);
    return exit_code(trace.outcome);
}

int cmd_run(const Options& o, std::ostream& out)
{
    auto spec = load_valid_spec(o.spec);
    auto x = select_state(spec, o);
    auto script = load_script(o);
    auto steps = run(
        spec, x, [&] { return std::make_unique<ScriptedEnvironment>(script); }, o.steps,
        o.max_phases == 0 ? 64 : o.max_phases, o.fixpoint);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (machine(o))
            out << "step=" << i << "\n";
        else
            out << "== step " << i << "\n";
        print_trace(o, steps[i].trace, out);
        if (machine(o))
            out << "\n";
    }
    if (machine(o))
        out << "steps=" << steps.size() << "\n";
    else
        out << "steps: " << steps.size() << "\n";
    return steps.empty() ? 0 : exit_code(steps.back().trace.outcome);
}

int cmd_repl(const Options& o, std::istream& in, std::ostream& out)
{
    auto spec = load_valid_spec(o.spec);
    auto x = select_state(spec, o);
    out << "algorithm " << spec.name << ": answer pending queries with 'answer (q) = element', then 'go'; "
        << "'stall' stops\n";
    InteractiveEnvironment env(in, out);
    auto trace = step(spec, x, env, o.max_phases == 0 ? 64 : o.max_phases);
    print_trace(o, trace, out);
    return exit_code(trace.outcome);
}

int cmd_enumerate(const Options& o, std::ostream& out)
{
    auto spec = load_valid_spec(o.spec);
    auto x = select_state(spec, o);
    auto cfg = enumeration_config(o);
    auto e = enumerate_attainable(spec, x, cfg);
    const std::string state = o.state_file.empty() ? (o.state.empty() ? spec.initial.front().name : o.state)
                                                   : o.state_file;
    if (machine(o)) {
        out << "state=" << state << "\n";
        out << "config=" << describe(cfg) << "\n";
        out << "count=" << e.histories.size() << "\n";
        out << "truncated=" << (e.truncated ? "true" : "false") << "\n";
        for (const auto& xi : e.histories)
            out << "history=" << format_history(xi) << "\n";
    } else {
        out << e.histories.size() << " attainable histories of " << state << " (" << describe(cfg) << ")\n";
        if (e.truncated)
            out << "warning: the bounds truncated the history space\n";
        for (const auto& xi : e.histories)
            out << format_history(xi) << "\n";
    }
    return 0;
}

int cmd_check(const Options& o, std::ostream& out)
{
    auto spec = load_valid_spec(o.spec);
    std::vector<IsoCase> isos;
    for (const auto& path : o.isos) {
        try {
            isos.push_back(parse_iso(read_file(path)));
        } catch (const ParseError& e) {
            throw UsageError{path + ":" + e.what()};
        }
    }
    auto report = check_postulates(spec, enumeration_config(o), isos);
    out << (machine(o) ? format_report_machine(report) : format_report(report));
    return report.passed() ? 0 : 1;
}

int cmd_equiv(const Options& o, std::ostream& out)
{
    auto a = load_valid_spec(o.spec);
    auto b = load_valid_spec(o.spec_b);
    auto cfg = enumeration_config(o);
    auto report = o.weak ? weak_equivalent(a, b, cfg) : equivalent(a, b, cfg);
    out << (machine(o) ? format_report_machine(report) : format_report(report));
    return report.equivalent ? 0 : 1;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Interactive small-step algorithm toolkit", "isa"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
    app.add_flag("--verbose", o.verbose, "Report timings on standard error");

    auto add_state = [&](CLI::App* c) {
        c->add_option("--state", o.state, "Declared state to start from");
        c->add_option("--state-file", o.state_file, "Structure file to start from")->check(CLI::ExistingFile);
    };
    auto add_bounds = [&](CLI::App* c) {
        c->add_option("--pool", o.pool, "Reply pool (comma separated; default: the whole base)")->delimiter(',');
        c->add_option("--max-phases", o.max_phases, "Phase bound (default 3)")->check(CLI::PositiveNumber);
        c->add_option("--max-domain", o.max_domain, "Domain-size bound")->check(CLI::PositiveNumber);
        c->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    };
    auto add_spec = [&](CLI::App* c) {
        c->add_option("spec", o.spec, "Algorithm file (.isa)")->required()->check(CLI::ExistingFile);
    };

    auto* validate = app.add_subcommand("validate", "Parse and check an algorithm");
    add_spec(validate);

    auto* step_cmd = app.add_subcommand("step", "Execute one step against a scripted environment");
    add_spec(step_cmd);
    add_state(step_cmd);
    step_cmd->add_option("--script", o.script, "Environment script (.env)")->check(CLI::ExistingFile);
    step_cmd->add_option("--max-phases", o.max_phases, "Phase bound (default 64)")->check(CLI::PositiveNumber);

    auto* run_cmd = app.add_subcommand("run", "Execute several steps, replaying the script each step");
    add_spec(run_cmd);
    add_state(run_cmd);
    run_cmd->add_option("--script", o.script, "Environment script (.env)")->check(CLI::ExistingFile);
    run_cmd->add_option("--steps", o.steps, "Number of steps");
    run_cmd->add_option("--max-phases", o.max_phases, "Phase bound per step (default 64)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_flag("--fixpoint", o.fixpoint, "Stop once a step leaves the state unchanged");

    auto* repl = app.add_subcommand("repl", "Execute one step with you as the environment");
    add_spec(repl);
    add_state(repl);
    repl->add_option("--max-phases", o.max_phases, "Phase bound (default 64)")->check(CLI::PositiveNumber);

    auto* enumerate = app.add_subcommand("enumerate", "List the attainable histories");
    add_spec(enumerate);
    add_state(enumerate);
    add_bounds(enumerate);

    auto* check = app.add_subcommand("check", "Check the postulates on the enumerated histories");
    add_spec(check);
    add_bounds(check);
    check->add_option("--iso", o.isos, "Isomorphism file (from S / to T / a -> b)")->check(CLI::ExistingFile);

    auto* equiv = app.add_subcommand("equiv", "Compare two algorithms for behavioural equivalence");
    add_spec(equiv);
    equiv->add_option("other", o.spec_b, "Second algorithm file")->required()->check(CLI::ExistingFile);
    equiv->add_flag("--weak", o.weak, "Compare on jointly attainable histories only");
    add_bounds(equiv);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : usage_exit_code;
    }

    const auto started = std::chrono::steady_clock::now();
    int code = usage_exit_code;
    try {
        if (*validate)
            code = cmd_validate(o, out);
        else if (*step_cmd)
            code = cmd_step(o, out);
        else if (*run_cmd)
            code = cmd_run(o, out);
        else if (*repl)
            code = cmd_repl(o, in, out);
        else if (*enumerate)
            code = cmd_enumerate(o, out);
        else if (*check)
            code = cmd_check(o, out);
        else if (*equiv)
            code = cmd_equiv(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.message << "\n";
        return usage_exit_code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return usage_exit_code;
    }
    if (o.verbose) {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        err << "elapsed: " << ms.count() << " ms\n";
    }
    return code;
}

} // namespace isa::cli
