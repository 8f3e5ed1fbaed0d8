#pragma once

#include "isa/algorithm.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace isa {

/// Environment refuses to answer anything further.
struct Stall
{
    friend bool operator==(const Stall&, const Stall&) = default;
};

using Batch = std::variant<AnswerFunction, Stall>;

/// Supplies the replies of one phase. A batch must be nonempty, answer only
/// pending queries and reply with base elements.
class Environment
{
public:
    virtual ~Environment() = default;
    virtual Batch next_batch(const Structure& x, const History& xi, const QuerySet& pending) = 0;
};

/// One scripted phase; nullopt is `stall`.
using ScriptEntry = std::optional<AnswerFunction>;
using Script = std::vector<ScriptEntry>;

/// Script text:
///
///     phase { (offer0) -> yes ; (offer1) -> yes }
///     stall
///
/// `#` starts a comment. print_script is canonical and parses back to the
/// same script.
Script parse_script(std::string_view text);
std::string print_script(const Script& script);

/// Replays a script batch by batch; stalls once exhausted. A batch that
/// answers a non-pending query throws EnvironmentProtocolError.
class ScriptedEnvironment : public Environment
{
public:
    explicit ScriptedEnvironment(Script script) : _script(std::move(script)) {}

    Batch next_batch(const Structure& x, const History& xi, const QuerySet& pending) override;

    [[nodiscard]] std::size_t position() const { return _next; }

private:
    Script _script;
    std::size_t _next = 0;
};

/// A person plays the environment. Each phase prints the pending queries and
/// reads commands until `go` or `stall`:
///
///     answer (offer0) = yes
///     go
///
/// Bad input is reported on `out` and the prompt repeats. End of input
/// counts as `stall`.
class InteractiveEnvironment : public Environment
{
public:
    InteractiveEnvironment(std::istream& in, std::ostream& out) : _in(in), _out(out) {}

    Batch next_batch(const Structure& x, const History& xi, const QuerySet& pending) override;

private:
    std::istream& _in;
    std::ostream& _out;
};

/* -------------------------------------------------------------------------- */

enum class Outcome { Success, Fail, Hang, ConformanceError };

std::string to_string(Outcome o);

/// Process exit code: 0 Success, 1 Fail, 2 Hang, 3 ConformanceError.
int exit_code(Outcome o);
inline constexpr int usage_exit_code = 4;

struct PhaseRecord
{
    QuerySet issued; // issued by the history before this phase
    AnswerFunction batch;

    friend bool operator==(const PhaseRecord&, const PhaseRecord&) = default;
};

struct StepTrace
{
    std::vector<PhaseRecord> phases;
    History final_history;
    Verdict verdict;
    UpdateSet delta;               // Success only
    std::optional<Structure> next; // Success only
    Outcome outcome = Outcome::Hang;
    QuerySet pending;              // Hang only
    std::string detail;

    friend bool operator==(const StepTrace&, const StepTrace&) = default;
};

/// Runs one step from the empty history, one environment batch per phase,
/// and stops at the first final history (so the realized history is always
/// attainable). Hangs on Stall or after `max_phases` phases; a complete
/// history that is not final is a ConformanceError outcome.
///
/// Throws EnvironmentProtocolError on an empty batch, an answer to a
/// non-pending query or a reply outside the base.
StepTrace step(const AlgorithmSpec& spec, const Structure& x, Environment& env, std::size_t max_phases);

using EnvironmentFactory = std::function<std::unique_ptr<Environment>()>;

struct RunStep
{
    Structure state; // the state the step started from
    StepTrace trace;
};

/// Iterates `step` with a fresh environment per step. Stops after
/// `max_steps`, at the first non-successful step, or (when asked) once a
/// step leaves the state unchanged.
std::vector<RunStep> run(const AlgorithmSpec& spec, const Structure& x0, const EnvironmentFactory& env_factory,
                         std::size_t max_steps, std::size_t max_phases, bool stop_at_fixpoint = false);

/// Human-readable trace: one line per phase, then history, verdict, updates
/// and next state.
std::string format_trace(const StepTrace& trace);
/// `key=value` lines.
std::string format_trace_machine(const StepTrace& trace);

} // namespace isa
