#pragma once

#include "isa/history.hpp"
#include "isa/structure.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace isa {

/* -------------------------------------------------------------------------- */
/* Guards and templates                                                       */
/* -------------------------------------------------------------------------- */

/// Boolean condition on a history. Atoms name query templates; inside terms,
/// a variable named Q stands for reply(Q).
///
/// Atom semantics: answered(Q) holds when Q's instance is in the domain;
/// reply(Q) = t and t1 = t2 are false when a mentioned reply is missing;
/// before and simultaneous need both queries answered and compare phases;
/// start holds only at the empty history.
struct Guard
{
    enum class Kind { Start, Answered, Unanswered, ReplyEq, Before, Simultaneous, TermEq, Not, And, Or };

    Kind kind = Kind::Start;
    std::vector<std::string> queries; // Answered/Unanswered/ReplyEq: 1, Before/Simultaneous: 2
    std::vector<Term> terms;          // ReplyEq: 1, TermEq: 2
    std::vector<Guard> operands;      // Not: 1, And/Or: 2
    SourceSpan span;

    static Guard start() { return Guard{}; }
    static Guard answered(std::string q) { return Guard{Kind::Answered, {std::move(q)}, {}, {}, {}}; }
    static Guard unanswered(std::string q) { return Guard{Kind::Unanswered, {std::move(q)}, {}, {}, {}}; }
    static Guard reply_eq(std::string q, Term t) { return Guard{Kind::ReplyEq, {std::move(q)}, {std::move(t)}, {}, {}}; }
    static Guard before(std::string a, std::string b) { return Guard{Kind::Before, {std::move(a), std::move(b)}, {}, {}, {}}; }
    static Guard simultaneous(std::string a, std::string b)
    {
        return Guard{Kind::Simultaneous, {std::move(a), std::move(b)}, {}, {}, {}};
    }
    static Guard term_eq(Term a, Term b) { return Guard{Kind::TermEq, {}, {std::move(a), std::move(b)}, {}, {}}; }
    static Guard negate(Guard g) { return Guard{Kind::Not, {}, {}, {std::move(g)}, {}}; }
    static Guard conj(Guard a, Guard b) { return Guard{Kind::And, {}, {}, {std::move(a), std::move(b)}, {}}; }
    static Guard disj(Guard a, Guard b) { return Guard{Kind::Or, {}, {}, {std::move(a), std::move(b)}, {}}; }

    friend bool operator==(const Guard&, const Guard&) = default;
};

using TemplateComponent = std::variant<Label, Term>;

/// Named family of queries; term components may mention reply(P), so the
/// instance depends on the history.
struct QueryTemplate
{
    std::string name;
    std::vector<TemplateComponent> components;
    SourceSpan span;

    friend bool operator==(const QueryTemplate&, const QueryTemplate&) = default;
};

struct IssueRule
{
    std::string name;
    Guard guard;
    std::string query; // template name
    SourceSpan span;

    friend bool operator==(const IssueRule&, const IssueRule&) = default;
};

enum class FinalKind { Succeed, Fail };

struct FinalRule
{
    std::string name;
    Guard guard;
    FinalKind kind = FinalKind::Succeed;
    SourceSpan span;

    friend bool operator==(const FinalRule&, const FinalRule&) = default;
};

struct UpdateRule
{
    std::string name;
    Guard guard;
    std::string symbol;
    std::vector<Term> args;
    Term value;
    SourceSpan span;

    friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
};

struct NameRef
{
    std::string name;
    SourceSpan span;

    friend bool operator==(const NameRef&, const NameRef&) = default;
};

struct StateDecl
{
    std::string name;
    Structure structure;
    SourceSpan span;

    friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct Bounds
{
    std::size_t max_query_len = 0;
    std::size_t max_issued = 0;
    SourceSpan span;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Witness term; its variables range over the replies of a history.
struct WitnessTerm
{
    Term term;
    SourceSpan span;

    friend bool operator==(const WitnessTerm&, const WitnessTerm&) = default;
};

/// An interactive small-step algorithm given by finite guarded rules.
///
/// Doubles as the parsed syntax tree of a `.isa` file: every node keeps its
/// source span, and equality ignores spans.
struct AlgorithmSpec
{
    std::string name;
    /// Strict mode: complete histories are final only through a final rule.
    bool strict = false;
    Vocabulary vocabulary;
    std::vector<NameRef> labels;
    std::vector<StateDecl> states;
    std::vector<NameRef> initial;
    std::vector<QueryTemplate> queries;
    std::vector<IssueRule> issue_rules;
    std::vector<FinalRule> final_rules;
    std::vector<UpdateRule> update_rules;
    Bounds bounds;
    std::vector<WitnessTerm> witness;
    SourceSpan span;

    [[nodiscard]] const QueryTemplate* find_query(std::string_view name) const;
    [[nodiscard]] const StateDecl* find_state(std::string_view name) const;
    [[nodiscard]] std::set<std::string> label_set() const;
    /// Declared initial states, in declaration order (unknown names skipped).
    [[nodiscard]] std::vector<const StateDecl*> initial_states() const;

    friend bool operator==(const AlgorithmSpec&, const AlgorithmSpec&) = default;
};

/* -------------------------------------------------------------------------- */
/* Verdicts                                                                   */
/* -------------------------------------------------------------------------- */

struct Verdict
{
    enum class Kind { NotFinal, Success, Fail };

    Kind kind = Kind::NotFinal;
    std::string reason; // Fail only: the fail rule or the clashing location

    static Verdict not_final() { return {}; }
    static Verdict success() { return Verdict{Kind::Success, {}}; }
    static Verdict fail(std::string reason) { return Verdict{Kind::Fail, std::move(reason)}; }

    [[nodiscard]] bool is_final() const { return kind != Kind::NotFinal; }
    [[nodiscard]] bool is_success() const { return kind == Kind::Success; }
    [[nodiscard]] bool is_fail() const { return kind == Kind::Fail; }

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

/* -------------------------------------------------------------------------- */
/* Semantics                                                                  */
/* -------------------------------------------------------------------------- */

/// Instance of template `name` at `xi`; nullopt when one of the replies it
/// mentions is missing.
std::optional<Query> instantiate(const AlgorithmSpec& spec, const Structure& x, const History& xi,
                                 std::string_view name);

bool holds(const AlgorithmSpec& spec, const Structure& x, const History& xi, const Guard& guard);

/// Queries caused by `xi` itself: instances of issue rules whose guard holds.
QuerySet causes(const AlgorithmSpec& spec, const Structure& x, const History& xi);
/// Union of causes over all initial segments.
QuerySet issued(const AlgorithmSpec& spec, const Structure& x, const History& xi);
QuerySet pending(const AlgorithmSpec& spec, const Structure& x, const History& xi);

bool is_coherent(const AlgorithmSpec& spec, const Structure& x, const History& xi);
bool is_complete(const AlgorithmSpec& spec, const Structure& x, const History& xi);

/// Final iff a final rule holds, or (outside strict mode) the history is
/// complete. A final history fails when a fail rule holds or the update set
/// clashes; otherwise it succeeds.
Verdict verdict(const AlgorithmSpec& spec, const Structure& x, const History& xi);

/// Coherent, and no proper initial segment is final.
bool is_attainable(const AlgorithmSpec& spec, const Structure& x, const History& xi);

UpdateSet update_set(const AlgorithmSpec& spec, const Structure& x, const History& xi);

/// Throws NotSuccessful unless the verdict is Success.
Structure next_state(const AlgorithmSpec& spec, const Structure& x, const History& xi);

/// Query-length, issued-count and domain-size bounds over `attainables`.
std::vector<Diagnostic> check_bounds(const AlgorithmSpec& spec, const Structure& x,
                                     const std::vector<History>& attainables);

/// When (x, xi) and (x2, xi) agree on the witness terms, reports any
/// difference in causes, verdict class or update set.
std::vector<Diagnostic> check_witness(const AlgorithmSpec& spec, const Structure& x,
                                      const Structure& x2, const History& xi);

} // namespace isa
