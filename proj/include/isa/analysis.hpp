#pragma once

#include "isa/algorithm.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace isa {

/// Bounds of the explored history space.
struct EnumerationConfig
{
    /// Replies tried for each pending query; nullopt means the whole base.
    std::optional<std::vector<Element>> reply_pool;
    std::size_t max_phases = 3;
    std::size_t max_domain = 8;
    /// Worker threads per frontier layer.
    std::size_t jobs = 1;
};

/// Throws ConfigMismatch unless the pool lies in the base and the bounds are
/// positive.
void validate_config(const EnumerationConfig& cfg, const Structure& x);

/// Pool actually used for `x` (the explicit pool, or the sorted base).
std::vector<Element> effective_pool(const EnumerationConfig& cfg, const Structure& x);

std::string describe(const EnumerationConfig& cfg);

struct Enumeration
{
    std::set<History> histories;
    /// Some non-final history had pending queries that the bounds cut off.
    bool truncated = false;
};

/// Attainable histories reachable within the bounds, breadth first: a
/// non-final history is extended by every nonempty assignment of pool
/// replies to some of its pending queries, appended as one new phase.
Enumeration enumerate_attainable(const AlgorithmSpec& spec, const Structure& x, const EnumerationConfig& cfg);

/* -------------------------------------------------------------------------- */

/// A client-supplied isomorphism between two declared states.
struct IsoCase
{
    Isomorphism map;
    std::string from;
    std::string to;
};

/// Parses `from S`, `to T` and `a -> b` lines (`#` comments).
IsoCase parse_iso(std::string_view text);

struct ConformanceSection
{
    std::string name;
    std::vector<std::string> violations;

    [[nodiscard]] bool passed() const { return violations.empty(); }
};

struct ConformanceReport
{
    std::vector<ConformanceSection> sections;
    bool truncated = false;

    [[nodiscard]] bool passed() const;
};

/// Runs, over the enumerated attainable histories of every state:
/// completeness-implies-finality, verdict consistency (fail exactly when a
/// fail rule holds or the updates clash), the declared work bounds, transport
/// along each isomorphism, and the witness check on every pair of states.
ConformanceReport check_postulates(const AlgorithmSpec& spec, const EnumerationConfig& cfg,
                                   const std::vector<IsoCase>& isos);

std::string format_report(const ConformanceReport& r);
std::string format_report_machine(const ConformanceReport& r);

/* -------------------------------------------------------------------------- */

/// Clauses of behavioural equivalence.
enum class Clause {
    Structure = 1, // same states, initial states and labels
    Attainable,    // same attainable histories
    Issued,        // same issued queries on attainable histories
    Finality,      // same successful and failing final histories
    Updates,       // same update sets on successful final histories
};

std::string to_string(Clause c);

struct ClauseResult
{
    Clause clause;
    bool checked = true;
    bool passed = true;
    std::size_t histories = 0; // histories examined
};

struct StateReport
{
    std::string state;
    std::vector<ClauseResult> clauses;
};

struct Divergence
{
    std::string state; // empty for clause 1
    std::optional<History> history;
    Clause clause;
    std::string details;
};

struct EquivalenceReport
{
    bool equivalent = true;
    bool weak = false;
    /// Enumeration hit the bounds: the verdict holds up to the bounds only.
    bool bounded = false;
    bool structure_passed = true;
    std::vector<StateReport> states;
    /// Least divergence in (history, clause) order.
    std::optional<Divergence> divergence;
};

/// Compares two algorithms clause by clause over their enumerated
/// attainable histories; clauses 3 to 5 range over the union of both
/// attainable sets. Throws ConfigMismatch when the vocabularies differ.
EquivalenceReport equivalent(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg);

/// Checks clause 1 and clauses 3 to 5 on the histories attainable for both
/// algorithms only. Agrees with `equivalent`.
EquivalenceReport weak_equivalent(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg);

/// equivalent(a, b) and weak_equivalent(a, b) reach the same verdict.
bool agreement_property(const AlgorithmSpec& a, const AlgorithmSpec& b, const EnumerationConfig& cfg);

std::string format_report(const EquivalenceReport& r);
std::string format_report_machine(const EquivalenceReport& r);

} // namespace isa
