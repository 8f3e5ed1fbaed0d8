#pragma once

#include "isa/structure.hpp"

#include <compare>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace isa {

struct Label
{
    std::string name;

    friend auto operator<=>(const Label&, const Label&) = default;
};

/// One position of a query: an element of the state or an algorithm label
/// (the disjoint union is kept by the variant tag).
using QueryComponent = std::variant<Element, Label>;

struct Query
{
    std::vector<QueryComponent> components;

    static Query of_label(std::string label) { return Query{{Label{std::move(label)}}}; }

    [[nodiscard]] std::size_t length() const { return components.size(); }
    friend auto operator<=>(const Query&, const Query&) = default;
};

using QuerySet = std::set<Query>;
using AnswerFunction = std::map<Query, Element>;
using PhaseMap = std::map<Query, std::size_t>;

/// Finite answer function with a linear pre-order of its domain, stored as
/// contiguous phase indices 0..k-1 (phase = equivalence class).
///
/// Ordering: by number of phases, then domain size, then the entries listed
/// phase by phase. This is the canonical order of history sets and makes
/// shorter histories come first.
class History
{
public:
    struct Entry
    {
        std::size_t phase;
        Query query;
        Element reply;

        friend auto operator<=>(const Entry&, const Entry&) = default;
    };

    History() = default;

    [[nodiscard]] const AnswerFunction& answers() const { return _answers; }
    [[nodiscard]] const PhaseMap& phases() const { return _phases; }

    [[nodiscard]] std::size_t length() const { return _length; }
    [[nodiscard]] std::size_t size() const { return _answers.size(); }
    [[nodiscard]] bool empty() const { return _answers.empty(); }
    [[nodiscard]] bool contains(const Query& q) const { return _answers.contains(q); }
    [[nodiscard]] const Element& reply(const Query& q) const;
    [[nodiscard]] std::size_t phase(const Query& q) const;

    /// Domain of the answer function.
    [[nodiscard]] QuerySet domain() const;
    /// Replies, i.e. the range of the answer function.
    [[nodiscard]] std::set<Element> range() const;
    /// Queries of phase `p`.
    [[nodiscard]] std::vector<Query> phase_class(std::size_t p) const;
    /// Entries sorted by (phase, query).
    [[nodiscard]] std::vector<Entry> entries() const;

    /// The first `classes` phases (an initial segment).
    [[nodiscard]] History prefix(std::size_t classes) const;

    friend bool operator==(const History& a, const History& b)
    {
        return a._answers == b._answers && a._phases == b._phases;
    }
    friend std::strong_ordering operator<=>(const History& a, const History& b);

private:
    friend History mk_history(AnswerFunction, PhaseMap, bool);
    friend History append_class(const History&, const AnswerFunction&);

    AnswerFunction _answers;
    PhaseMap _phases;
    std::size_t _length = 0;
};

/// Validates and (optionally) normalises any order-isomorphic phase labelling
/// to 0..k-1. Throws DomainMismatch when phase keys differ from answer keys
/// and NonContiguousPhases when `normalize` is off and the labels have holes.
History mk_history(AnswerFunction answers, PhaseMap phases, bool normalize = true);

/// Whether `eta` is a down-closed, equivalence-closed restriction of `xi`.
bool is_initial_segment(const History& eta, const History& xi);

/// The length(xi)+1 prefixes, shortest first.
std::vector<History> initial_segments(const History& xi);

/// xi restricted to the queries strictly before q.
History restrict_before(const History& xi, const Query& q);
/// xi restricted to the queries not after q (q's whole class included).
History restrict_upto(const History& xi, const Query& q);

/// Appends `batch` as one new phase at the end.
History append_class(const History& xi, const AnswerFunction& batch);

/// Assertion helper: two initial segments of one history are comparable.
/// Throws PreconditionViolation unless both are initial segments of `xi`.
bool common_prefix_comparable(const History& xi1, const History& xi2, const History& xi);

using IssuedFunction = std::function<QuerySet(const History&)>;
using Chooser = std::function<AnswerFunction(const QuerySet&)>;

/// Completes a coherent history by repeatedly appending the pending queries
/// as a single new phase, answered by `chooser`. Throws CapExceeded when
/// queries are still pending after `cap` rounds.
History complete_history(const IssuedFunction& issued, const History& xi, const Chooser& chooser,
                         std::size_t cap);

/* -------------------------------------------------------------------------- */

Query apply_isomorphism(const Isomorphism& i, const Query& q);
QuerySet apply_isomorphism(const Isomorphism& i, const QuerySet& qs);
History apply_isomorphism(const Isomorphism& i, const History& xi);

} // namespace isa
