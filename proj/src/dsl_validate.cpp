#include "isa/dsl.hpp"

#include <functional>
#include <map>
#include <set>

namespace isa {

namespace {

class Validator
{
public:
    explicit Validator(const SpecAst& ast) : _ast(ast) {}

    std::vector<Diagnostic> run()
    {
        check_states();
        check_templates();
        check_rules();
        check_bounds_and_witness();
        return std::move(_out);
    }

private:
    void error(std::string message, SourceSpan span)
    {
        _out.push_back(Diagnostic{Severity::Error, std::move(message), span});
    }

    void warning(std::string message, SourceSpan span)
    {
        _out.push_back(Diagnostic{Severity::Warning, std::move(message), span});
    }

    void check_states()
    {
        if (_ast.states.empty())
            error("no state declared", _ast.span);
        std::set<std::string> seen;
        for (const auto& s : _ast.states) {
            if (!seen.insert(s.name).second)
                error("state '" + s.name + "' declared twice", s.span);
            for (const auto& d : validate_structure(_ast.vocabulary, s.structure))
                error("state '" + s.name + "': " + d.message, s.span);
        }
        if (_ast.initial.empty())
            error("no initial state", _ast.span);
        std::set<std::string> initial;
        for (const auto& ref : _ast.initial) {
            if (_ast.find_state(ref.name) == nullptr)
                error("initial state '" + ref.name + "' is not declared", ref.span);
            if (!initial.insert(ref.name).second)
                warning("initial state '" + ref.name + "' listed twice", ref.span);
        }
    }

    void check_term(const Term& t, SourceSpan span, bool witness)
    {
        if (t.is_var()) {
            if (!witness && _ast.find_query(t.name) == nullptr)
                error("reply of undeclared query template '" + t.name + "'", span);
            return;
        }
        const auto* symbol = _ast.vocabulary.find(t.name);
        if (symbol == nullptr) {
            error("undeclared symbol '" + t.name + "'", span);
        } else if (symbol->arity != t.args.size()) {
            error("symbol '" + t.name + "' has arity " + std::to_string(symbol->arity) + ", given " +
                      std::to_string(t.args.size()),
                  span);
        }
        for (const auto& a : t.args)
            check_term(a, span, witness);
    }

    void check_templates()
    {
        std::set<std::string> seen;
        std::set<std::string> used_labels;
        for (const auto& q : _ast.queries) {
            if (!seen.insert(q.name).second)
                error("query template '" + q.name + "' declared twice", q.span);
            if (q.components.empty())
                error("query template '" + q.name + "' has no components", q.span);
            for (const auto& c : q.components) {
                if (const auto* l = std::get_if<Label>(&c)) {
                    used_labels.insert(l->name);
                    if (!_ast.label_set().contains(l->name))
                        error("undeclared label '" + l->name + "'", q.span);
                } else {
                    check_term(std::get<Term>(c), q.span, false);
                }
            }
        }
        for (const auto& l : _ast.labels) {
            if (_ast.vocabulary.contains(l.name))
                error("label '" + l.name + "' clashes with a symbol name", l.span);
            if (!used_labels.contains(l.name))
                warning("label '" + l.name + "' is never used", l.span);
        }
        check_template_cycles();
    }

    // A template whose terms read reply(P) depends on P.
    void check_template_cycles()
    {
        std::map<std::string, std::set<std::string>> deps;
        for (const auto& q : _ast.queries)
            for (const auto& c : q.components)
                if (const auto* t = std::get_if<Term>(&c))
                    for (const auto& v : t->variables())
                        deps[q.name].insert(v);

        enum class Mark { None, Active, Done };
        std::map<std::string, Mark> mark;
        std::set<std::string> reported;
        std::function<bool(const std::string&)> visit = [&](const std::string& n) {
            auto& m = mark[n];
            if (m == Mark::Active)
                return true;
            if (m == Mark::Done)
                return false;
            m = Mark::Active;
            bool cycle = false;
            for (const auto& d : deps[n])
                cycle = visit(d) || cycle;
            mark[n] = Mark::Done;
            return cycle;
        };
        for (const auto& q : _ast.queries) {
            mark.clear();
            if (visit(q.name) && reported.insert(q.name).second)
                error("query template '" + q.name + "' depends on its own reply", q.span);
        }
    }

    void check_guard(const Guard& g)
    {
        for (const auto& q : g.queries)
            if (_ast.find_query(q) == nullptr)
                error("guard mentions undeclared query template '" + q + "'", g.span);
        for (const auto& t : g.terms)
            check_term(t, g.span, false);
        for (const auto& o : g.operands)
            check_guard(o);
    }

    void check_rules()
    {
        std::set<std::string> names;
        auto check_name = [&](const std::string& n, SourceSpan span) {
            if (!names.insert(n).second)
                error("rule '" + n + "' declared twice", span);
        };
        for (const auto& r : _ast.issue_rules) {
            check_name(r.name, r.span);
            check_guard(r.guard);
            if (_ast.find_query(r.query) == nullptr)
                error("issue rule '" + r.name + "' emits undeclared template '" + r.query + "'", r.span);
        }
        for (const auto& r : _ast.final_rules) {
            check_name(r.name, r.span);
            check_guard(r.guard);
        }
        for (const auto& r : _ast.update_rules) {
            check_name(r.name, r.span);
            check_guard(r.guard);
            const auto* symbol = _ast.vocabulary.find(r.symbol);
            if (symbol == nullptr) {
                error("update rule '" + r.name + "' targets undeclared symbol '" + r.symbol + "'", r.span);
            } else {
                if (symbol->is_static)
                    error("update rule '" + r.name + "' targets static symbol '" + r.symbol + "'", r.span);
                if (symbol->arity != r.args.size())
                    error("update rule '" + r.name + "' gives " + std::to_string(r.args.size()) +
                              " arguments to '" + r.symbol + "'/" + std::to_string(symbol->arity),
                          r.span);
            }
            for (const auto& a : r.args)
                check_term(a, r.span, false);
            check_term(r.value, r.span, false);
        }
        if (_ast.strict && _ast.final_rules.empty())
            warning("strict algorithm without final rules never terminates", _ast.span);
    }

    void check_bounds_and_witness()
    {
        if (_ast.bounds.max_query_len == 0)
            error("query length bound must be positive", _ast.bounds.span);
        if (_ast.bounds.max_issued == 0)
            error("issued bound must be positive", _ast.bounds.span);
        for (const auto& w : _ast.witness)
            check_term(w.term, w.span, true);
    }

    const SpecAst& _ast;
    std::vector<Diagnostic> _out;
};

} // namespace

std::vector<Diagnostic> validate_spec(const SpecAst& ast)
{
    return Validator(ast).run();
}

} // namespace isa
