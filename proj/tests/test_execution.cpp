#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include <sstream>

using namespace isa;
using namespace isa::test;

namespace {

struct Broker
{
    AlgorithmSpec spec = load_fixture("broker.isa");
    const Structure& x = state_of(spec, "X0");

    StepTrace run_script(const std::string& text, std::size_t max_phases = 16)
    {
        ScriptedEnvironment env(parse_script(text));
        return step(spec, x, env, max_phases);
    }
};

const Location owner{"owner", {}};

/// Folds the recorded batches back into a history.
History replay_phases(const StepTrace& t)
{
    History xi;
    for (const auto& p : t.phases)
        xi = append_class(xi, p.batch);
    return xi;
}

/// Script reproducing the batches of a trace, then stalling if it hung.
Script script_of(const StepTrace& t)
{
    Script s;
    for (const auto& p : t.phases)
        s.emplace_back(p.batch);
    if (t.outcome == Outcome::Hang)
        s.emplace_back(std::nullopt);
    return s;
}

} // namespace

TEST_CASE_FIXTURE(Broker, "first positive reply wins")
{
    auto t = run_script("phase { (offer0) -> yes }");
    CHECK(t.outcome == Outcome::Success);
    CHECK(t.phases.size() == 1);
    CHECK(t.delta == UpdateSet{Update{owner, E("client0")}});
    REQUIRE(t.next);
    CHECK(t.next->value(owner) == E("client0"));
    CHECK(t.phases[0].issued == causes(spec, x, History{}));
}

TEST_CASE_FIXTURE(Broker, "a tie is settled by the chosen client")
{
    auto t = run_script("phase { (offer0) -> yes ; (offer1) -> yes }\nphase { (choose) -> client1 }");
    CHECK(t.outcome == Outcome::Success);
    CHECK(t.phases.size() == 2);
    CHECK(t.delta == UpdateSet{Update{owner, E("client1")}});
    CHECK(t.phases[1].issued.contains(Q("choose")));
}

TEST_CASE_FIXTURE(Broker, "one negative reply then a stall hangs")
{
    auto t = run_script("phase { (offer1) -> no }\nstall");
    CHECK(t.outcome == Outcome::Hang);
    CHECK(t.pending == QuerySet{Q("offer0"), Q("timeout")});
    CHECK_FALSE(t.next);

    // An exhausted script stalls too.
    auto u = run_script("phase { (offer1) -> no }");
    CHECK(u.outcome == Outcome::Hang);
    CHECK(u == t);
}

TEST_CASE_FIXTURE(Broker, "the executor stops at the first final prefix")
{
    auto t = run_script("phase { (offer0) -> yes }\nphase { (offer1) -> yes }");
    CHECK(t.phases.size() == 1);
    CHECK(t.delta == UpdateSet{Update{owner, E("client0")}});
}

TEST_CASE_FIXTURE(Broker, "a bad choice fails")
{
    auto t = run_script("phase { (offer0) -> yes ; (offer1) -> yes }\nphase { (choose) -> no }");
    CHECK(t.outcome == Outcome::Fail);
    CHECK(t.detail == "rule badchoice");
    CHECK(t.delta.empty());
    CHECK_FALSE(t.next);
    CHECK(exit_code(t.outcome) == 1);
}

TEST_CASE_FIXTURE(Broker, "phase bound")
{
    auto t = run_script("phase { (offer0) -> no }\nphase { (offer1) -> client0 }", 1);
    CHECK(t.outcome == Outcome::Hang);
    CHECK(t.final_history.length() == 1);
    CHECK(t.detail == "phase bound 1 reached");
}

TEST_CASE_FIXTURE(Broker, "environment protocol violations")
{
    CHECK_THROWS_AS(run_script("phase { (choose) -> client0 }"), EnvironmentProtocolError);
    CHECK_THROWS_AS(run_script("phase { (offer0) -> nowhere }"), EnvironmentProtocolError);

    struct Empty : Environment
    {
        Batch next_batch(const Structure&, const History&, const QuerySet&) override { return AnswerFunction{}; }
    } empty;
    CHECK_THROWS_AS(step(spec, x, empty, 4), EnvironmentProtocolError);
}

TEST_CASE("a complete non-final history is a conformance error")
{
    auto spec = load_fixture("broker.isa");
    spec.strict = true;
    spec.final_rules.clear();
    const auto& x = state_of(spec, "X0");
    ScriptedEnvironment env(parse_script("phase { (offer0) -> yes ; (offer1) -> no ; (timeout) -> t }"));
    auto t = step(spec, x, env, 8);
    CHECK(t.outcome == Outcome::ConformanceError);
    CHECK(exit_code(t.outcome) == 3);
}

TEST_CASE_FIXTURE(Broker, "traces are attainable, final and reproducible")
{
    std::mt19937 rng(11);
    const auto pool = broker_pool();
    for (int n = 0; n < 200; ++n) {
        // Random environment answering random subsets of the pending queries.
        struct RandomEnv : Environment
        {
            std::mt19937& rng;
            std::vector<Element> pool;
            RandomEnv(std::mt19937& r, std::vector<Element> p) : rng(r), pool(std::move(p)) {}
            Batch next_batch(const Structure&, const History&, const QuerySet& open) override
            {
                if (coin(rng, 0.05))
                    return Stall{};
                AnswerFunction b;
                for (const auto& q : open)
                    if (coin(rng))
                        b.emplace(q, pick(pool, rng));
                if (b.empty())
                    b.emplace(*open.begin(), pick(pool, rng));
                return b;
            }
        } env(rng, pool);
        auto t = step(spec, x, env, 8);
        CHECK(replay_phases(t) == t.final_history);
        CHECK(is_attainable(spec, x, t.final_history));
        if (t.outcome == Outcome::Success || t.outcome == Outcome::Fail)
            CHECK(verdict(spec, x, t.final_history).is_final());
        if (t.outcome == Outcome::Success) {
            CHECK(*t.next == apply_updates(x, t.delta));
            CHECK(t.phases.front().issued == causes(spec, x, History{}));
        }
        for (std::size_t j = 0; j < t.phases.size(); ++j)
            for (const auto& [q, r] : t.phases[j].batch)
                CHECK(issued(spec, x, t.final_history.prefix(j)).contains(q));

        ScriptedEnvironment again(script_of(t));
        CHECK(step(spec, x, again, 8) == t);
    }
}

TEST_CASE("scripts round-trip")
{
    const std::string text = "phase { (offer0) -> yes ; (offer1) -> yes }\nstall\nphase { (offer, #client0) -> no }\n";
    auto s = parse_script(text);
    REQUIRE(s.size() == 3);
    CHECK_FALSE(s[1].has_value());
    CHECK(print_script(s) == text);
    CHECK(parse_script(print_script(s)) == s);
    CHECK(parse_script("# nothing\n").empty());
    CHECK_THROWS_AS(parse_script("phase { }"), SyntaxError);
    CHECK_THROWS_AS(parse_script("phase (offer0) -> yes"), SyntaxError);
    CHECK_THROWS_AS(parse_script("go"), SyntaxError);
}

TEST_CASE_FIXTURE(Broker, "interactive environment")
{
    SUBCASE("one answer matches the scripted trace")
    {
        std::istringstream in("answer (offer0) = yes\ngo\n");
        std::ostringstream out;
        InteractiveEnvironment env(in, out);
        auto t = step(spec, x, env, 8);
        CHECK(t == run_script("phase { (offer0) -> yes }"));
        CHECK(out.str().find("pending { (offer0) ; (offer1) ; (timeout) }") != std::string::npos);
    }
    SUBCASE("immediate stall hangs")
    {
        std::istringstream in("stall\n");
        std::ostringstream out;
        InteractiveEnvironment env(in, out);
        CHECK(step(spec, x, env, 8).outcome == Outcome::Hang);
    }
    SUBCASE("two answers form one batch")
    {
        std::istringstream in("answer (offer0) = yes\nanswer (offer1) = yes\ngo\nanswer (choose) = client0\ngo\n");
        std::ostringstream out;
        InteractiveEnvironment env(in, out);
        auto t = step(spec, x, env, 8);
        CHECK(t.phases[0].batch.size() == 2);
        CHECK(t.delta == UpdateSet{Update{owner, E("client0")}});
    }
    SUBCASE("bad input is rejected and the prompt repeats")
    {
        std::istringstream in("answer (choose) = client0\nanswer (offer0) = nowhere\ngo\nanswer (offer0 = yes\n"
                              "frobnicate\nanswer (offer0) = yes\ngo\n");
        std::ostringstream out;
        InteractiveEnvironment env(in, out);
        auto t = step(spec, x, env, 8);
        CHECK(t.outcome == Outcome::Success);
        CHECK(out.str().find("(choose) is not pending") != std::string::npos);
        CHECK(out.str().find("'nowhere' is not in the base set") != std::string::npos);
        CHECK(out.str().find("no answers yet") != std::string::npos);
    }
    SUBCASE("end of input stalls")
    {
        std::istringstream in("answer (offer0) = no\n");
        std::ostringstream out;
        InteractiveEnvironment env(in, out);
        CHECK(step(spec, x, env, 8).outcome == Outcome::Hang);
    }
}

TEST_CASE_FIXTURE(Broker, "runs")
{
    auto factory = [] { return std::make_unique<ScriptedEnvironment>(parse_script("phase { (offer0) -> yes }")); };
    CHECK(run(spec, x, factory, 0, 8).empty());

    auto steps = run(spec, x, factory, 3, 8);
    REQUIRE(steps.size() == 3);
    CHECK(steps[0].state == x);
    CHECK(steps[1].state.value(owner) == E("client0"));
    for (const auto& s : steps)
        CHECK(s.trace.outcome == Outcome::Success);

    // The second step changes nothing.
    auto fix = run(spec, x, factory, 5, 8, true);
    CHECK(fix.size() == 2);

    auto failing = [] {
        return std::make_unique<ScriptedEnvironment>(
            parse_script("phase { (offer0) -> yes ; (offer1) -> yes }\nphase { (choose) -> t }"));
    };
    auto failed = run(spec, x, failing, 4, 8);
    REQUIRE(failed.size() == 1);
    CHECK(failed[0].trace.outcome == Outcome::Fail);
}

TEST_CASE_FIXTURE(Broker, "trace text")
{
    auto t = run_script("phase { (offer0) -> yes }");
    auto text = format_trace(t);
    CHECK(text.find("phase 0: issued { (offer0) ; (offer1) ; (timeout) } batch { (offer0) -> yes }\n") == 0);
    CHECK(text.find("updates: { owner() := client0 }") != std::string::npos);
    CHECK(text.find("interp owner () = client0") != std::string::npos);
    auto machine = format_trace_machine(t);
    CHECK(machine.find("outcome=success\n") == 0);
    CHECK(format_trace(run_script("stall")).find("pending: { (offer0) ; (offer1) ; (timeout) }") !=
          std::string::npos);
}
