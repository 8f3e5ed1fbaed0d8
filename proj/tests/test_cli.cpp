#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "isa/cli.hpp"
#include "isa/structure_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace isa;
using namespace isa::test;

namespace {

struct Result
{
    int code;
    std::string out;
    std::string err;
};

Result isa_cli(std::vector<std::string> args, const std::string& input = "")
{
    std::istringstream in(input);
    std::ostringstream out, err;
    int code = cli::dispatch(args, in, out, err);
    return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& part)
{
    return text.find(part) != std::string::npos;
}

std::string temp_file(const std::string& name, const std::string& content)
{
    std::string path = std::string(ISA_TMP_DIR) + "/" + name;
    std::ofstream(path) << content;
    return path;
}

const std::string broker = fixture("broker.isa");

} // namespace

TEST_CASE("validate")
{
    auto r = isa_cli({"validate", broker});
    CHECK(r.code == 0);
    CHECK(r.out == "valid: algorithm broker\n");

    auto m = isa_cli({"--format", "machine", "validate", broker});
    CHECK(m.out == "valid=true\ndiagnostics=0\n");

    auto path = temp_file("invalid_tmp.isa", "algorithm a\nlabels { x y }\nquery q = (x)\nbounds { query_length 0 issued 1 }\n");
    auto bad = isa_cli({"validate", path});
    CHECK(bad.code == 1);
    CHECK(contains(bad.out, "warning: label 'y' is never used"));
    CHECK(contains(bad.out, "invalid"));
    std::remove(path.c_str());
}

TEST_CASE("parse errors exit 4 with a location")
{
    auto path = temp_file("broken_tmp.isa", "algorithm a\nlabels { x }\nquery q = (x\n");
    auto r = isa_cli({"step", path});
    CHECK(r.code == 4);
    CHECK(contains(r.err, "error: " + path + ":4:"));
    std::remove(path.c_str());
}

TEST_CASE("usage errors exit 4")
{
    CHECK(isa_cli({}).code == 4);
    CHECK(isa_cli({"frobnicate"}).code == 4);
    CHECK(isa_cli({"step", fixture("missing.isa")}).code == 4);
    auto r = isa_cli({"step", broker, "--state", "Nope"});
    CHECK(r.code == 4);
    CHECK(contains(r.err, "unknown state 'Nope'"));
    CHECK(isa_cli({"enumerate", broker, "--pool", "nowhere"}).code == 4);
    CHECK(isa_cli({"--format", "xml", "validate", broker}).code == 4);
    CHECK(isa_cli({"--help"}).code == 0);
}

TEST_CASE("step outcomes map to exit codes")
{
    auto ok = isa_cli({"step", broker, "--script", fixture("yes0.env")});
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "updates: { owner() := client0 }"));
    CHECK(contains(ok.out, "outcome: success"));

    auto tie = isa_cli({"step", broker, "--script", fixture("tie.env")});
    CHECK(tie.code == 0);
    CHECK(contains(tie.out, "owner() := client1"));

    auto hang = isa_cli({"step", broker, "--script", fixture("no1.env")});
    CHECK(hang.code == 2);
    CHECK(contains(hang.out, "pending: { (offer0) ; (timeout) }"));

    auto m = isa_cli({"--format", "machine", "step", broker, "--script", fixture("timeout.env")});
    CHECK(m.code == 0);
    CHECK(m.out.rfind("outcome=success\n", 0) == 0);
    CHECK(contains(m.out, "history={ (timeout) -> t @0 }"));
}

TEST_CASE("step from a structure file")
{
    auto spec = load_fixture("broker.isa");
    Structure x = state_of(spec, "X0");
    x.assign("owner", {}, E("client1"));
    auto path = temp_file("state_tmp.struct", print_structure(x));
    auto r = isa_cli({"step", broker, "--state-file", path, "--script", fixture("bothno.env")});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "interp owner () = client1"));
    std::remove(path.c_str());
}

TEST_CASE("run and repl")
{
    auto r = isa_cli({"run", broker, "--script", fixture("yes0.env"), "--steps", "4", "--fixpoint"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "steps: 2"));

    auto repl = isa_cli({"repl", broker}, "answer (offer1) = yes\ngo\n");
    CHECK(repl.code == 0);
    CHECK(contains(repl.out, "owner() := client1"));

    auto stalled = isa_cli({"repl", broker}, "");
    CHECK(stalled.code == 2);
}

TEST_CASE("enumerate matches the oracle count")
{
    auto spec = load_fixture("broker.isa");
    auto pool = elements({"yes", "no", "t"});
    auto oracle = oracle_attainable_set(spec, state_of(spec, "X0"), broker_universe(), pool, 2);
    auto r = isa_cli({"--format=machine", "enumerate", broker, "--pool", "yes,no,t", "--max-phases", "2"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "count=" + std::to_string(oracle.size()) + "\n"));
    std::size_t listed = 0;
    for (std::size_t pos = 0; (pos = r.out.find("history=", pos)) != std::string::npos; ++pos)
        ++listed;
    CHECK(listed == oracle.size());
}

TEST_CASE("check and equiv")
{
    auto ok = isa_cli({"check", broker, "--pool", "yes,no,client0,client1,t"});
    CHECK(ok.code == 0);
    CHECK(contains(ok.out, "result: conforms"));

    auto sym = isa_cli({"check", fixture("broker_sym.isa"), "--pool", "yes,no,client0,client1,t", "--iso",
                        fixture("swap.iso")});
    CHECK(sym.code == 0);

    auto same = isa_cli({"equiv", broker, broker, "--pool", "yes,no,client0,client1,t"});
    CHECK(same.code == 0);
    CHECK(same.out.rfind("equivalent\n", 0) == 0);

    auto differ = isa_cli({"equiv", broker, fixture("broker_preferred.isa"), "--pool", "yes,no,client0,client1,t"});
    CHECK(differ.code == 1);
    CHECK(contains(differ.out, "in state X0 at { (offer0) -> yes @0 ; (offer1) -> yes @0 }"));

    auto weak = isa_cli({"equiv", "--weak", broker, fixture("broker_preferred.isa"), "--pool", "yes,no,client0,client1,t"});
    CHECK(weak.code == 1);
}

TEST_CASE("output is deterministic")
{
    const std::vector<std::vector<std::string>> commands{
        {"enumerate", broker, "--pool", "yes,no,client0,client1,t", "--jobs", "3"},
        {"check", broker, "--pool", "yes,no,t"},
        {"equiv", broker, fixture("broker_preferred.isa"), "--pool", "yes,no,client0,client1,t"},
        {"step", broker, "--script", fixture("tie.env")},
    };
    for (const auto& c : commands) {
        auto a = isa_cli(c), b = isa_cli(c);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}
