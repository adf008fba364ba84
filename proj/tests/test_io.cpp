#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "pfsa/modelio.hpp"

using namespace pfsa;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

bool same_pfsa(const Pfsa& a, const Pfsa& b) {
    return a.states == b.states && a.events == b.events && a.delta == b.delta &&
           a.pi == b.pi && a.chi == b.chi && a.controllable == b.controllable &&
           a.unobservable == b.unobservable;
}

}  // namespace

TEST_CASE("parse -> serialize -> parse round-trips every fixture") {
    for (const char* name :
         {"mission.model", "tiger.model", "model1.model", "model2.model",
          "fourstate.model"}) {
        const Pfsa g = testutil::load_fixture(name);
        const Pfsa h = parse_model(serialize_model(g));
        CHECK_MESSAGE(same_pfsa(g, h), name);
    }
}

TEST_CASE("declaration order is preserved, not sorted") {
    const std::string doc = R"({
      "states": ["z", "a"], "events": ["y", "b"],
      "transitions": [
        {"from": "z", "event": "y", "to": "a", "prob": 1.0},
        {"from": "a", "event": "b", "to": "z", "prob": 1.0}
      ],
      "chi": {"z": 0.5}
    })";
    const Pfsa g = parse_model(doc);
    CHECK(g.states == std::vector<std::string>{"z", "a"});
    CHECK(g.events == std::vector<std::string>{"y", "b"});
    CHECK(g.chi[0] == 0.5);
    CHECK(g.chi[1] == 0.0);  // chi defaults to zero when omitted
}

TEST_CASE("structural rejections") {
    SUBCASE("unknown top-level key") {
        CHECK_THROWS_AS(parse_model(R"({"states":[],"events":[],"transitions":[],"chi":{},"bogus":1})"),
                        ParseError);
    }
    SUBCASE("duplicate (from,event) transition") {
        const std::string doc = R"({
          "states": ["a"], "events": ["x"],
          "transitions": [
            {"from": "a", "event": "x", "to": "a", "prob": 0.5},
            {"from": "a", "event": "x", "to": "a", "prob": 0.5}
          ],
          "chi": {}
        })";
        CHECK_THROWS_WITH_AS(parse_model(doc), "duplicate transition (a,x)", ParseError);
    }
    SUBCASE("duplicate state name") {
        CHECK_THROWS_AS(parse_model(R"({"states":["a","a"],"events":[],"transitions":[],"chi":{}})"),
                        ParseError);
    }
    SUBCASE("missing required key") {
        CHECK_THROWS_AS(parse_model(R"({"states":[],"events":[],"chi":{}})"), ParseError);
    }
    SUBCASE("unknown state in chi") {
        CHECK_THROWS_AS(parse_model(R"({"states":["a"],"events":[],"transitions":[],"chi":{"b":0}})"),
                        ParseError);
    }
    SUBCASE("unknown transition endpoint") {
        const std::string doc = R"({
          "states": ["a"], "events": ["x"],
          "transitions": [{"from": "a", "event": "x", "to": "q", "prob": 1.0}],
          "chi": {}
        })";
        CHECK_THROWS_AS(parse_model(doc), ParseError);
    }
    SUBCASE("extra key inside a transition") {
        const std::string doc = R"({
          "states": ["a"], "events": ["x"],
          "transitions": [{"from": "a", "event": "x", "to": "a", "prob": 1.0, "note": "hi"}],
          "chi": {}
        })";
        CHECK_THROWS_AS(parse_model(doc), ParseError);
    }
    SUBCASE("malformed pair list") {
        const std::string doc = R"({
          "states": ["a"], "events": ["x"],
          "transitions": [{"from": "a", "event": "x", "to": "a", "prob": 1.0}],
          "chi": {}, "controllable": [["a"]]
        })";
        CHECK_THROWS_AS(parse_model(doc), ParseError);
    }
}

TEST_CASE("syntax errors carry line and column") {
    try {
        parse_model("{\n  \"states\": [\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
    }
}

TEST_CASE("load_model reports unreadable paths") {
    CHECK_THROWS_AS(load_model("/nonexistent/nowhere.model"), ParseError);
}

TEST_CASE("cli validate exit codes") {
    CHECK(run_cli("validate " + testutil::fixture("mission.model") + " > /dev/null") == 0);

    const std::string bad = "cli_rowsum.model";
    {
        Pfsa g = testutil::load_fixture("mission.model");
        g.pi[0][0] += 0.1;  // break the G row sum
        std::ofstream(bad) << serialize_model(g);
    }
    CHECK(run_cli("validate " + bad + " > /dev/null") == 1);

    std::ofstream("cli_broken.model") << "{ not json";
    CHECK(run_cli("validate cli_broken.model 2> /dev/null") == 2);
}

TEST_CASE("cli synthesize reports the policy") {
    CHECK(run_cli("synthesize " + testutil::fixture("mission.model") +
                  " > cli_syn.txt") == 0);
    const std::string out = slurp("cli_syn.txt");
    CHECK(out.find("(M,r)") != std::string::npos);
    CHECK(out.find("(E,t)") != std::string::npos);
    CHECK(out.find("theta_min = 0.005466584") != std::string::npos);
    CHECK(out.find("-0.080160") != std::string::npos);

    CHECK(run_cli("synthesize " + testutil::fixture("mission.model") +
                  " --format csv > cli_syn.csv") == 0);
    CHECK(slurp("cli_syn.csv").find("state,nu_star") == 0);
}

TEST_CASE("cli simulate is deterministic and honors --steps 0") {
    const std::string base = "simulate " + testutil::fixture("mission.model") +
                             " --policy perfect --steps 200 --runs 2 --seed 11";
    CHECK(run_cli(base + " --out cli_a.csv > /dev/null") == 0);
    CHECK(run_cli(base + " --out cli_b.csv > /dev/null") == 0);
    CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
    CHECK(slurp("cli_a.csv").find(
              "tick,run,true_state,observed,chi_hat,nu_hat,int_chi,int_nu,n_entangled") == 0);

    CHECK(run_cli("simulate " + testutil::fixture("mission.model") +
                  " --steps 0 --out cli_empty.csv > /dev/null") == 0);
    CHECK(slurp("cli_empty.csv") ==
          "tick,run,true_state,observed,chi_hat,nu_hat,int_chi,int_nu,n_entangled\n");
}

TEST_CASE("cli simulate --policy all emits one summary per strategy") {
    CHECK(run_cli("simulate " + testutil::fixture("mission.model") +
                  " --policy all --steps 100 --seed 1 > cli_all.txt") == 0);
    const std::string out = slurp("cli_all.txt");
    for (const char* name : {"null,", "perfect,", "partial,", "perfect_blind,"})
        CHECK_MESSAGE(out.find(name) != std::string::npos, name);
}

TEST_CASE("cli entangled counts pure states on an observable model") {
    Pfsa g = testutil::load_fixture("fourstate.model");
    g.unobservable.clear();
    std::ofstream("cli_observable.model") << serialize_model(g);
    CHECK(run_cli("entangled cli_observable.model --theta 0.1 > cli_ent.txt") == 0);
    const std::string out = slurp("cli_ent.txt");
    CHECK(out.find("count = 4") != std::string::npos);
    CHECK(out.find("saturated = no") != std::string::npos);
}
