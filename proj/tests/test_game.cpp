/*
 * Copyright 2026 The wmpg authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "wmpg/game.hpp"
#include "wmpg/io.hpp"
#include "wmpg/strategy.hpp"

using namespace wmpg;

TEST_CASE("parse_game reads the 14-vertex fixture") {
    StochasticGame g = fixtures::classes14();
    REQUIRE(g.size() == 14);
    CHECK(g.owner(fixtures::vx(g, "v1")) == Owner::Min);
    CHECK(g.owner(fixtures::vx(g, "v3")) == Owner::Max);
    CHECK(g.owner(fixtures::vx(g, "v2")) == Owner::Random);
    CHECK(g.prob(fixtures::vx(g, "v2"), fixtures::vx(g, "v1")) == Rat(1, 2));
    CHECK(g.payoff(fixtures::vx(g, "v1"), fixtures::vx(g, "v1")) == Rat(-2));
}

TEST_CASE("single max vertex with a self-loop is a valid game") {
    StochasticGame g = parse_game("game tiny\nvertex a max\nedge a a payoff 0\n");
    REQUIRE(g.size() == 1);
    CHECK(g.owner(0) == Owner::Max);
}

TEST_CASE("distribution sum violations are reported with the sum") {
    std::string text =
        "game bad\nvertex a rand\nvertex b min\n"
        "edge a b payoff 0 prob 1/2\nedge a a payoff 0 prob 1/3\nedge b b payoff 0\n";
    try {
        parse_game(text);
        FAIL("expected validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("5/6") != std::string::npos);
    }
}

TEST_CASE("probability on a non-random vertex is rejected") {
    std::string text = "game bad\nvertex a max\nedge a a payoff 0 prob 1\n";
    CHECK_THROWS_AS(parse_game(text), validation_error);
}

TEST_CASE("syntax errors carry line information") {
    try {
        parse_game("game x\nvertex a max\nedge a a payoff zzz\n");
        FAIL("expected parse error");
    } catch (const parse_error& e) {
        CHECK(e.line == 3);
    }
}

TEST_CASE("deadlock vertices are named") {
    try {
        parse_game("game x\nvertex a max\nvertex b min\nedge a b payoff 0\nedge b b payoff 0\n");
        SUCCEED();
    } catch (...) {
        FAIL("valid game rejected");
    }
    try {
        parse_game("game x\nvertex a max\nvertex b min\nedge a b payoff 0\n");
        FAIL("expected deadlock error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
}

TEST_CASE("serialize then parse is the identity on fixtures and random games") {
    for (auto make : {+[] { return fixtures::classes14(); }, +[] { return fixtures::mec3(); }}) {
        StochasticGame g = make();
        StochasticGame h = parse_game(serialize_game(g));
        CHECK(serialize_game(h) == serialize_game(g));
    }
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        StochasticGame g = fixtures::random_game(seed, 1 + static_cast<int>(seed % 6));
        StochasticGame h = parse_game(serialize_game(g));
        CHECK(serialize_game(h) == serialize_game(g));
    }
}

TEST_CASE("restrict to a single absorbing vertex") {
    StochasticGame g = fixtures::classes14();
    StochasticGame h = restrict_game(g, fixtures::vxs(g, {"v6"}));
    REQUIRE(h.size() == 1);
    CHECK(h.payoff(0, 0) == Rat(0));
}

TEST_CASE("restrict to all vertices reproduces the game") {
    StochasticGame g = fixtures::classes14();
    std::vector<int> all;
    for (int v = 0; v < g.size(); ++v) all.push_back(v);
    CHECK(serialize_game(restrict_game(g, all)) == serialize_game(g));
}

TEST_CASE("restriction rejects dropped random successors") {
    StochasticGame g = fixtures::classes14();
    CHECK_THROWS_AS(restrict_game(g, fixtures::vxs(g, {"v1", "v2"})), validation_error);
}

TEST_CASE("class restriction turns boundary vertices absorbing") {
    StochasticGame g = fixtures::classes14();
    StochasticGame h = class_restriction(g, fixtures::vxs(g, {"v2", "v3", "v4", "v5"}));
    REQUIRE(h.size() == 4);
    int v2 = h.index_of("v2"), v5 = h.index_of("v5");
    REQUIRE(v2 >= 0);
    REQUIRE(v5 >= 0);
    CHECK(h.successors(v2) == std::vector<int>{v2});
    CHECK(h.payoff(v2, v2) == Rat(0));
    CHECK(h.successors(v5) == std::vector<int>{v5});
    // Non-random vertices keep only in-class successors.
    int v3 = h.index_of("v3");
    CHECK(h.successors(v3).size() == 3);
}

TEST_CASE("class restriction of a singleton class keeps the self-loop payoff") {
    StochasticGame g = fixtures::classes14();
    StochasticGame h = class_restriction(g, fixtures::vxs(g, {"v1"}));
    REQUIRE(h.size() == 1);
    CHECK(h.payoff(0, 0) == Rat(-2));  // v1 is not a boundary vertex
}

TEST_CASE("class restriction without boundary is the plain restriction") {
    StochasticGame g = fixtures::classes14();
    StochasticGame a = class_restriction(g, fixtures::vxs(g, {"v10", "v11"}));
    StochasticGame b = restrict_game(g, fixtures::vxs(g, {"v10", "v11"}));
    CHECK(serialize_game(a) == serialize_game(b));
}

TEST_CASE("class restriction reports deadlocks") {
    // One Max vertex whose only successor leaves the candidate class.
    StochasticGame g = parse_game(
        "game x\nvertex a max\nvertex b min\nedge a b payoff 0\nedge b b payoff 0\n");
    CHECK_THROWS_AS(class_restriction(g, {fixtures::vx(g, "a")}), validation_error);
}

TEST_CASE("class restriction keeps distributions summing to one") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        StochasticGame g = fixtures::random_game(seed, 2 + static_cast<int>(seed % 5));
        // Random split of vertices as a mock class; skip structurally bad ones.
        std::vector<int> cls;
        for (int v = 0; v < g.size(); ++v)
            if ((seed + static_cast<std::uint64_t>(v)) % 2 == 0) cls.push_back(v);
        if (cls.empty()) continue;
        try {
            StochasticGame h = class_restriction(g, cls);
            h.finalize();  // re-runs the distribution checks
        } catch (const validation_error&) {
            // fine: the mock class deadlocks
        }
    }
}

TEST_CASE("run_strategy: memoryless, counting, and skip behavior") {
    StochasticGame g = fixtures::twocycle();
    int v1 = fixtures::vx(g, "v1"), v2 = fixtures::vx(g, "v2");

    StrategyMachine memoryless = StrategyMachine::memoryless(Owner::Min, {kSkip, v1});
    memoryless.check(g);
    CHECK(run_strategy(g, memoryless, {v1, v2}) == v1);
    CHECK(run_strategy(g, memoryless, {v1}) == kSkip);  // opponent-owned last vertex

    // Two-state cycle counter for Min: alternates staying and leaving.
    StrategyMachine counter = StrategyMachine::blank(Owner::Min, 2, 0, g.size());
    for (int q = 0; q < 2; ++q)
        for (int v = 0; v < g.size(); ++v) {
            counter.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = 1 - q;
            if (v == v2) counter.out[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = q == 0 ? v2 : v1;
        }
    counter.check(g);
    // Prefix length decides the memory state: delta-hat over the prefix.
    CHECK(run_strategy(g, counter, {v2}) == v2);
    CHECK(run_strategy(g, counter, {v1, v2}) == v1);
    CHECK(run_strategy(g, counter, {v2, v2, v2}) == v2);

    CHECK_THROWS_AS(run_strategy(g, counter, {v1, v1}), validation_error);
}

TEST_CASE("induce_chain cycles deterministically on the two-vertex fixture") {
    StochasticGame g = fixtures::twocycle();
    int v1 = fixtures::vx(g, "v1"), v2 = fixtures::vx(g, "v2");
    StrategyMachine mx = StrategyMachine::memoryless(Owner::Max, {v2, kSkip});
    StrategyMachine mn = StrategyMachine::memoryless(Owner::Min, {kSkip, v1});
    InducedChain c = induce_chain(g, mx, mn, v1);
    REQUIRE(c.size() == 2);
    CHECK(c.moves[0].size() == 1);
    CHECK(c.moves[0][0].payoff == Rat(-1));
    CHECK(c.moves[1][0].payoff == Rat(1));
}

TEST_CASE("induce_chain: absorbing start gives a one-state chain") {
    StochasticGame g = parse_game("game t\nvertex a max\nedge a a payoff 3\n");
    StrategyMachine mx = StrategyMachine::memoryless(Owner::Max, {0});
    StrategyMachine mn = StrategyMachine::memoryless(Owner::Min, {kSkip});
    InducedChain c = induce_chain(g, mx, mn, 0);
    CHECK(c.size() == 1);
}

TEST_CASE("induce_chain branches at random vertices") {
    StochasticGame g = fixtures::mec3();
    int v1 = fixtures::vx(g, "v1"), v2 = fixtures::vx(g, "v2"), v3 = fixtures::vx(g, "v3");
    StrategyMachine mx = StrategyMachine::memoryless(Owner::Max, {kSkip, kSkip, v2});
    StrategyMachine mn = StrategyMachine::memoryless(Owner::Min, {v2, kSkip, kSkip});
    InducedChain c = induce_chain(g, mx, mn, v1);
    REQUIRE(c.size() == 3);
    bool found = false;
    for (int s = 0; s < c.size(); ++s)
        if (c.states[static_cast<std::size_t>(s)].vertex == v2) {
            REQUIRE(c.moves[static_cast<std::size_t>(s)].size() == 2);
            CHECK(c.moves[static_cast<std::size_t>(s)][0].prob == Rat(1, 2));
            CHECK(c.moves[static_cast<std::size_t>(s)][1].prob == Rat(1, 2));
            found = true;
        }
    CHECK(found);
    CHECK(c.size() <= g.size() * 1 * 1);  // |V| * |Qmax| * |Qmin|
}

TEST_CASE("strategy machines serialize and parse back") {
    StochasticGame g = fixtures::twocycle();
    int v1 = fixtures::vx(g, "v1"), v2 = fixtures::vx(g, "v2");
    (void)v2;
    StrategyMachine mn = StrategyMachine::blank(Owner::Min, 2, 0, g.size());
    for (int q = 0; q < 2; ++q)
        for (int v = 0; v < g.size(); ++v) {
            mn.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = 1 - q;
            if (g.owner(v) == Owner::Min)
                mn.out[static_cast<std::size_t>(q)][static_cast<std::size_t>(v)] = q == 0 ? v1 : v;
        }
    mn.check(g);
    std::string text = serialize_machine(g, mn);
    std::istringstream is(text);
    auto parsed = parse_machines(g, is);
    REQUIRE(parsed.size() == 1);
    CHECK(serialize_machine(g, parsed[0]) == text);
}

TEST_CASE("certificates round-trip") {
    StochasticGame g = fixtures::classes14();
    auto vals = fixtures::classes14_values();
    std::istringstream is(serialize_certificate(g, vals));
    CHECK(parse_certificate(g, is) == vals);
}
