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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_file = std::string(WMPG_TMP_DIR) + "/cli_out.txt";
    std::string cmd = std::string(WMPG_CLI_PATH) + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    int code = -1;
    if (status >= 0) code = WEXITSTATUS(status);
    return {code, ss.str()};
}

std::string fixture(const std::string& name) { return std::string(WMPG_FIXTURE_DIR) + "/" + name; }

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = std::string(WMPG_TMP_DIR) + "/" + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("validate: accepted games exit 0, broken inputs exit 2") {
    CHECK(run("validate " + fixture("classes14.game")).exit_code == 0);

    std::string bad = write_temp("bad_sum.game",
                                 "game bad\nvertex a rand\nvertex b min\n"
                                 "edge a b payoff 0 prob 1/2\nedge a a payoff 0 prob 1/3\nedge b b payoff 0\n");
    RunResult r = run("validate " + bad);
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("5/6") != std::string::npos);

    std::string syn = write_temp("bad_syntax.game", "game x\nvertex a max\nedge a a payoff oops\n");
    CHECK(run("validate " + syn).exit_code == 2);
}

TEST_CASE("verify: acceptance exits 0, rejection 1, input trouble 2") {
    std::string game = fixture("classes14.game"), cert = fixture("classes14.cert");
    RunResult ok = run("verify " + game + " " + cert + " --objective fwmp --window 2");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("verdict: accepted") != std::string::npos);

    // Tight bound works too.
    CHECK(run("verify " + game + " " + cert + " --objective fwmp --window 2 --bound tight").exit_code == 0);

    std::string wrong = write_temp("wrong.cert",
                                   "value v1 -2\nvalue v2 -1\nvalue v3 -1\nvalue v4 -1\nvalue v5 -1\n"
                                   "value v6 0\nvalue v7 0\nvalue v8 0\nvalue v9 0\nvalue v10 2\n"
                                   "value v11 2\nvalue v12 2\nvalue v13 2\nvalue v14 2\n");
    RunResult rej = run("verify " + game + " " + wrong + " --objective fwmp --window 2");
    CHECK(rej.exit_code == 1);
    CHECK(rej.out.find("verdict: rejected") != std::string::npos);
    CHECK(rej.out.find("failing condition") != std::string::npos);

    CHECK(run("verify " + game + " missing.cert --objective fwmp --window 2").exit_code == 2);
}

TEST_CASE("solve prints values, provenance, and strategies") {
    RunResult r = run("solve " + fixture("mec3.game") + " --objective bwmp");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("value v1 -1") != std::string::npos);
    CHECK(r.out.find("value v2 0") != std::string::npos);
    CHECK(r.out.find("value v3 1") != std::string::npos);
    CHECK(r.out.find("provenance") != std::string::npos);
    CHECK(r.out.find("strategy max") != std::string::npos);

    RunResult f = run("solve " + fixture("twocycle.game") + " --objective fwmp --window 2");
    CHECK(f.exit_code == 0);
    CHECK(f.out.find("value v1 -1/2") != std::string::npos);
}

TEST_CASE("almost-sure reports winning sets and strategies") {
    RunResult r = run("almost-sure " + fixture("twocycle.game") +
                      " --objective bwmp --threshold 0 --player max");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("winning: v1 v2") != std::string::npos);

    RunResult s = run("almost-sure " + fixture("mec3.game") +
                      " --objective fwmp --window 2 --threshold 1 --player max");
    CHECK(s.exit_code == 0);
    CHECK(s.out.find("winning: v3") != std::string::npos);
}

TEST_CASE("eval-lasso prints exact rationals") {
    RunResult bw = run("eval-lasso " + fixture("twocycle.game") + " --lasso ';v1,v2' --objective bwmp");
    CHECK(bw.exit_code == 0);
    CHECK(bw.out == "0\n");
    RunResult fw = run("eval-lasso " + fixture("twocycle.game") + " --lasso ';v1,v2' --objective fwmp --window 1");
    CHECK(fw.out == "-1\n");
    CHECK(run("eval-lasso " + fixture("twocycle.game") + " --lasso ';v1,v1' --objective bwmp").exit_code == 2);
}

TEST_CASE("solve output feeds simulate") {
    std::string out_path = std::string(WMPG_TMP_DIR) + "/mec3_solved.txt";
    RunResult solved = run("solve " + fixture("mec3.game") + " --objective fwmp --window 2 -o " + out_path);
    REQUIRE(solved.exit_code == 0);
    // The machine-readable report parses as a profile (max + min blocks).
    RunResult sim = run("simulate " + fixture("mec3.game") + " --profile " + out_path +
                        " --objective fwmp --window 2 --episodes 2000 --seed 5 --start v2");
    CHECK(sim.exit_code == 0);
    CHECK(sim.out.find("estimate") != std::string::npos);
    RunResult sim2 = run("simulate " + fixture("mec3.game") + " --profile " + out_path +
                         " --objective fwmp --window 2 --episodes 2000 --seed 5 --start v2");
    CHECK(sim.out == sim2.out);  // deterministic given the seed
}

TEST_CASE("export-dot renders owners and optional class clusters") {
    RunResult plain = run("export-dot " + fixture("classes14.game"));
    CHECK(plain.exit_code == 0);
    CHECK(plain.out.find("shape=diamond") != std::string::npos);
    CHECK(plain.out.find("shape=box") != std::string::npos);
    CHECK(plain.out.find("shape=circle") != std::string::npos);
    RunResult clustered = run("export-dot " + fixture("classes14.game") + " --classes " + fixture("classes14.cert"));
    CHECK(clustered.exit_code == 0);
    CHECK(clustered.out.find("subgraph cluster_0") != std::string::npos);
    CHECK(clustered.out.find("label=\"value -2\"") != std::string::npos);
}

TEST_CASE("gen-ssg rewrites payoffs around an absorbing target") {
    std::string reach = write_temp("reach.game",
                                   "game reach\nvertex s max\nvertex t min\nvertex u min\n"
                                   "edge s t payoff 5\nedge s u payoff 3\nedge t t payoff 7\nedge u u payoff 1\n");
    RunResult r = run("gen-ssg " + reach + " --target t");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("edge t t payoff 1") != std::string::npos);
    CHECK(r.out.find("edge s t payoff 0") != std::string::npos);
    CHECK(r.out.find("edge u u payoff 0") != std::string::npos);
    // Non-absorbing target is an input error.
    CHECK(run("gen-ssg " + reach + " --target s").exit_code == 2);

    // Solving the generated instance yields reach probabilities as values.
    std::string gen = std::string(WMPG_TMP_DIR) + "/reach_fwmp.game";
    REQUIRE(run("gen-ssg " + reach + " --target t -o " + gen).exit_code == 0);
    RunResult solved = run("solve " + gen + " --objective fwmp --window 1");
    CHECK(solved.exit_code == 0);
    CHECK(solved.out.find("value s 1") != std::string::npos);  // Max just walks to t
}
