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

// End-to-end acceptance suite: one line per criterion, nonzero exit if any
// criterion fails. Each criterion carries its runtime budget.

#include <chrono>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wmpg/wmpg.hpp"

using namespace wmpg;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count() / 1000.0;
}

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << "criterion " << criterion << ": " << (pass ? "PASS" : "FAIL") << " (" << detail << ")\n";
    std::cout.flush();
    if (!pass) ++failures;
}

Lasso random_lasso(const StochasticGame& g, std::mt19937_64& rng, int min_stem) {
    std::vector<int> walk{static_cast<int>(rng() % static_cast<unsigned>(g.size()))};
    std::vector<int> last_seen(static_cast<std::size_t>(g.size()), -1);
    while (true) {
        int v = walk.back();
        const auto& out = g.out[static_cast<std::size_t>(v)];
        int nxt = out[rng() % out.size()].to;
        if (static_cast<int>(walk.size()) > min_stem && last_seen[static_cast<std::size_t>(nxt)] >= min_stem) {
            int at = last_seen[static_cast<std::size_t>(nxt)];
            Lasso l;
            l.stem.assign(walk.begin(), walk.begin() + at);
            l.cycle.assign(walk.begin() + at, walk.end());
            return l;
        }
        last_seen[static_cast<std::size_t>(v)] = static_cast<int>(walk.size()) - 1;
        walk.push_back(nxt);
    }
}

void criterion1() {
    auto t0 = Clock::now();
    StochasticGame g = fixtures::classes14();
    auto expected = fixtures::classes14_values();
    bool ok = true;
    std::string detail;
    try {
        DenominatorBounds b = compute_bounds(g, ObjectiveKind::Fwmp, 2);
        VerificationReport rep = verify(g, expected, ObjectiveKind::Fwmp, 2, b.global_bound);
        if (!rep.accepted) {
            ok = false;
            detail = "certificate rejected";
        }
        SolveReport sol = solve(g, ObjectiveKind::Fwmp, 2);
        if (sol.values != expected) {
            ok = false;
            detail = "solve diverged from the certificate";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double dt = seconds_since(t0);
    if (dt > 60.0) ok = false;
    std::ostringstream os;
    os << "verify + solve on the 14-vertex fixture, " << dt << "s" << (detail.empty() ? "" : "; " + detail);
    report(1, ok, os.str());
}

void criterion2() {
    auto t0 = Clock::now();
    StochasticGame g = fixtures::classes14();
    auto base = fixtures::classes14_values();
    DenominatorBounds b = compute_bounds(g, ObjectiveKind::Fwmp, 2);
    const Rat deltas[] = {Rat(1, 2), Rat(-1, 2), Rat(1), Rat(-1)};
    int rejected = 0, tried = 0;
    std::string detail;
    for (int i = 0; i < 50; ++i) {
        auto vals = base;
        int v = i % g.size();
        vals[static_cast<std::size_t>(v)] += deltas[(i / g.size()) % 4];
        ++tried;
        try {
            VerificationReport rep = verify(g, vals, ObjectiveKind::Fwmp, 2, b.tight_bound);
            if (!rep.accepted && rep.failing_condition() != "none" && rep.failing_condition() != "unknown")
                ++rejected;
            else if (rep.accepted)
                detail = "perturbation at " + g.ids[v] + " accepted";
        } catch (const std::exception& e) {
            detail = e.what();
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << rejected << "/" << tried << " perturbations rejected with a named condition, " << dt << "s"
       << (detail.empty() ? "" : "; " + detail);
    report(2, rejected == tried && dt < 300.0, os.str());
}

void criterion3() {
    bool ok = true;
    std::string detail;
    try {
        StochasticGame m = fixtures::mec3();
        std::vector<Rat> expect{Rat(-1), Rat(0), Rat(1)};
        for (int ell : {1, 2, 3})
            if (solve(m, ObjectiveKind::Fwmp, ell).values != expect) {
                ok = false;
                detail = "three-vertex fixture, window " + std::to_string(ell);
            }
        if (solve(m, ObjectiveKind::Bwmp).values != expect) {
            ok = false;
            detail = "three-vertex fixture, bounded windows";
        }
        StochasticGame t = fixtures::twocycle();
        for (int ell : {1, 2, 3})
            if (solve(t, ObjectiveKind::Fwmp, ell).values != std::vector<Rat>{Rat(-1, ell), Rat(-1, ell)}) {
                ok = false;
                detail = "two-vertex fixture, window " + std::to_string(ell);
            }
        if (solve(t, ObjectiveKind::Bwmp).values != std::vector<Rat>{Rat(0), Rat(0)}) {
            ok = false;
            detail = "two-vertex fixture, bounded windows";
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(3, ok, detail.empty() ? "fixture vectors match exactly" : detail);
}

void criterion4() {
    bool ok = true;
    std::string detail = "expectation-optimal choice and value at the split vertex";
    try {
        StochasticGame g = fixtures::splitchoice();
        SolveReport rep = solve(g, ObjectiveKind::Fwmp, 2);
        int v1 = g.index_of("v1"), v5 = g.index_of("v5");
        if (rep.values[static_cast<std::size_t>(v1)] != Rat(1, 10)) {
            ok = false;
            detail = "value at v1 is " + rat_str(rep.values[static_cast<std::size_t>(v1)]);
        }
        const StrategyMachine& mx = *rep.verification.strategy_max;
        for (int q = 0; q < mx.states; ++q)
            if (mx.out[static_cast<std::size_t>(q)][static_cast<std::size_t>(v1)] != v5) {
                ok = false;
                detail = "strategy does not move v1 -> v5";
            }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(4, ok, detail);
}

void criterion5() {
    auto t0 = Clock::now();
    int games = 0, mismatches = 0, errors = 0;
    for (std::uint64_t seed = 1; games < 300; ++seed) {
        StochasticGame g = fixtures::random_game(seed + 100000, 2 + static_cast<int>(seed % 3), 3, 2);
        int ell = 1 + static_cast<int>(seed % 2);
        ++games;
        try {
            std::vector<Rat> oracle = brute_force_expected_values(g, ObjectiveKind::Fwmp, ell);
            SolveReport rep = solve(g, ObjectiveKind::Fwmp, ell);
            if (rep.values != oracle) ++mismatches;
        } catch (const std::exception&) {
            ++errors;
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << games << " random games, " << mismatches << " mismatches, " << errors << " errors, " << dt << "s";
    report(5, mismatches == 0 && errors == 0 && dt < 600.0, os.str());
}

void criterion6() {
    auto t0 = Clock::now();
    int games = 0, bad = 0;
    for (std::uint64_t seed = 1; games < 300; ++seed) {
        StochasticGame g = fixtures::random_game(seed + 200000, 2 + static_cast<int>(seed % 4), 3, 2);
        ++games;
        std::vector<int> set;
        for (int v = 0; v < g.size(); ++v)
            if ((seed * 0x9e37ULL >> (v % 16)) & 1) set.push_back(v);
        if (set.empty()) set.push_back(static_cast<int>(seed) % g.size());
        for (Owner p : {Owner::Max, Owner::Min}) {
            try {
                if (almost_sure_reach(g, p, set).winning !=
                    oracles::almost_sure_oracle(g, p, oracles::Goal::Reach, set))
                    ++bad;
                if (almost_sure_buchi(g, p, set).winning !=
                    oracles::almost_sure_oracle(g, p, oracles::Goal::Buchi, set))
                    ++bad;
                if (almost_sure_cobuchi(g, p, set).winning !=
                    oracles::almost_sure_oracle(g, p, oracles::Goal::CoBuchi, set))
                    ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
    }
    int pipeline_games = 0, pipeline_bad = 0;
    for (std::uint64_t seed = 1; pipeline_games < 100; ++seed) {
        StochasticGame raw = fixtures::random_game(seed + 300000, 2 + static_cast<int>(seed % 4), 3, 2);
        StochasticGame g;
        g.name = raw.name;
        for (int v = 0; v < raw.size(); ++v) g.add_vertex(raw.ids[v], raw.owner(v));
        for (int v = 0; v < raw.size(); ++v) {
            Rat uniform = raw.out[static_cast<std::size_t>(v)].front().payoff;
            for (const HalfEdge& e : raw.out[static_cast<std::size_t>(v)]) g.add_edge(v, e.to, uniform, e.prob);
        }
        g.finalize();
        ++pipeline_games;
        Rat lambda(static_cast<int>(seed % 5) - 2);
        std::vector<int> badset = fwmp1_cobuchi_target(g, lambda);
        std::vector<int> good;
        {
            std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
            for (int v : badset) in[static_cast<std::size_t>(v)] = 1;
            for (int v = 0; v < g.size(); ++v)
                if (!in[static_cast<std::size_t>(v)]) good.push_back(v);
        }
        try {
            if (almost_sure_fwmp(g, Owner::Max, 1, lambda, false).winning !=
                almost_sure_cobuchi(g, Owner::Max, good).winning)
                ++pipeline_bad;
            if (almost_sure_fwmp(g, Owner::Min, 1, lambda, false).winning !=
                almost_sure_buchi(g, Owner::Min, badset).winning)
                ++pipeline_bad;
        } catch (const std::exception&) {
            ++pipeline_bad;
        }
    }
    double dt = seconds_since(t0);
    std::ostringstream os;
    os << games << " games vs oracle (" << bad << " bad), " << pipeline_games << " window-1 pipeline games ("
       << pipeline_bad << " bad), " << dt << "s";
    report(6, bad == 0 && pipeline_bad == 0, os.str());
}

void criterion7() {
    bool ok = true;
    std::string detail;
    int checked = 0;
    try {
        // The fixture system solves to (-1, 0).
        StochasticGame g = fixtures::classes14();
        std::vector<std::vector<int>> classes = {
            fixtures::vxs(g, {"v1"}),
            fixtures::vxs(g, {"v2", "v3", "v4", "v5"}),
            fixtures::vxs(g, {"v6", "v7", "v8", "v9"}),
            fixtures::vxs(g, {"v10", "v11"}),
            fixtures::vxs(g, {"v12", "v13", "v14"}),
        };
        std::vector<std::optional<Rat>> known = {Rat(-2), std::nullopt, std::nullopt, Rat(1), Rat(2)};
        BoundaryLinearSystem fig_sys = solve_boundary_system(g, classes, known);
        if (fig_sys.solution != std::vector<Rat>{Rat(-1), Rat(0)}) {
            ok = false;
            detail = "fixture boundary system solved wrong";
        }
        // Every solved multi-class game with boundary classes obeys the
        // determinant and denominator facts.
        for (std::uint64_t seed = 1; seed <= 1500 && checked < 25; ++seed) {
            StochasticGame h = fixtures::random_game(seed + 400000, 4 + static_cast<int>(seed % 3), 3, 3);
            SolveReport rep;
            try {
                rep = solve(h, ObjectiveKind::Fwmp, 2);
            } catch (const SolveError&) {
                continue;
            }
            const auto& d = *rep.verification.decomposition;
            std::vector<std::vector<int>> cls;
            std::vector<std::optional<Rat>> kn;
            bool any = false;
            for (const ValueClass& c : d.classes) {
                cls.push_back(c.vertices);
                if (c.boundary.empty()) kn.push_back(c.value);
                else {
                    kn.push_back(std::nullopt);
                    any = true;
                }
            }
            if (!any) continue;
            ++checked;
            BoundaryLinearSystem sys = solve_boundary_system(h, cls, kn);
            DenominatorBounds b = compute_bounds(h, ObjectiveKind::Fwmp, 2);
            std::size_t m = sys.boundary_class.size();
            if (sys.det_alpha_ib == 0) ok = false;
            if (rat_abs(Rat(sys.det_alpha_ib)) > Rat(int_pow(2 * sys.alpha, static_cast<unsigned long>(m))))
                ok = false;
            for (std::size_t i = 0; i < m; ++i) {
                const ValueClass& c = d.classes[static_cast<std::size_t>(sys.boundary_class[i])];
                if (sys.solution[i] != c.value) ok = false;
                if (den(c.value) > b.global_bound) ok = false;
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::ostringstream os;
    os << "fixture system = (-1, 0); " << checked << " solved boundary systems checked"
       << (detail.empty() ? "" : "; " + detail);
    report(7, ok && checked >= 10, os.str());
}

void criterion8() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(2026);
    int fail_inductive = 0, fail_monotone = 0, fail_bounds = 0, fail_product = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        int n = 1 + static_cast<int>(rng() % 10);
        std::vector<Rat> seq;
        for (int i = 0; i < n; ++i) seq.emplace_back(static_cast<int>(rng() % 13) - 6, 1 + static_cast<int>(rng() % 3));
        Rat thr(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 2));
        auto close = window_closes(seq, thr, n);
        if (!close) continue;
        for (int k = 1; k < *close; ++k) {
            std::vector<Rat> suffix(seq.begin() + k, seq.end());
            auto c2 = window_closes(suffix, thr, *close - k);
            if (!c2 || *c2 > *close - k) ++fail_inductive;
        }
    }

    for (int trial = 0; trial < 1000; ++trial) {
        StochasticGame g = fixtures::random_game(500000 + trial % 200, 2 + trial % 4, 3, 3);
        Lasso l = random_lasso(g, rng, 0);
        Rat bw = bwmp_value_lasso(l, g);
        Rat cyc = infix_mean(l.cycle_payoffs(g));
        Rat maxpay = l.cycle_payoffs(g).front();
        for (const Rat& p : l.cycle_payoffs(g))
            if (p > maxpay) maxpay = p;
        if (cyc > bw || bw > maxpay) ++fail_bounds;
        Rat prev = fwmp_value_lasso(l, g, 1);
        for (int ell = 2; ell <= 5; ++ell) {
            Rat cur = fwmp_value_lasso(l, g, ell);
            if (prev > cur || cur > bw) ++fail_monotone;
            prev = cur;
        }
    }

    for (int trial = 0; trial < 1000; ++trial) {
        StochasticGame g = fixtures::random_game(600000 + trial % 200, 2 + trial % 4, 3, 2);
        int ell = 1 + trial % 3;
        Lasso l = random_lasso(g, rng, ell);
        Rat direct = fwmp_value_lasso(l, g, ell);
        ProductGame pg = build_history_product(g, ell, l.stem.front());
        std::vector<int> seq = l.stem;
        int warm = static_cast<int>(l.stem.size()) + ell;
        int period = static_cast<int>(l.cycle.size());
        while (static_cast<int>(seq.size()) < warm + 2 * period + 1)
            seq.push_back(l.cycle[(seq.size() - l.stem.size()) % l.cycle.size()]);
        int tuple = pg.padded(seq[0]);
        bool okwalk = true;
        std::optional<Rat> min_recurring;
        for (std::size_t i = 1; i < seq.size() && okwalk; ++i) {
            int nxt = -1;
            for (const HalfEdge& e : pg.product.out[static_cast<std::size_t>(tuple)])
                if (pg.label[static_cast<std::size_t>(e.to)].back() == seq[i]) nxt = e.to;
            if (nxt < 0) okwalk = false;
            else {
                tuple = nxt;
                if (static_cast<int>(i) >= warm) {
                    const Rat& p = pg.out_payoff[static_cast<std::size_t>(tuple)];
                    if (!min_recurring || p < *min_recurring) min_recurring = p;
                }
            }
        }
        if (!okwalk || !min_recurring || *min_recurring != direct) ++fail_product;
    }

    double dt = seconds_since(t0);
    std::ostringstream os;
    os << "inductive " << fail_inductive << ", monotone " << fail_monotone << ", bounds " << fail_bounds
       << ", product " << fail_product << " failures over 1000 cases each, " << dt << "s";
    report(8, fail_inductive + fail_monotone + fail_bounds + fail_product == 0, os.str());
}

}  // namespace

int main() {
    auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::cout << "criterion 9: NOT-A-TEST (complexity-class membership is covered by criteria 1-2: the"
                 " verifier is the certificate checker those arguments rely on)\n";
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES PRESENT")
              << " in " << seconds_since(t0) << "s\n";
    return failures == 0 ? 0 : 1;
}
