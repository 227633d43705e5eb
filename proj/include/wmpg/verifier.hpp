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

#ifndef WMPG_VERIFIER_HPP
#define WMPG_VERIFIER_HPP

#include <future>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/qualitative.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

/// A candidate can be rejected before any condition is evaluated when some
/// class restriction deadlocks; such a vector cannot satisfy the Bellman
/// equations in the first place.
struct structural_rejection : error {
    std::string vertex;
    explicit structural_rejection(const std::string& msg, std::string v)
        : error(msg), vertex(std::move(v)) {}
};

/// One value class of a vector: its vertices, boundary (Random vertices
/// with an out-of-class successor), the class restriction game, and the
/// positive-attractor / trap split toward the boundary for each player.
/// All vertex sets use base-game indices; `restriction` has its own dense
/// indexing reachable through ids.
struct ValueClass {
    Rat value;
    std::vector<int> vertices;
    std::vector<int> boundary;
    StochasticGame restriction;
    std::vector<int> attractor_max, trap_max;
    std::vector<int> attractor_min, trap_min;
    std::map<int, int> witness_max, witness_min;  // attractor witnesses, base indices

    const std::vector<int>& attractor(Owner p) const { return p == Owner::Max ? attractor_max : attractor_min; }
    const std::vector<int>& trap(Owner p) const { return p == Owner::Max ? trap_max : trap_min; }
    const std::map<int, int>& witness(Owner p) const { return p == Owner::Max ? witness_max : witness_min; }
};

struct ValueClassDecomposition {
    std::vector<ValueClass> classes;  // ascending by value
    std::vector<int> class_of;        // vertex -> class index
};

/// Splits a total value vector into classes, computes boundaries, class
/// restrictions and attractor/trap splits. Throws structural_rejection when
/// a class restriction deadlocks.
inline ValueClassDecomposition decompose(const StochasticGame& g, const std::vector<Rat>& values) {
    if (static_cast<int>(values.size()) != g.size()) throw error("decompose: vector not total");
    ValueClassDecomposition d;
    std::map<Rat, std::vector<int>> by_value;
    for (int v = 0; v < g.size(); ++v) by_value[values[static_cast<std::size_t>(v)]].push_back(v);
    d.class_of.assign(static_cast<std::size_t>(g.size()), -1);
    for (const auto& [val, verts] : by_value) {
        ValueClass c;
        c.value = val;
        c.vertices = verts;
        std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
        for (int v : verts) in[static_cast<std::size_t>(v)] = 1;
        for (int v : verts) {
            if (g.owner(v) != Owner::Random) continue;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (!in[static_cast<std::size_t>(e.to)]) {
                    c.boundary.push_back(v);
                    break;
                }
        }
        try {
            c.restriction = class_restriction(g, verts);
        } catch (const validation_error& e) {
            throw structural_rejection(std::string("class of value ") + rat_str(val) +
                                           " cannot satisfy the Bellman equations: " + e.what(),
                                       verts.empty() ? "" : g.ids[verts.front()]);
        }
        // Attractor toward the boundary inside the restriction, both sides.
        std::vector<int> bnd_r, all_r;
        for (int i = 0; i < c.restriction.size(); ++i) all_r.push_back(i);
        for (int v : c.boundary) bnd_r.push_back(c.restriction.index_of(g.ids[v]));
        std::sort(bnd_r.begin(), bnd_r.end());
        for (Owner p : {Owner::Max, Owner::Min}) {
            AttractorResult ar = positive_attractor(c.restriction, p, bnd_r, all_r);
            auto back = [&](const std::vector<int>& rs) {
                std::vector<int> out;
                for (int r : rs) out.push_back(g.index_of(c.restriction.ids[static_cast<std::size_t>(r)]));
                std::sort(out.begin(), out.end());
                return out;
            };
            if (p == Owner::Max) {
                c.attractor_max = back(ar.attractor);
                c.trap_max = back(ar.complement_trap);
                for (auto [v, s] : ar.witness)
                    c.witness_max[g.index_of(c.restriction.ids[static_cast<std::size_t>(v)])] =
                        g.index_of(c.restriction.ids[static_cast<std::size_t>(s)]);
            } else {
                c.attractor_min = back(ar.attractor);
                c.trap_min = back(ar.complement_trap);
                for (auto [v, s] : ar.witness)
                    c.witness_min[g.index_of(c.restriction.ids[static_cast<std::size_t>(v)])] =
                        g.index_of(c.restriction.ids[static_cast<std::size_t>(s)]);
            }
        }
        d.classes.push_back(std::move(c));
    }
    for (std::size_t k = 0; k < d.classes.size(); ++k)
        for (int v : d.classes[k].vertices) d.class_of[static_cast<std::size_t>(v)] = static_cast<int>(k);
    return d;
}

struct BellmanViolation {
    int vertex;
    Rat expected;  // value demanded by the equation
    Rat actual;    // value in the vector
};

/// Exact check of the per-owner Bellman equations; reports the first
/// offending vertex in index order.
inline std::optional<BellmanViolation> check_bellman(const StochasticGame& g, const std::vector<Rat>& values) {
    if (static_cast<int>(values.size()) != g.size()) throw error("check_bellman: vector not total");
    for (int v = 0; v < g.size(); ++v) {
        const auto& edges = g.out[static_cast<std::size_t>(v)];
        Rat want;
        if (g.owner(v) == Owner::Random) {
            want = 0;
            for (const HalfEdge& e : edges) want += e.prob * values[static_cast<std::size_t>(e.to)];
        } else {
            bool first = true;
            for (const HalfEdge& e : edges) {
                const Rat& x = values[static_cast<std::size_t>(e.to)];
                if (first || (g.owner(v) == Owner::Max ? x > want : x < want)) want = x;
                first = false;
            }
        }
        if (want != values[static_cast<std::size_t>(v)])
            return BellmanViolation{v, want, values[static_cast<std::size_t>(v)]};
    }
    return std::nullopt;
}

/// Outcome of the lower- or upper-bound condition on one class.
struct ConditionClassResult {
    bool pass = true;
    bool vacuous = false;                          // empty trap
    std::optional<int> losing_vertex;              // base index of a losing trap vertex
    std::optional<StochasticGame> trap_subgame;    // the analyzed trap subgame
    std::vector<int> trap_base_vertices;           // base index per trap-subgame index
    std::optional<StrategyMachine> trap_strategy;  // on the trap subgame
};

/// Checks, per class, that the given player wins the threshold objective
/// almost surely from every vertex of their trap subgame: Max needs
/// {value > class value - granularity}, Min the complement at
/// {class value + granularity}. Empty traps pass vacuously.
inline std::vector<ConditionClassResult> check_condition(const StochasticGame& g,
                                                         const ValueClassDecomposition& d, Owner player,
                                                         ObjectiveKind kind, int window_length,
                                                         const Rat& granularity,
                                                         const BwmpDecider* oracle = nullptr) {
    auto run_class = [&](const ValueClass& c) {
        ConditionClassResult r;
        const std::vector<int>& trap = c.trap(player);
        if (trap.empty()) {
            r.vacuous = true;
            return r;
        }
        std::vector<int> trap_r;
        for (int v : trap) trap_r.push_back(c.restriction.index_of(g.ids[v]));
        std::sort(trap_r.begin(), trap_r.end());
        StochasticGame sub = restrict_game(c.restriction, trap_r);
        r.trap_subgame = sub;
        r.trap_base_vertices.assign(static_cast<std::size_t>(sub.size()), -1);
        for (int i = 0; i < sub.size(); ++i)
            r.trap_base_vertices[static_cast<std::size_t>(i)] = g.index_of(sub.ids[static_cast<std::size_t>(i)]);
        Rat thr = player == Owner::Max ? Rat(c.value - granularity) : Rat(c.value + granularity);
        bool strict = player == Owner::Max;  // Max: {> v-g}; Min: complement of {>= v+g}, i.e. {< v+g}
        QualitativeResult q = kind == ObjectiveKind::Fwmp
                                  ? almost_sure_fwmp(sub, player, window_length, thr, strict)
                                  : almost_sure_bwmp(sub, player, thr, strict, oracle);
        std::vector<char> win(static_cast<std::size_t>(sub.size()), 0);
        for (int v : q.winning) win[static_cast<std::size_t>(v)] = 1;
        for (int i = 0; i < sub.size(); ++i)
            if (!win[static_cast<std::size_t>(i)]) {
                r.pass = false;
                r.losing_vertex = r.trap_base_vertices[static_cast<std::size_t>(i)];
                break;
            }
        r.trap_strategy = q.strategy;
        return r;
    };
    // Classes are independent; evaluate them concurrently and merge by index.
    std::vector<std::future<ConditionClassResult>> futs;
    for (const ValueClass& c : d.classes)
        futs.push_back(std::async(std::launch::async, run_class, std::cref(c)));
    std::vector<ConditionClassResult> out;
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

struct VerificationReport {
    bool accepted = false;
    bool bellman_pass = false;
    std::optional<BellmanViolation> bellman_violation;
    std::optional<std::string> structural_defect;
    std::vector<ConditionClassResult> lower;  // Max side, per class
    std::vector<ConditionClassResult> upper;  // Min side, per class
    std::optional<ValueClassDecomposition> decomposition;
    std::optional<StrategyMachine> strategy_max;
    std::optional<StrategyMachine> strategy_min;  // absent for BWMP

    /// Name of the first failing condition, for rejection reports.
    std::string failing_condition() const {
        if (structural_defect) return "structure";
        if (!bellman_pass) return "bellman";
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!lower[i].pass) return "lower-bound(class " + std::to_string(i) + ")";
        for (std::size_t i = 0; i < upper.size(); ++i)
            if (!upper[i].pass) return "upper-bound(class " + std::to_string(i) + ")";
        return accepted ? "none" : "unknown";
    }
};

/// Composes the per-class trap strategies with the memoryless attractor
/// witnesses into one machine: inside a class the machine mimics the trap
/// strategy on the trap and the attractor witness on the attractor; the
/// state space is the disjoint union of the per-class trap memories plus
/// one attractor-mode state per class.
inline StrategyMachine compose_optimal_machine(const StochasticGame& g, const ValueClassDecomposition& d,
                                               Owner player,
                                               const std::vector<ConditionClassResult>& conds) {
    struct Mode { int cls; int q; };  // q = -1: attractor mode
    std::vector<Mode> modes;
    std::vector<int> attr_state(d.classes.size(), -1);
    std::vector<int> trap_state0(d.classes.size(), -1);
    for (std::size_t k = 0; k < d.classes.size(); ++k) {
        if (!d.classes[k].attractor(player).empty()) {
            attr_state[k] = static_cast<int>(modes.size());
            modes.push_back({static_cast<int>(k), -1});
        }
        if (conds[k].trap_strategy) {
            trap_state0[k] = static_cast<int>(modes.size());
            for (int q = 0; q < conds[k].trap_strategy->states; ++q)
                modes.push_back({static_cast<int>(k), q});
        }
    }
    if (modes.empty()) modes.push_back({0, -1});  // degenerate: no decisions anywhere

    StrategyMachine m = StrategyMachine::blank(player, static_cast<int>(modes.size()), 0, g.size());
    for (int s = 0; s < static_cast<int>(modes.size()); ++s) {
        for (int v = 0; v < g.size(); ++v) {
            int k = d.class_of[static_cast<std::size_t>(v)];
            const ValueClass& c = d.classes[static_cast<std::size_t>(k)];
            bool in_attr = std::binary_search(c.attractor(player).begin(), c.attractor(player).end(), v);
            std::size_t sv = static_cast<std::size_t>(s), vv = static_cast<std::size_t>(v);
            if (in_attr || !conds[static_cast<std::size_t>(k)].trap_strategy) {
                m.next[sv][vv] = attr_state[static_cast<std::size_t>(k)] >= 0 ? attr_state[static_cast<std::size_t>(k)] : s;
                if (g.owner(v) == player) {
                    auto it = c.witness(player).find(v);
                    m.out[sv][vv] = it != c.witness(player).end() ? it->second
                                                                  : g.out[vv].front().to;
                }
                continue;
            }
            const StrategyMachine& tm = *conds[static_cast<std::size_t>(k)].trap_strategy;
            const StochasticGame& sub = *conds[static_cast<std::size_t>(k)].trap_subgame;
            int vhat = sub.index_of(g.ids[vv]);
            // Entering the trap fresh unless we were already running this
            // class's trap machine.
            int q = modes[sv].cls == k && modes[sv].q >= 0 ? modes[sv].q : tm.initial;
            int q2 = tm.step(q, vhat);
            m.next[sv][vv] = trap_state0[static_cast<std::size_t>(k)] + q2;
            if (g.owner(v) == player) {
                int o = tm.output(q, vhat);
                m.out[sv][vv] = o == kSkip ? g.out[vv].front().to
                                           : g.index_of(sub.ids[static_cast<std::size_t>(o)]);
            }
        }
    }
    m.check(g);
    return m;
}

/// Max machine always; Min machine only when every Min trap strategy is
/// finite (BWMP may require infinite memory on the Min side).
inline std::pair<StrategyMachine, std::optional<StrategyMachine>> synthesize_optimal(
    const StochasticGame& g, const ValueClassDecomposition& d,
    const std::vector<ConditionClassResult>& lower, const std::vector<ConditionClassResult>& upper) {
    StrategyMachine mx = compose_optimal_machine(g, d, Owner::Max, lower);
    bool min_ok = true;
    for (const auto& r : upper)
        if (!r.vacuous && !r.trap_strategy) min_ok = false;
    std::optional<StrategyMachine> mn;
    if (min_ok) mn = compose_optimal_machine(g, d, Owner::Min, upper);
    return {std::move(mx), std::move(mn)};
}

/// Full certificate check: exact Bellman equations, then the lower- and
/// upper-bound almost-sure conditions per class at granularity
/// (1/denominator_bound)^2. Accepts iff all three pass; on acceptance also
/// synthesizes the optimal strategy pair.
inline VerificationReport verify(const StochasticGame& g, const std::vector<Rat>& values, ObjectiveKind kind,
                                 int window_length, const Int& denominator_bound,
                                 const BwmpDecider* oracle = nullptr) {
    if (denominator_bound < 1) throw error("verify: denominator bound must be positive");
    for (const Rat& v : values)
        if (den(v) > denominator_bound)
            throw error("verify: vector denominator exceeds the declared bound (" + rat_str(v) + ")");
    VerificationReport rep;
    auto viol = check_bellman(g, values);
    rep.bellman_pass = !viol;
    rep.bellman_violation = viol;
    if (viol) return rep;

    try {
        rep.decomposition = decompose(g, values);
    } catch (const structural_rejection& e) {
        rep.structural_defect = e.what();
        rep.bellman_pass = false;
        return rep;
    }
    const ValueClassDecomposition& d = *rep.decomposition;

    // With Bellman satisfied every boundary vertex must see a strictly
    // lower and a strictly higher class.
    for (const ValueClass& c : d.classes)
        for (int b : c.boundary) {
            bool lower_seen = false, higher_seen = false;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(b)]) {
                if (values[static_cast<std::size_t>(e.to)] < c.value) lower_seen = true;
                if (values[static_cast<std::size_t>(e.to)] > c.value) higher_seen = true;
            }
            if (!lower_seen || !higher_seen)
                throw error("internal: boundary vertex " + g.ids[b] + " lacks a lower or higher successor class");
        }

    Rat granularity = Rat(1) / Rat(denominator_bound * denominator_bound);
    rep.lower = check_condition(g, d, Owner::Max, kind, window_length, granularity, oracle);
    rep.upper = check_condition(g, d, Owner::Min, kind, window_length, granularity, oracle);
    bool ok = true;
    for (const auto& r : rep.lower) ok = ok && r.pass;
    for (const auto& r : rep.upper) ok = ok && r.pass;
    rep.accepted = ok;
    if (ok) {
        auto [mx, mn] = synthesize_optimal(g, d, rep.lower, rep.upper);
        rep.strategy_max = std::move(mx);
        rep.strategy_min = std::move(mn);
    }
    return rep;
}

}  // namespace wmpg

#endif
