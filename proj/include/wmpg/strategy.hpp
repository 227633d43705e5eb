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

#ifndef WMPG_STRATEGY_HPP
#define WMPG_STRATEGY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wmpg/game.hpp"

namespace wmpg {

constexpr int kSkip = -1;

/// A deterministic finite-state transducer (Mealy machine) realizing a
/// strategy. On each round it reads the current vertex: the transition
/// advances the memory, the output names the chosen successor when the
/// vertex belongs to the machine's player and the skip symbol otherwise.
struct StrategyMachine {
    Owner player = Owner::Max;
    int states = 1;
    int initial = 0;
    std::vector<std::vector<int>> next;  // [state][vertex] -> state
    std::vector<std::vector<int>> out;   // [state][vertex] -> vertex or kSkip

    static StrategyMachine blank(Owner player, int states, int initial, int n_vertices) {
        StrategyMachine m;
        m.player = player;
        m.states = states;
        m.initial = initial;
        m.next.assign(static_cast<std::size_t>(states), std::vector<int>(static_cast<std::size_t>(n_vertices), 0));
        m.out.assign(static_cast<std::size_t>(states), std::vector<int>(static_cast<std::size_t>(n_vertices), kSkip));
        return m;
    }

    /// Memoryless strategy from a per-vertex choice table (kSkip at vertices
    /// the player does not own).
    static StrategyMachine memoryless(Owner player, const std::vector<int>& choice) {
        StrategyMachine m = blank(player, 1, 0, static_cast<int>(choice.size()));
        m.out[0] = choice;
        return m;
    }

    int step(int state, int vertex) const { return next[static_cast<std::size_t>(state)][static_cast<std::size_t>(vertex)]; }
    int output(int state, int vertex) const { return out[static_cast<std::size_t>(state)][static_cast<std::size_t>(vertex)]; }

    void check(const StochasticGame& g) const {
        if (states <= 0 || initial < 0 || initial >= states) throw validation_error("bad machine shape");
        if (static_cast<int>(next.size()) != states || static_cast<int>(out.size()) != states)
            throw validation_error("machine tables sized wrong");
        for (int q = 0; q < states; ++q) {
            if (static_cast<int>(next[static_cast<std::size_t>(q)].size()) != g.size() ||
                static_cast<int>(out[static_cast<std::size_t>(q)].size()) != g.size())
                throw validation_error("machine tables sized wrong");
            for (int v = 0; v < g.size(); ++v) {
                int q2 = step(q, v), o = output(q, v);
                if (q2 < 0 || q2 >= states) throw validation_error("machine transition out of range");
                if (g.owner(v) == player) {
                    if (o == kSkip || !g.has_edge(v, o))
                        throw validation_error("machine output at " + g.ids[v] + " is not a successor");
                } else if (o != kSkip) {
                    throw validation_error("machine outputs a move at foreign vertex " + g.ids[v]);
                }
            }
        }
    }
};

/// Runs the machine on a play prefix and returns the choice at its last
/// vertex: the extended output function evaluated at the whole prefix.
/// Returns kSkip iff the last vertex is not owned by the machine's player.
inline int run_strategy(const StochasticGame& g, const StrategyMachine& m, const std::vector<int>& prefix) {
    if (prefix.empty()) throw error("run_strategy: empty prefix");
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i)
        if (!g.has_edge(prefix[i], prefix[i + 1]))
            throw validation_error("prefix is not a path: missing edge " + g.ids[prefix[i]] + " -> " +
                                   g.ids[prefix[i + 1]]);
    int q = m.initial;
    for (std::size_t i = 0; i + 1 < prefix.size(); ++i) q = m.step(q, prefix[i]);
    return m.output(q, prefix.back());
}

/// The finite Markov chain obtained by fixing both strategies: states are
/// (vertex, Max memory, Min memory) triples reachable from the start.
struct InducedChain {
    struct State {
        int vertex, qmax, qmin;
        bool operator<(const State& o) const {
            if (vertex != o.vertex) return vertex < o.vertex;
            if (qmax != o.qmax) return qmax < o.qmax;
            return qmin < o.qmin;
        }
    };
    struct Move {
        int to;      // state index
        Rat prob;    // 1 at owned vertices
        Rat payoff;  // payoff of the base edge taken
    };

    const StochasticGame* game = nullptr;
    std::vector<State> states;
    std::vector<std::vector<Move>> moves;
    int start = 0;

    int size() const { return static_cast<int>(states.size()); }
};

/// Unfolds the product of game and both machines from `start`. Transitions
/// are deterministic at owned vertices and follow the game distribution at
/// Random vertices; states are discovered in deterministic BFS order.
inline InducedChain induce_chain(const StochasticGame& g, const StrategyMachine& sigma_max,
                                 const StrategyMachine& sigma_min, int start) {
    if (sigma_max.player != Owner::Max || sigma_min.player != Owner::Min)
        throw error("induce_chain: machines on the wrong side");
    sigma_max.check(g);
    sigma_min.check(g);
    InducedChain c;
    c.game = &g;
    std::map<InducedChain::State, int> index;
    auto intern = [&](InducedChain::State s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        int i = static_cast<int>(c.states.size());
        index[s] = i;
        c.states.push_back(s);
        c.moves.emplace_back();
        return i;
    };
    c.start = intern({start, sigma_max.initial, sigma_min.initial});
    for (int i = 0; i < static_cast<int>(c.states.size()); ++i) {
        InducedChain::State s = c.states[static_cast<std::size_t>(i)];
        int v = s.vertex;
        int qmax2 = sigma_max.step(s.qmax, v);
        int qmin2 = sigma_min.step(s.qmin, v);
        if (g.owner(v) == Owner::Random) {
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                int j = intern({e.to, qmax2, qmin2});
                c.moves[static_cast<std::size_t>(i)].push_back({j, e.prob, e.payoff});
            }
        } else {
            const StrategyMachine& m = g.owner(v) == Owner::Max ? sigma_max : sigma_min;
            int u = m.output(g.owner(v) == Owner::Max ? s.qmax : s.qmin, v);
            int j = intern({u, qmax2, qmin2});
            c.moves[static_cast<std::size_t>(i)].push_back({j, Rat(1), g.payoff(v, u)});
        }
    }
    return c;
}

}  // namespace wmpg

#endif
