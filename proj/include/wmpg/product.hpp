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

#ifndef WMPG_PRODUCT_HPP
#define WMPG_PRODUCT_HPP

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/strategy.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

/// History product of a game: vertices are (l+1)-tuples of base vertices,
/// the last coordinate drives ownership and moves, edges shift the tuple.
/// Every out-edge of a product vertex carries the same payoff: the best
/// prefix mean of the l edges spelled by the tuple when it spells a path
/// (the window anchored at the label's start closes at that threshold and
/// no higher), and 0 on the warm-up vertices whose label is not a path.
/// Built lazily from padded start tuples (v, v, ..., v), so warm-up
/// vertices are transient by construction.
struct ProductGame {
    const StochasticGame* base = nullptr;
    int window_length = 1;
    StochasticGame product;
    std::vector<std::vector<int>> label;    // product index -> (l+1) base vertices
    std::vector<char> spells_path;          // label is a base edge sequence
    std::vector<Rat> out_payoff;            // shared payoff of all out-edges
    std::map<int, int> padded_of;           // base vertex -> its padded product vertex (if built)

    int padded(int base_vertex) const {
        auto it = padded_of.find(base_vertex);
        if (it == padded_of.end()) throw error("product has no padded vertex for this start");
        return it->second;
    }
};

namespace detail {

inline std::string tuple_id(const StochasticGame& g, const std::vector<int>& tup) {
    std::string s = "(";
    for (std::size_t i = 0; i < tup.size(); ++i) {
        if (i) s += ",";
        s += g.ids[static_cast<std::size_t>(tup[i])];
    }
    return s + ")";
}

}  // namespace detail

/// Builds the reachable part of the history product from the given start
/// vertices. The full tuple space is never materialized.
inline ProductGame build_history_product(const StochasticGame& g, int window_length,
                                         const std::vector<int>& starts) {
    if (window_length < 1) throw error("window length must be >= 1");
    if (starts.empty()) throw error("history product needs at least one start vertex");
    ProductGame pg;
    pg.base = &g;
    pg.window_length = window_length;

    std::map<std::vector<int>, int> index;
    std::vector<std::vector<int>> tuples;
    auto intern = [&](const std::vector<int>& tup) {
        auto it = index.find(tup);
        if (it != index.end()) return it->second;
        int i = static_cast<int>(tuples.size());
        index[tup] = i;
        tuples.push_back(tup);
        return i;
    };
    for (int s : starts) {
        std::vector<int> pad(static_cast<std::size_t>(window_length + 1), s);
        pg.padded_of[s] = intern(pad);
    }
    // BFS over shifts; adjacency recorded on tuple indices first.
    std::vector<std::vector<int>> succ_tuples;
    for (int i = 0; i < static_cast<int>(tuples.size()); ++i) {
        std::vector<int> tup = tuples[static_cast<std::size_t>(i)];
        succ_tuples.emplace_back();
        int last = tup.back();
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(last)]) {
            std::vector<int> nxt(tup.begin() + 1, tup.end());
            nxt.push_back(e.to);
            succ_tuples.back().push_back(intern(nxt));
        }
    }

    for (int i = 0; i < static_cast<int>(tuples.size()); ++i) {
        const std::vector<int>& tup = tuples[static_cast<std::size_t>(i)];
        pg.product.add_vertex(detail::tuple_id(g, tup), g.owner(tup.back()));
        pg.label.push_back(tup);
        bool path = true;
        for (std::size_t k = 0; k + 1 < tup.size(); ++k)
            if (!g.has_edge(tup[k], tup[k + 1])) path = false;
        pg.spells_path.push_back(path ? 1 : 0);
        if (path) {
            std::vector<Rat> payoffs;
            for (std::size_t k = 0; k + 1 < tup.size(); ++k) payoffs.push_back(g.payoff(tup[k], tup[k + 1]));
            pg.out_payoff.push_back(best_window_value(payoffs, window_length));
        } else {
            pg.out_payoff.push_back(Rat(0));
        }
    }
    for (int i = 0; i < static_cast<int>(tuples.size()); ++i) {
        const std::vector<int>& tup = tuples[static_cast<std::size_t>(i)];
        int last = tup.back();
        std::size_t k = 0;
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(last)]) {
            int j = succ_tuples[static_cast<std::size_t>(i)][k++];
            pg.product.add_edge(i, j, pg.out_payoff[static_cast<std::size_t>(i)],
                                g.owner(last) == Owner::Random ? e.prob : Rat(0));
        }
    }
    pg.product.finalize();
    return pg;
}

inline ProductGame build_history_product(const StochasticGame& g, int window_length, int start) {
    return build_history_product(g, window_length, std::vector<int>{start});
}

/// Wraps a positional product strategy as a Mealy machine over the base
/// game: memory tracks the recent history tuple; the choice at the current
/// vertex is the last coordinate of the product move. State 0 is a fresh
/// pre-play state that jumps to the padded tuple of the first vertex read.
/// When every reachable tuple ending at the same base vertex agrees on the
/// choice, the machine collapses to a single state.
inline StrategyMachine history_strategy_machine(const ProductGame& pg, Owner player,
                                                const std::vector<int>& product_choice) {
    const StochasticGame& g = *pg.base;
    int n_tuples = static_cast<int>(pg.label.size());

    auto choice_at = [&](int t) -> int {
        int c = product_choice[static_cast<std::size_t>(t)];
        if (c < 0) return kSkip;
        return pg.label[static_cast<std::size_t>(c)].back();
    };

    // Memoryless collapse when choices are a function of the last coordinate.
    {
        std::vector<int> by_vertex(static_cast<std::size_t>(g.size()), -2);
        bool uniform = true;
        for (int t = 0; t < n_tuples && uniform; ++t) {
            if (g.owner(pg.label[static_cast<std::size_t>(t)].back()) != player) continue;
            int v = pg.label[static_cast<std::size_t>(t)].back();
            int c = choice_at(t);
            if (c == kSkip) c = -3;  // undecided product vertex: treat as free
            if (by_vertex[static_cast<std::size_t>(v)] == -2) by_vertex[static_cast<std::size_t>(v)] = c;
            else if (c != -3 && by_vertex[static_cast<std::size_t>(v)] == -3) by_vertex[static_cast<std::size_t>(v)] = c;
            else if (c != -3 && by_vertex[static_cast<std::size_t>(v)] != c) uniform = false;
        }
        if (uniform) {
            std::vector<int> choice(static_cast<std::size_t>(g.size()), kSkip);
            for (int v = 0; v < g.size(); ++v) {
                if (g.owner(v) != player) continue;
                int c = by_vertex[static_cast<std::size_t>(v)];
                choice[static_cast<std::size_t>(v)] =
                    (c >= 0) ? c : g.out[static_cast<std::size_t>(v)].front().to;
            }
            return StrategyMachine::memoryless(player, choice);
        }
    }

    // Full unrolling: state q = tuple index + 1, state 0 = pre-play.
    StrategyMachine m = StrategyMachine::blank(player, n_tuples + 1, 0, g.size());
    std::map<std::vector<int>, int> index;
    for (int t = 0; t < n_tuples; ++t) index[pg.label[static_cast<std::size_t>(t)]] = t;
    auto shift = [&](int t, int v) -> int {
        std::vector<int> nxt(pg.label[static_cast<std::size_t>(t)].begin() + 1, pg.label[static_cast<std::size_t>(t)].end());
        nxt.push_back(v);
        auto it = index.find(nxt);
        return it == index.end() ? -1 : it->second;
    };
    auto default_out = [&](int v) { return g.out[static_cast<std::size_t>(v)].front().to; };
    for (int v = 0; v < g.size(); ++v) {
        auto it = pg.padded_of.find(v);
        int t = it == pg.padded_of.end() ? -1 : it->second;
        m.next[0][static_cast<std::size_t>(v)] = t + 1;  // -1 -> stuck in pre-play
        if (g.owner(v) == player)
            m.out[0][static_cast<std::size_t>(v)] = t >= 0 && choice_at(t) != kSkip ? choice_at(t) : default_out(v);
    }
    for (int t = 0; t < n_tuples; ++t)
        for (int v = 0; v < g.size(); ++v) {
            int nt = g.has_edge(pg.label[static_cast<std::size_t>(t)].back(), v) ? shift(t, v) : -1;
            m.next[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(v)] = nt + 1;
            if (g.owner(v) == player) {
                int c = nt >= 0 ? choice_at(nt) : kSkip;
                m.out[static_cast<std::size_t>(t + 1)][static_cast<std::size_t>(v)] = c != kSkip ? c : default_out(v);
            }
        }
    return m;
}

}  // namespace wmpg

#endif
