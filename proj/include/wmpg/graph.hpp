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

#ifndef WMPG_GRAPH_HPP
#define WMPG_GRAPH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/strategy.hpp"

namespace wmpg {

/// Tarjan SCC decomposition of an explicit digraph. Components come out in
/// reverse topological order; within the result they are re-sorted by their
/// smallest vertex so callers see a stable order.
inline std::vector<std::vector<int>> scc_decompose(const std::vector<std::vector<int>>& adj) {
    int n = static_cast<int>(adj.size());
    std::vector<int> idx(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<char> on(static_cast<std::size_t>(n), 0);
    std::vector<int> stk;
    std::vector<std::vector<int>> comps;
    int counter = 0;
    // Iterative Tarjan: frame = (vertex, next-edge cursor).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (idx[static_cast<std::size_t>(root)] != -1) continue;
        frames.push_back({root, 0});
        while (!frames.empty()) {
            auto& [v, cursor] = frames.back();
            if (cursor == 0) {
                idx[static_cast<std::size_t>(v)] = low[static_cast<std::size_t>(v)] = counter++;
                stk.push_back(v);
                on[static_cast<std::size_t>(v)] = 1;
            }
            bool descended = false;
            while (cursor < adj[static_cast<std::size_t>(v)].size()) {
                int w = adj[static_cast<std::size_t>(v)][cursor++];
                if (idx[static_cast<std::size_t>(w)] == -1) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on[static_cast<std::size_t>(w)])
                    low[static_cast<std::size_t>(v)] = std::min(low[static_cast<std::size_t>(v)], idx[static_cast<std::size_t>(w)]);
            }
            if (descended) continue;
            if (low[static_cast<std::size_t>(v)] == idx[static_cast<std::size_t>(v)]) {
                std::vector<int> comp;
                while (true) {
                    int w = stk.back();
                    stk.pop_back();
                    on[static_cast<std::size_t>(w)] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
            int child = v;
            frames.pop_back();
            if (!frames.empty()) {
                int parent = frames.back().first;
                low[static_cast<std::size_t>(parent)] =
                    std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(child)]);
            }
        }
    }
    std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return comps;
}

/// Bottom SCCs of an induced chain (SCCs with no outgoing move).
inline std::vector<std::vector<int>> bsccs(const InducedChain& chain) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(chain.size()));
    for (int i = 0; i < chain.size(); ++i)
        for (const auto& mv : chain.moves[static_cast<std::size_t>(i)]) adj[static_cast<std::size_t>(i)].push_back(mv.to);
    auto comps = scc_decompose(adj);
    std::vector<int> comp_of(static_cast<std::size_t>(chain.size()), -1);
    for (std::size_t k = 0; k < comps.size(); ++k)
        for (int v : comps[k]) comp_of[static_cast<std::size_t>(v)] = static_cast<int>(k);
    std::vector<std::vector<int>> bottoms;
    for (std::size_t k = 0; k < comps.size(); ++k) {
        bool bottom = true;
        for (int v : comps[k])
            for (int w : adj[static_cast<std::size_t>(v)])
                if (comp_of[static_cast<std::size_t>(w)] != static_cast<int>(k)) bottom = false;
        if (bottom) bottoms.push_back(comps[k]);
    }
    return bottoms;
}

struct AttractorResult {
    std::vector<int> attractor;            // sorted
    std::map<int, int> witness;            // attracted owned vertex -> chosen successor
    std::vector<int> complement_trap;      // within \ attractor, sorted
};

/// Least fixpoint of one-step positive attraction toward `target` inside the
/// subgame induced by `within`: the attracting player or Random needs some
/// successor already attracted, the opponent needs all of its within-
/// successors attracted. Witness ties break toward the smallest successor
/// index so downstream strategies are reproducible.
inline AttractorResult positive_attractor(const StochasticGame& g, Owner player,
                                          const std::vector<int>& target, const std::vector<int>& within) {
    if (player == Owner::Random) throw error("positive_attractor: player must be Max or Min");
    std::vector<char> in_within(static_cast<std::size_t>(g.size()), 0), in_attr(static_cast<std::size_t>(g.size()), 0);
    for (int v : within) in_within[static_cast<std::size_t>(v)] = 1;
    for (int v : target) {
        if (!in_within[static_cast<std::size_t>(v)]) throw error("positive_attractor: target not within");
        in_attr[static_cast<std::size_t>(v)] = 1;
    }
    AttractorResult res;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : within) {
            if (in_attr[static_cast<std::size_t>(v)]) continue;
            Owner o = g.owner(v);
            if (o == player || o == Owner::Random) {
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    if (!in_within[static_cast<std::size_t>(e.to)]) continue;
                    if (in_attr[static_cast<std::size_t>(e.to)]) {
                        in_attr[static_cast<std::size_t>(v)] = 1;
                        if (o == player) res.witness[v] = e.to;
                        changed = true;
                        break;
                    }
                }
            } else {
                bool all = true, any = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    if (!in_within[static_cast<std::size_t>(e.to)]) continue;
                    any = true;
                    if (!in_attr[static_cast<std::size_t>(e.to)]) all = false;
                }
                if (any && all) {
                    in_attr[static_cast<std::size_t>(v)] = 1;
                    changed = true;
                }
            }
        }
    }
    for (int v : within)
        (in_attr[static_cast<std::size_t>(v)] ? res.attractor : res.complement_trap).push_back(v);
    std::sort(res.attractor.begin(), res.attractor.end());
    std::sort(res.complement_trap.begin(), res.complement_trap.end());
    return res;
}

/// Largest subset C of `safe` (inside the subgame induced by `within`) from
/// which `player` can stay in C forever against both the opponent and
/// chance: player vertices need some successor in C, all other vertices need
/// every within-successor in C. Returns the set and a per-vertex stay choice
/// for the player.
struct SafeCore {
    std::vector<int> core;       // sorted
    std::map<int, int> witness;  // player vertex in core -> staying successor
};

inline SafeCore sure_safe_core(const StochasticGame& g, Owner player, const std::vector<int>& safe,
                               const std::vector<int>& within) {
    std::vector<char> in_within(static_cast<std::size_t>(g.size()), 0), in_core(static_cast<std::size_t>(g.size()), 0);
    for (int v : within) in_within[static_cast<std::size_t>(v)] = 1;
    for (int v : safe)
        if (in_within[static_cast<std::size_t>(v)]) in_core[static_cast<std::size_t>(v)] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v : within) {
            if (!in_core[static_cast<std::size_t>(v)]) continue;
            bool ok;
            if (g.owner(v) == player) {
                ok = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (in_core[static_cast<std::size_t>(e.to)]) ok = true;
            } else {
                ok = true;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (in_within[static_cast<std::size_t>(e.to)] && !in_core[static_cast<std::size_t>(e.to)]) ok = false;
                // An opponent vertex whose every successor leaves `within`
                // cannot be kept; treat it as unsafe.
                bool has_within = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (in_within[static_cast<std::size_t>(e.to)]) has_within = true;
                if (!has_within) ok = false;
            }
            if (!ok) {
                in_core[static_cast<std::size_t>(v)] = 0;
                changed = true;
            }
        }
    }
    SafeCore res;
    for (int v : within)
        if (in_core[static_cast<std::size_t>(v)]) {
            res.core.push_back(v);
            if (g.owner(v) == player)
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (in_core[static_cast<std::size_t>(e.to)]) {
                        res.witness[v] = e.to;
                        break;
                    }
        }
    std::sort(res.core.begin(), res.core.end());
    return res;
}

struct MecDecomposition {
    std::vector<std::vector<int>> mecs;  // disjoint, each sorted
    std::vector<int> membership;         // vertex -> mec index or -1
};

/// Maximal end components of the MDP obtained by handing Min vertices to
/// Max: iterated SCC refinement, pruning Random vertices with an out-of-set
/// successor and vertices left without an in-set successor.
inline MecDecomposition mec_decompose(const StochasticGame& g) {
    std::vector<std::vector<int>> candidates;
    {
        std::vector<int> all;
        for (int v = 0; v < g.size(); ++v) all.push_back(v);
        candidates.push_back(std::move(all));
    }
    std::vector<std::vector<int>> result;
    while (!candidates.empty()) {
        std::vector<int> set = std::move(candidates.back());
        candidates.pop_back();
        std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
        for (int v : set) in[static_cast<std::size_t>(v)] = 1;
        // Prune to closure: random vertices must keep all successors,
        // everything must keep some successor.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v : set) {
                if (!in[static_cast<std::size_t>(v)]) continue;
                bool any = false, random_leak = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    if (in[static_cast<std::size_t>(e.to)]) any = true;
                    else if (g.owner(v) == Owner::Random) random_leak = true;
                }
                if (!any || random_leak) {
                    in[static_cast<std::size_t>(v)] = 0;
                    changed = true;
                }
            }
        }
        std::vector<int> kept;
        for (int v : set)
            if (in[static_cast<std::size_t>(v)]) kept.push_back(v);
        if (kept.empty()) continue;
        // SCCs of the pruned subgraph.
        std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
        for (std::size_t i = 0; i < kept.size(); ++i) pos[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
        std::vector<std::vector<int>> adj(kept.size());
        for (int v : kept)
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (pos[static_cast<std::size_t>(e.to)] >= 0)
                    adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].push_back(pos[static_cast<std::size_t>(e.to)]);
        auto comps = scc_decompose(adj);
        if (comps.size() == 1) {
            // Pruning already guarantees every vertex keeps a successor in
            // the set (a self-loop for singletons), so a stable strongly
            // connected set is an end component.
            result.push_back(kept);
            continue;
        }
        for (auto& comp : comps) {
            std::vector<int> orig;
            for (int i : comp) orig.push_back(kept[static_cast<std::size_t>(i)]);
            std::sort(orig.begin(), orig.end());
            candidates.push_back(std::move(orig));
        }
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    MecDecomposition d;
    d.membership.assign(static_cast<std::size_t>(g.size()), -1);
    for (std::size_t k = 0; k < result.size(); ++k)
        for (int v : result[k]) d.membership[static_cast<std::size_t>(v)] = static_cast<int>(k);
    d.mecs = std::move(result);
    return d;
}

/// Minimum cycle mean over the subgraph induced by `within`, by Karp's
/// dynamic program per SCC with exact rationals, plus one witness cycle
/// (recovered as a zero-total simple cycle after shifting weights by the
/// mean). Throws if the subgraph is acyclic.
inline std::pair<Rat, std::vector<int>> min_mean_cycle(const StochasticGame& g, const std::vector<int>& within) {
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    for (int v : within) in[static_cast<std::size_t>(v)] = 1;
    std::vector<int> verts;
    for (int v = 0; v < g.size(); ++v)
        if (in[static_cast<std::size_t>(v)]) verts.push_back(v);
    std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
    for (std::size_t i = 0; i < verts.size(); ++i) pos[static_cast<std::size_t>(verts[i])] = static_cast<int>(i);

    struct E { int from, to; Rat w; };
    std::vector<std::vector<int>> adj(verts.size());
    std::vector<E> edges;
    for (int v : verts)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (pos[static_cast<std::size_t>(e.to)] >= 0) {
                adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].push_back(pos[static_cast<std::size_t>(e.to)]);
                edges.push_back({pos[static_cast<std::size_t>(v)], pos[static_cast<std::size_t>(e.to)], e.payoff});
            }

    std::optional<Rat> best;
    std::vector<int> best_scc;
    auto comps = scc_decompose(adj);
    for (const auto& comp : comps) {
        bool has_cycle = comp.size() > 1;
        if (!has_cycle)
            for (const E& e : edges)
                if (e.from == comp[0] && e.to == comp[0]) has_cycle = true;
        if (!has_cycle) continue;
        std::vector<char> inc(verts.size(), 0);
        for (int v : comp) inc[static_cast<std::size_t>(v)] = 1;
        int n = static_cast<int>(comp.size());
        // d[k][v]: minimum total weight of a k-edge walk ending at v, from
        // any start in the SCC (d[0] = 0 everywhere).
        std::map<int, int> cpos;
        for (int i = 0; i < n; ++i) cpos[comp[static_cast<std::size_t>(i)]] = i;
        std::vector<std::vector<std::optional<Rat>>> d(static_cast<std::size_t>(n + 1),
                                                       std::vector<std::optional<Rat>>(static_cast<std::size_t>(n)));
        for (int i = 0; i < n; ++i) d[0][static_cast<std::size_t>(i)] = Rat(0);
        for (int k = 1; k <= n; ++k)
            for (const E& e : edges) {
                if (!inc[static_cast<std::size_t>(e.from)] || !inc[static_cast<std::size_t>(e.to)]) continue;
                auto& prev = d[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(cpos[e.from])];
                if (!prev) continue;
                auto& cur = d[static_cast<std::size_t>(k)][static_cast<std::size_t>(cpos[e.to])];
                Rat cand = *prev + e.w;
                if (!cur || cand < *cur) cur = cand;
            }
        for (int i = 0; i < n; ++i) {
            if (!d[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)]) continue;
            std::optional<Rat> worst;
            for (int k = 0; k < n; ++k) {
                if (!d[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) continue;
                Rat val = (*d[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] -
                           *d[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)]) /
                          Rat(n - k);
                if (!worst || val > *worst) worst = val;
            }
            if (worst && (!best || *worst < *best)) {
                best = *worst;
                best_scc = comp;
            }
        }
    }
    if (!best) throw error("min_mean_cycle: subgraph is acyclic");

    // Witness: with weights shifted by the mean, all cycle totals are >= 0
    // and some simple cycle has total 0. Bellman-Ford from each vertex of
    // the witness SCC finds one.
    std::vector<char> inc(verts.size(), 0);
    for (int v : best_scc) inc[static_cast<std::size_t>(v)] = 1;
    for (int s : best_scc) {
        int n = static_cast<int>(verts.size());
        std::vector<std::optional<Rat>> dist(static_cast<std::size_t>(n));
        std::vector<int> pred(static_cast<std::size_t>(n), -1);
        dist[static_cast<std::size_t>(s)] = Rat(0);
        for (int it = 0; it < n; ++it) {
            bool changed = false;
            for (const E& e : edges) {
                if (!inc[static_cast<std::size_t>(e.from)] || !inc[static_cast<std::size_t>(e.to)] || e.to == s) continue;
                if (!dist[static_cast<std::size_t>(e.from)]) continue;
                Rat cand = *dist[static_cast<std::size_t>(e.from)] + e.w - *best;
                if (!dist[static_cast<std::size_t>(e.to)] || cand < *dist[static_cast<std::size_t>(e.to)]) {
                    dist[static_cast<std::size_t>(e.to)] = cand;
                    pred[static_cast<std::size_t>(e.to)] = e.from;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        for (const E& e : edges) {
            if (e.to != s || !inc[static_cast<std::size_t>(e.from)]) continue;
            if (e.from != s && !dist[static_cast<std::size_t>(e.from)]) continue;
            Rat reach = e.from == s ? Rat(0) : *dist[static_cast<std::size_t>(e.from)];
            if (reach + e.w - *best != 0) continue;
            std::vector<int> cyc;
            for (int cur = e.from; cur != s; cur = pred[static_cast<std::size_t>(cur)])
                cyc.push_back(verts[static_cast<std::size_t>(cur)]);
            cyc.push_back(verts[static_cast<std::size_t>(s)]);
            std::reverse(cyc.begin(), cyc.end());
            return {*best, cyc};
        }
    }
    // Unreachable when the DP found a cycle, kept as a hard failure.
    throw error("min_mean_cycle: witness extraction failed");
}

}  // namespace wmpg

#endif
