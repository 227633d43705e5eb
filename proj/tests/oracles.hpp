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

#ifndef WMPG_TESTS_ORACLES_HPP
#define WMPG_TESTS_ORACLES_HPP

#include <set>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/graph.hpp"
#include "wmpg/strategy.hpp"

namespace oracles {

using namespace wmpg;

enum class Goal { Reach, Buchi, CoBuchi };

namespace detail {

/// End components of the one-player structure obtained after fixing the
/// protagonist's choices, restricted to `allowed` vertices. choice[v] >= 0
/// forces that successor at v; other non-random vertices move freely.
inline std::vector<std::vector<int>> restricted_ecs(const StochasticGame& g, const std::vector<int>& choice,
                                                    const std::vector<char>& allowed) {
    auto edge_ok = [&](int v, const HalfEdge& e) {
        if (!allowed[static_cast<std::size_t>(v)] || !allowed[static_cast<std::size_t>(e.to)]) return false;
        if (choice[static_cast<std::size_t>(v)] >= 0 && e.to != choice[static_cast<std::size_t>(v)]) return false;
        return true;
    };
    std::vector<std::vector<int>> work;
    {
        std::vector<int> all;
        for (int v = 0; v < g.size(); ++v)
            if (allowed[static_cast<std::size_t>(v)]) all.push_back(v);
        work.push_back(std::move(all));
    }
    std::vector<std::vector<int>> out;
    while (!work.empty()) {
        std::vector<int> set = std::move(work.back());
        work.pop_back();
        std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
        for (int v : set) in[static_cast<std::size_t>(v)] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v : set) {
                if (!in[static_cast<std::size_t>(v)]) continue;
                bool any = false, leak = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    bool ok = edge_ok(v, e) && in[static_cast<std::size_t>(e.to)];
                    if (ok) any = true;
                    else if (g.owner(v) == Owner::Random) leak = true;
                }
                if (!any || leak) {
                    in[static_cast<std::size_t>(v)] = 0;
                    changed = true;
                }
            }
        }
        std::vector<int> kept;
        for (int v : set)
            if (in[static_cast<std::size_t>(v)]) kept.push_back(v);
        if (kept.empty()) continue;
        std::vector<int> pos(static_cast<std::size_t>(g.size()), -1);
        for (std::size_t i = 0; i < kept.size(); ++i) pos[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
        std::vector<std::vector<int>> adj(kept.size());
        for (int v : kept)
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (edge_ok(v, e) && pos[static_cast<std::size_t>(e.to)] >= 0)
                    adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].push_back(pos[static_cast<std::size_t>(e.to)]);
        auto comps = scc_decompose(adj);
        if (comps.size() == 1) {
            out.push_back(kept);
            continue;
        }
        for (auto& comp : comps) {
            std::vector<int> orig;
            for (int i : comp) orig.push_back(kept[static_cast<std::size_t>(i)]);
            work.push_back(std::move(orig));
        }
    }
    return out;
}

/// Vertices from which some falsifying component is reachable, moving only
/// through `allowed` vertices (protagonist choices respected).
inline std::vector<char> can_reach(const StochasticGame& g, const std::vector<int>& choice,
                                   const std::vector<char>& allowed, const std::vector<char>& targets) {
    std::vector<char> reach = targets;
    bool grew = true;
    while (grew) {
        grew = false;
        for (int v = 0; v < g.size(); ++v) {
            if (reach[static_cast<std::size_t>(v)] || !allowed[static_cast<std::size_t>(v)]) continue;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                if (choice[static_cast<std::size_t>(v)] >= 0 && e.to != choice[static_cast<std::size_t>(v)]) continue;
                if (reach[static_cast<std::size_t>(e.to)]) {
                    reach[static_cast<std::size_t>(v)] = 1;
                    grew = true;
                    break;
                }
            }
        }
    }
    return reach;
}

}  // namespace detail

/// Reference almost-sure winning set by enumerating the player's memoryless
/// strategies; the opponent's ability to falsify is decided by end-component
/// analysis in the induced one-player structure. Memoryless strategies
/// suffice on both sides for these goals.
inline std::vector<int> almost_sure_oracle(const StochasticGame& g, Owner player, Goal goal,
                                           const std::vector<int>& target_set) {
    std::vector<char> tgt(static_cast<std::size_t>(g.size()), 0);
    for (int v : target_set) tgt[static_cast<std::size_t>(v)] = 1;
    std::vector<int> player_vertices;
    for (int v = 0; v < g.size(); ++v)
        if (g.owner(v) == player) player_vertices.push_back(v);

    std::vector<char> winning(static_cast<std::size_t>(g.size()), 0);
    std::vector<std::size_t> pick(player_vertices.size(), 0);
    while (true) {
        std::vector<int> choice(static_cast<std::size_t>(g.size()), -1);
        for (std::size_t i = 0; i < player_vertices.size(); ++i)
            choice[static_cast<std::size_t>(player_vertices[i])] =
                g.out[static_cast<std::size_t>(player_vertices[i])][pick[i]].to;

        std::vector<char> all(static_cast<std::size_t>(g.size()), 1);
        std::vector<char> falsifiable(static_cast<std::size_t>(g.size()), 0);
        if (goal == Goal::Reach) {
            // Opponent wins by positively avoiding the target forever.
            std::vector<char> avoid(static_cast<std::size_t>(g.size()), 1);
            for (int v = 0; v < g.size(); ++v)
                if (tgt[static_cast<std::size_t>(v)]) avoid[static_cast<std::size_t>(v)] = 0;
            std::vector<char> bad(static_cast<std::size_t>(g.size()), 0);
            for (const auto& ec : detail::restricted_ecs(g, choice, avoid))
                for (int v : ec) bad[static_cast<std::size_t>(v)] = 1;
            falsifiable = detail::can_reach(g, choice, avoid, bad);
        } else if (goal == Goal::Buchi) {
            // Opponent wins by positively getting trapped away from the target.
            std::vector<char> avoid(static_cast<std::size_t>(g.size()), 1);
            for (int v = 0; v < g.size(); ++v)
                if (tgt[static_cast<std::size_t>(v)]) avoid[static_cast<std::size_t>(v)] = 0;
            std::vector<char> bad(static_cast<std::size_t>(g.size()), 0);
            for (const auto& ec : detail::restricted_ecs(g, choice, avoid))
                for (int v : ec) bad[static_cast<std::size_t>(v)] = 1;
            falsifiable = detail::can_reach(g, choice, all, bad);
        } else {
            // CoBuchi with safe set `target_set`: opponent wins by visiting
            // the complement infinitely often with positive probability,
            // i.e. by reaching a component that touches the complement.
            std::vector<char> bad(static_cast<std::size_t>(g.size()), 0);
            for (const auto& ec : detail::restricted_ecs(g, choice, all)) {
                bool touches = false;
                for (int v : ec)
                    if (!tgt[static_cast<std::size_t>(v)]) touches = true;
                if (touches)
                    for (int v : ec) bad[static_cast<std::size_t>(v)] = 1;
            }
            falsifiable = detail::can_reach(g, choice, all, bad);
        }
        for (int v = 0; v < g.size(); ++v)
            if (!falsifiable[static_cast<std::size_t>(v)]) winning[static_cast<std::size_t>(v)] = 1;

        std::size_t pos = 0;
        while (pos < pick.size()) {
            if (++pick[pos] < g.out[static_cast<std::size_t>(player_vertices[pos])].size()) break;
            pick[pos++] = 0;
        }
        if (pos == pick.size()) break;
    }
    std::vector<int> out;
    for (int v = 0; v < g.size(); ++v)
        if (winning[static_cast<std::size_t>(v)]) out.push_back(v);
    return out;
}

}  // namespace oracles

#endif
