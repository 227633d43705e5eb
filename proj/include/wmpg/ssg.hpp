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

#ifndef WMPG_SSG_HPP
#define WMPG_SSG_HPP

#include <string>

#include "wmpg/game.hpp"

namespace wmpg {

/// Turns a reachability game into a window mean-payoff instance: the target
/// keeps an absorbing self-loop of payoff 1, every other edge gets payoff 0.
/// The expected window value of a vertex then equals its probability of
/// reaching the target, for every window length.
inline StochasticGame reachability_to_fwmp(const StochasticGame& g, const std::string& target_id) {
    int target = g.index_of(target_id);
    if (target < 0) throw error("unknown target vertex '" + target_id + "'");
    const auto& edges = g.out[static_cast<std::size_t>(target)];
    if (edges.size() != 1 || edges.front().to != target)
        throw error("target vertex must be absorbing (single self-loop)");
    StochasticGame h;
    h.name = g.name + "-fwmp";
    for (int v = 0; v < g.size(); ++v) h.add_vertex(g.ids[v], g.owner(v));
    for (int v = 0; v < g.size(); ++v)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            h.add_edge(v, e.to, v == target ? Rat(1) : Rat(0), e.prob);
    h.finalize();
    return h;
}

}  // namespace wmpg

#endif
