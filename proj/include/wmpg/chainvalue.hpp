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

#ifndef WMPG_CHAINVALUE_HPP
#define WMPG_CHAINVALUE_HPP

#include <optional>
#include <vector>

#include "wmpg/graph.hpp"
#include "wmpg/linalg.hpp"
#include "wmpg/strategy.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

enum class ChainObjective { Liminf, Fwmp, Bwmp };

/// Exact absorption probabilities from `from` into each bottom SCC: solves
/// the transient linear system (I - Q) x = b per BSCC.
inline std::vector<Rat> bscc_reach_probabilities(const InducedChain& chain,
                                                 const std::vector<std::vector<int>>& bottom, int from) {
    int n = chain.size();
    std::vector<int> bscc_of(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < bottom.size(); ++k)
        for (int s : bottom[k]) bscc_of[static_cast<std::size_t>(s)] = static_cast<int>(k);
    std::vector<int> transient;
    std::vector<int> tpos(static_cast<std::size_t>(n), -1);
    for (int s = 0; s < n; ++s)
        if (bscc_of[static_cast<std::size_t>(s)] < 0) {
            tpos[static_cast<std::size_t>(s)] = static_cast<int>(transient.size());
            transient.push_back(s);
        }
    std::vector<Rat> result(bottom.size(), Rat(0));
    if (bscc_of[static_cast<std::size_t>(from)] >= 0) {
        result[static_cast<std::size_t>(bscc_of[static_cast<std::size_t>(from)])] = 1;
        return result;
    }
    std::size_t m = transient.size();
    for (std::size_t k = 0; k < bottom.size(); ++k) {
        Matrix a(m, std::vector<Rat>(m, Rat(0)));
        std::vector<Rat> b(m, Rat(0));
        for (std::size_t i = 0; i < m; ++i) {
            a[i][i] = 1;
            for (const auto& mv : chain.moves[static_cast<std::size_t>(transient[i])]) {
                int j = tpos[static_cast<std::size_t>(mv.to)];
                if (j >= 0) a[i][static_cast<std::size_t>(j)] -= mv.prob;
                else if (bscc_of[static_cast<std::size_t>(mv.to)] == static_cast<int>(k)) b[i] += mv.prob;
            }
        }
        auto x = gauss_solve(std::move(a), std::move(b));
        if (!x) throw error("bscc_reach_probabilities: singular transient system");
        result[k] = (*x)[static_cast<std::size_t>(tpos[static_cast<std::size_t>(from)])];
    }
    return result;
}

namespace detail {

/// Minimum over all length-l edge paths inside the BSCC of the best prefix
/// mean: the value shared by almost every play trapped in the BSCC under a
/// fixed window length (every such path recurs almost surely).
inline Rat bscc_fwmp_value(const InducedChain& chain, const std::vector<int>& bscc, int window_length) {
    std::vector<char> in(static_cast<std::size_t>(chain.size()), 0);
    for (int s : bscc) in[static_cast<std::size_t>(s)] = 1;
    std::optional<Rat> worst;
    std::vector<Rat> payoffs;
    // Every length-l edge path of the component recurs almost surely, so the
    // play value is the minimum over them of the best prefix mean.
    auto dfs = [&](auto&& self, int state) -> void {
        if (static_cast<int>(payoffs.size()) == window_length) {
            Rat v = best_window_value(payoffs, window_length);
            if (!worst || v < *worst) worst = v;
            return;
        }
        for (const auto& mv : chain.moves[static_cast<std::size_t>(state)]) {
            if (!in[static_cast<std::size_t>(mv.to)]) continue;
            payoffs.push_back(mv.payoff);
            self(self, mv.to);
            payoffs.pop_back();
        }
    };
    for (int s0 : bscc) dfs(dfs, s0);
    if (!worst) throw error("bscc_fwmp_value: empty component");
    return *worst;
}

inline Rat bscc_min_mean_cycle(const InducedChain& chain, const std::vector<int>& bscc) {
    // Rebuild the component as a tiny payoff digraph and run the exact DP.
    StochasticGame g;
    std::vector<int> pos(static_cast<std::size_t>(chain.size()), -1);
    for (std::size_t i = 0; i < bscc.size(); ++i) {
        pos[static_cast<std::size_t>(bscc[i])] = static_cast<int>(i);
        g.add_vertex("s" + std::to_string(i), Owner::Max);
    }
    for (int s : bscc)
        for (const auto& mv : chain.moves[static_cast<std::size_t>(s)])
            if (pos[static_cast<std::size_t>(mv.to)] >= 0 &&
                !g.has_edge(pos[static_cast<std::size_t>(s)], pos[static_cast<std::size_t>(mv.to)]))
                g.add_edge(pos[static_cast<std::size_t>(s)], pos[static_cast<std::size_t>(mv.to)], mv.payoff);
    g.finalize();
    std::vector<int> all;
    for (int i = 0; i < g.size(); ++i) all.push_back(i);
    return min_mean_cycle(g, all).first;
}

}  // namespace detail

/// Exact expected value of the play objective on a finite chain: reach
/// probability of each bottom SCC times the component's value, which is the
/// minimum recurring edge payoff (liminf), the worst recurring window
/// (FWMP), or the minimum cycle mean (BWMP).
inline Rat exact_chain_value(const InducedChain& chain, ChainObjective objective, int window_length = 1) {
    auto bottom = bsccs(chain);
    auto reach = bscc_reach_probabilities(chain, bottom, chain.start);
    Rat total(0);
    for (std::size_t k = 0; k < bottom.size(); ++k) {
        if (reach[k] == 0) continue;
        Rat value;
        switch (objective) {
            case ChainObjective::Liminf: {
                std::optional<Rat> mn;
                std::vector<char> in(static_cast<std::size_t>(chain.size()), 0);
                for (int s : bottom[k]) in[static_cast<std::size_t>(s)] = 1;
                for (int s : bottom[k])
                    for (const auto& mv : chain.moves[static_cast<std::size_t>(s)])
                        if (in[static_cast<std::size_t>(mv.to)] && (!mn || mv.payoff < *mn)) mn = mv.payoff;
                value = *mn;
                break;
            }
            case ChainObjective::Fwmp:
                value = detail::bscc_fwmp_value(chain, bottom[k], window_length);
                break;
            case ChainObjective::Bwmp:
                value = detail::bscc_min_mean_cycle(chain, bottom[k]);
                break;
        }
        total += reach[k] * value;
    }
    return total;
}

}  // namespace wmpg

#endif
