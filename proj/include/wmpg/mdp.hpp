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

#ifndef WMPG_MDP_HPP
#define WMPG_MDP_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/graph.hpp"
#include "wmpg/linalg.hpp"

namespace wmpg {

enum class MdpObjective { Liminf, BwmpMinCycle };

struct MdpSolution {
    std::vector<Rat> value;   // per vertex
    std::vector<int> choice;  // controller vertex -> successor, -1 elsewhere
};

/// Forces one player's vertices to a memoryless choice, leaving the other
/// player and chance free: the induced one-player game.
inline StochasticGame force_strategy(const StochasticGame& g, Owner forced_player,
                                     const std::vector<int>& choice) {
    StochasticGame h;
    h.name = g.name;
    for (int v = 0; v < g.size(); ++v) h.add_vertex(g.ids[v], g.owner(v));
    for (int v = 0; v < g.size(); ++v) {
        if (g.owner(v) == forced_player) {
            int c = choice[static_cast<std::size_t>(v)];
            const HalfEdge* e = g.find_edge(v, c);
            if (!e) throw error("force_strategy: choice is not a successor at " + g.ids[v]);
            h.add_edge(v, c, e->payoff, e->prob);
        } else {
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) h.add_edge(v, e.to, e.payoff, e.prob);
        }
    }
    h.finalize();
    return h;
}

namespace detail {

/// Does the edge-filtered structure inside `vertices` contain a nonempty
/// end component? Edges are admitted by `keep(u, e)`; Random vertices must
/// keep all of their edges.
template <typename Keep>
bool filtered_ec_exists(const StochasticGame& g, const std::vector<int>& vertices, Keep keep) {
    std::vector<std::vector<int>> work{vertices};
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
                    bool ok = keep(v, e) && in[static_cast<std::size_t>(e.to)];
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
                if (keep(v, e) && pos[static_cast<std::size_t>(e.to)] >= 0)
                    adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].push_back(pos[static_cast<std::size_t>(e.to)]);
        auto comps = scc_decompose(adj);
        if (comps.size() == 1) return true;
        for (auto& comp : comps) {
            std::vector<int> orig;
            for (int i : comp) orig.push_back(kept[static_cast<std::size_t>(i)]);
            work.push_back(std::move(orig));
        }
    }
    return false;
}

/// Value of one maximal end component for the optimizing player.
inline Rat mec_value(const StochasticGame& g, const std::vector<int>& mec, bool maximize, MdpObjective obj) {
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    for (int v : mec) in[static_cast<std::size_t>(v)] = 1;
    if (obj == MdpObjective::BwmpMinCycle) {
        if (maximize) throw error("mdp: maximizing BWMP inside a component is not supported");
        return min_mean_cycle(g, mec).first;
    }
    if (!maximize) {
        // The minimizer steers to the cheapest edge and takes it forever.
        std::optional<Rat> mn;
        for (int v : mec)
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (in[static_cast<std::size_t>(e.to)] && (!mn || e.payoff < *mn)) mn = e.payoff;
        return *mn;
    }
    // Maximizer: the best threshold whose edge-filtered sub-structure still
    // contains an end component.
    std::set<Rat> levels;
    for (int v : mec)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (in[static_cast<std::size_t>(e.to)]) levels.insert(e.payoff);
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
        Rat t = *it;
        if (filtered_ec_exists(g, mec, [&](int, const HalfEdge& e) { return e.payoff >= t; })) return t;
    }
    throw error("mdp: component without a sustainable level");
}

/// The sub-end-component of `mec` realizing the maximizer's value, as a
/// vertex mask plus admitted-edge predicate level.
inline std::vector<int> max_liminf_witness_set(const StochasticGame& g, const std::vector<int>& mec, const Rat& level) {
    // Largest filtered closure; any EC inside it works, and the closure's
    // SCC refinement terminates at one.
    std::vector<std::vector<int>> work{mec};
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
                    bool ok = e.payoff >= level && in[static_cast<std::size_t>(e.to)];
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
                if (e.payoff >= level && pos[static_cast<std::size_t>(e.to)] >= 0)
                    adj[static_cast<std::size_t>(pos[static_cast<std::size_t>(v)])].push_back(pos[static_cast<std::size_t>(e.to)]);
        auto comps = scc_decompose(adj);
        if (comps.size() == 1) return kept;
        for (auto& comp : comps) {
            std::vector<int> orig;
            for (int i : comp) orig.push_back(kept[static_cast<std::size_t>(i)]);
            work.push_back(std::move(orig));
        }
    }
    throw error("mdp: witness sub-component vanished");
}

}  // namespace detail

/// Exact optimal expected value of a prefix-independent objective in a
/// one-player stochastic game (`controller` owns the only free vertices;
/// the other player's vertices must be forced to a single edge). Standard
/// route: per-MEC values, then optimal absorption in the MEC quotient via
/// policy iteration with exact rational evaluation.
inline MdpSolution solve_mdp(const StochasticGame& g, Owner controller, bool maximize, MdpObjective obj) {
    Owner other = controller == Owner::Max ? Owner::Min : Owner::Max;
    for (int v = 0; v < g.size(); ++v)
        if (g.owner(v) == other && g.out[static_cast<std::size_t>(v)].size() != 1)
            throw error("solve_mdp: non-controller vertex " + g.ids[v] + " is not forced");

    MecDecomposition mecs = mec_decompose(g);
    std::vector<Rat> w(mecs.mecs.size());
    for (std::size_t k = 0; k < mecs.mecs.size(); ++k)
        w[k] = detail::mec_value(g, mecs.mecs[k], maximize, obj);

    // Quotient nodes: transient vertices keep their index; each MEC gets one
    // collapsed node with a terminal "stay" action worth its value.
    int n = g.size();
    int m = static_cast<int>(mecs.mecs.size());
    auto node_of = [&](int v) {
        int k = mecs.membership[static_cast<std::size_t>(v)];
        return k >= 0 ? n + k : v;
    };
    struct Exit { int node; int via_vertex; int via_succ; };
    std::vector<std::vector<Exit>> exits(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < mecs.mecs.size(); ++k) {
        std::set<int> seen;
        for (int v : mecs.mecs[k]) {
            if (g.owner(v) != controller) continue;
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                if (mecs.membership[static_cast<std::size_t>(e.to)] == static_cast<int>(k)) continue;
                int t = node_of(e.to);
                if (seen.insert(t).second) exits[k].push_back({t, v, e.to});
            }
        }
    }

    // Rewards shifted to be nonnegative so the policy-iteration argument for
    // positive terminal rewards applies; unshift at the end.
    Rat shift(0);
    for (const Rat& x : w)
        if (x < shift) shift = x;
    std::vector<Rat> reward(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) reward[k] = w[k] - shift;
    if (maximize == false) {
        // Minimization becomes maximization of (maxReward - reward).
        Rat top(0);
        for (const Rat& x : reward)
            if (x > top) top = x;
        for (Rat& x : reward) x = top - x;
    }

    int nodes = n + m;
    // Policy: for controller transient vertices an edge; for collapsed
    // nodes, -1 = stay or an exit index.
    std::vector<int> pol_edge(static_cast<std::size_t>(n), -1);
    std::vector<int> pol_exit(static_cast<std::size_t>(m), -1);

    // Initial proper policy: greedy toward any collapsed node.
    {
        std::vector<int> dist(static_cast<std::size_t>(nodes), -1);
        std::vector<int> frontier;
        for (int k = 0; k < m; ++k) {
            dist[static_cast<std::size_t>(n + k)] = 0;
            frontier.push_back(n + k);
        }
        bool grew = true;
        while (grew) {
            grew = false;
            for (int v = 0; v < n; ++v) {
                if (dist[static_cast<std::size_t>(v)] >= 0 || mecs.membership[static_cast<std::size_t>(v)] >= 0) continue;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    int t = node_of(e.to);
                    if (dist[static_cast<std::size_t>(t)] >= 0) {
                        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(t)] + 1;
                        if (g.owner(v) == controller) pol_edge[static_cast<std::size_t>(v)] = e.to;
                        grew = true;
                        break;
                    }
                }
            }
        }
        for (int v = 0; v < n; ++v)
            if (mecs.membership[static_cast<std::size_t>(v)] < 0 && g.owner(v) == controller &&
                pol_edge[static_cast<std::size_t>(v)] < 0)
                pol_edge[static_cast<std::size_t>(v)] = g.out[static_cast<std::size_t>(v)].front().to;
    }

    auto evaluate = [&](std::vector<Rat>& val) {
        // States that reach a staying collapsed node; others earn 0.
        std::vector<std::vector<std::pair<int, Rat>>> step(static_cast<std::size_t>(nodes));
        std::vector<char> absorbing(static_cast<std::size_t>(nodes), 0);
        for (int v = 0; v < n; ++v) {
            if (mecs.membership[static_cast<std::size_t>(v)] >= 0) continue;
            if (g.owner(v) == Owner::Random) {
                std::map<int, Rat> agg;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) agg[node_of(e.to)] += e.prob;
                for (auto& [t, p] : agg) step[static_cast<std::size_t>(v)].push_back({t, p});
            } else if (g.owner(v) == controller) {
                step[static_cast<std::size_t>(v)].push_back({node_of(pol_edge[static_cast<std::size_t>(v)]), Rat(1)});
            } else {
                step[static_cast<std::size_t>(v)].push_back({node_of(g.out[static_cast<std::size_t>(v)].front().to), Rat(1)});
            }
        }
        for (int k = 0; k < m; ++k) {
            if (pol_exit[static_cast<std::size_t>(k)] < 0) absorbing[static_cast<std::size_t>(n + k)] = 1;
            else
                step[static_cast<std::size_t>(n + k)].push_back(
                    {exits[static_cast<std::size_t>(k)][static_cast<std::size_t>(pol_exit[static_cast<std::size_t>(k)])].node, Rat(1)});
        }
        // Backward reachability to absorption.
        std::vector<char> reaches(static_cast<std::size_t>(nodes), 0);
        for (int s = 0; s < nodes; ++s) reaches[static_cast<std::size_t>(s)] = absorbing[static_cast<std::size_t>(s)];
        bool grew = true;
        while (grew) {
            grew = false;
            for (int s = 0; s < nodes; ++s) {
                if (reaches[static_cast<std::size_t>(s)]) continue;
                for (auto& [t, p] : step[static_cast<std::size_t>(s)])
                    if (reaches[static_cast<std::size_t>(t)]) {
                        reaches[static_cast<std::size_t>(s)] = 1;
                        grew = true;
                        break;
                    }
            }
        }
        // Solve the absorbed block exactly.
        std::vector<int> sys;
        std::vector<int> pos(static_cast<std::size_t>(nodes), -1);
        for (int s = 0; s < nodes; ++s)
            if (reaches[static_cast<std::size_t>(s)] && !absorbing[static_cast<std::size_t>(s)]) {
                pos[static_cast<std::size_t>(s)] = static_cast<int>(sys.size());
                sys.push_back(s);
            }
        Matrix a(sys.size(), std::vector<Rat>(sys.size(), Rat(0)));
        std::vector<Rat> b(sys.size(), Rat(0));
        for (std::size_t i = 0; i < sys.size(); ++i) {
            a[i][i] = 1;
            for (auto& [t, p] : step[static_cast<std::size_t>(sys[i])]) {
                if (absorbing[static_cast<std::size_t>(t)]) b[i] += p * reward[static_cast<std::size_t>(t - n)];
                else if (pos[static_cast<std::size_t>(t)] >= 0) a[i][static_cast<std::size_t>(pos[static_cast<std::size_t>(t)])] -= p;
                // moves into non-reaching states contribute 0
            }
        }
        auto x = gauss_solve(std::move(a), std::move(b));
        if (!x) throw error("solve_mdp: singular evaluation system");
        val.assign(static_cast<std::size_t>(nodes), Rat(0));
        for (int s = 0; s < nodes; ++s) {
            if (absorbing[static_cast<std::size_t>(s)]) val[static_cast<std::size_t>(s)] = reward[static_cast<std::size_t>(s - n)];
            else if (pos[static_cast<std::size_t>(s)] >= 0) val[static_cast<std::size_t>(s)] = (*x)[static_cast<std::size_t>(pos[static_cast<std::size_t>(s)])];
        }
    };

    std::vector<Rat> val;
    for (int round = 0;; ++round) {
        if (round > 64 * (nodes + 1)) throw error("solve_mdp: policy iteration did not settle");
        evaluate(val);
        bool improved = false;
        for (int v = 0; v < n; ++v) {
            if (mecs.membership[static_cast<std::size_t>(v)] >= 0 || g.owner(v) != controller) continue;
            int best = pol_edge[static_cast<std::size_t>(v)];
            Rat best_val = val[static_cast<std::size_t>(v)];
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (val[static_cast<std::size_t>(node_of(e.to))] > best_val) {
                    best = e.to;
                    best_val = val[static_cast<std::size_t>(node_of(e.to))];
                }
            if (best != pol_edge[static_cast<std::size_t>(v)] && best_val > val[static_cast<std::size_t>(v)]) {
                pol_edge[static_cast<std::size_t>(v)] = best;
                improved = true;
            }
        }
        for (int k = 0; k < m; ++k) {
            Rat cur = val[static_cast<std::size_t>(n + k)];
            int bestix = pol_exit[static_cast<std::size_t>(k)];
            Rat best = cur;
            if (reward[static_cast<std::size_t>(k)] > best) {
                best = reward[static_cast<std::size_t>(k)];
                bestix = -1;
            }
            for (std::size_t x = 0; x < exits[static_cast<std::size_t>(k)].size(); ++x)
                if (val[static_cast<std::size_t>(exits[static_cast<std::size_t>(k)][x].node)] > best) {
                    best = val[static_cast<std::size_t>(exits[static_cast<std::size_t>(k)][x].node)];
                    bestix = static_cast<int>(x);
                }
            if (best > cur) {
                pol_exit[static_cast<std::size_t>(k)] = bestix;
                improved = true;
            }
        }
        if (!improved) break;
    }
    evaluate(val);

    MdpSolution sol;
    sol.value.assign(static_cast<std::size_t>(n), Rat(0));
    Rat top(0);
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] - shift > top) top = w[k] - shift;
    for (int v = 0; v < n; ++v) {
        Rat x = val[static_cast<std::size_t>(node_of(v))];
        if (!maximize) x = top - x;
        sol.value[static_cast<std::size_t>(v)] = x + shift;
    }

    // Policy extraction: transient choices from the quotient policy, in-MEC
    // choices realizing the component value or routing to the chosen exit.
    sol.choice.assign(static_cast<std::size_t>(n), -1);
    for (int v = 0; v < n; ++v)
        if (g.owner(v) == controller && mecs.membership[static_cast<std::size_t>(v)] < 0)
            sol.choice[static_cast<std::size_t>(v)] = pol_edge[static_cast<std::size_t>(v)];
    for (int k = 0; k < m; ++k) {
        const std::vector<int>& mec = mecs.mecs[static_cast<std::size_t>(k)];
        std::vector<char> in(static_cast<std::size_t>(n), 0);
        for (int v : mec) in[static_cast<std::size_t>(v)] = 1;
        int exit_ix = pol_exit[static_cast<std::size_t>(k)];
        if (exit_ix >= 0) {
            const auto& ex = exits[static_cast<std::size_t>(k)][static_cast<std::size_t>(exit_ix)];
            AttractorResult route = positive_attractor(g, controller, {ex.via_vertex}, mec);
            for (auto [vv, ss] : route.witness) sol.choice[static_cast<std::size_t>(vv)] = ss;
            sol.choice[static_cast<std::size_t>(ex.via_vertex)] = ex.via_succ;
            continue;
        }
        if (obj == MdpObjective::Liminf && maximize) {
            std::vector<int> sub = detail::max_liminf_witness_set(g, mec, w[static_cast<std::size_t>(k)]);
            std::vector<char> in_sub(static_cast<std::size_t>(n), 0);
            for (int v : sub) in_sub[static_cast<std::size_t>(v)] = 1;
            AttractorResult route = positive_attractor(g, controller, sub, mec);
            for (auto [vv, ss] : route.witness) sol.choice[static_cast<std::size_t>(vv)] = ss;
            for (int v : sub)
                if (g.owner(v) == controller)
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (in_sub[static_cast<std::size_t>(e.to)] && e.payoff >= w[static_cast<std::size_t>(k)]) {
                            sol.choice[static_cast<std::size_t>(v)] = e.to;
                            break;
                        }
        } else if (obj == MdpObjective::Liminf) {
            // Route to the cheapest edge and take it.
            int src = -1, dst = -1;
            std::optional<Rat> mn;
            for (int v : mec)
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (in[static_cast<std::size_t>(e.to)] && (!mn || e.payoff < *mn)) {
                        mn = e.payoff;
                        src = v;
                        dst = e.to;
                    }
            AttractorResult route = positive_attractor(g, controller, {src}, mec);
            for (auto [vv, ss] : route.witness) sol.choice[static_cast<std::size_t>(vv)] = ss;
            if (g.owner(src) == controller) sol.choice[static_cast<std::size_t>(src)] = dst;
        } else {
            // Minimum mean cycle: follow the witness cycle, route back to it.
            auto [gamma, cyc] = min_mean_cycle(g, mec);
            (void)gamma;
            AttractorResult route = positive_attractor(g, controller, cyc, mec);
            for (auto [vv, ss] : route.witness) sol.choice[static_cast<std::size_t>(vv)] = ss;
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                int v = cyc[i], nxt = cyc[(i + 1) % cyc.size()];
                if (g.owner(v) == controller) sol.choice[static_cast<std::size_t>(v)] = nxt;
            }
        }
    }
    for (int v = 0; v < n; ++v)
        if (g.owner(v) == controller && sol.choice[static_cast<std::size_t>(v)] < 0)
            sol.choice[static_cast<std::size_t>(v)] = g.out[static_cast<std::size_t>(v)].front().to;
    return sol;
}

}  // namespace wmpg

#endif
