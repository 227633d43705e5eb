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

#ifndef WMPG_QUALITATIVE_HPP
#define WMPG_QUALITATIVE_HPP

#include <algorithm>
#include <optional>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/graph.hpp"
#include "wmpg/product.hpp"
#include "wmpg/strategy.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

enum class QualMode { AlmostSure, Positive };

struct QualitativeResult {
    std::vector<int> winning;                 // sorted
    std::optional<StrategyMachine> strategy;  // absent where only infinite memory wins
    QualMode mode = QualMode::AlmostSure;
};

namespace detail {

inline Owner opponent_of(Owner p) { return p == Owner::Max ? Owner::Min : Owner::Max; }

/// One-step positive attraction on masks. Out-edges of `frozen` vertices are
/// ignored, which makes them absorbing for the attraction. Optionally
/// records witness successors for vertices owned by the attracting player.
inline std::vector<char> pos_attr_mask(const StochasticGame& g, Owner player, const std::vector<char>& seed,
                                       const std::vector<char>& within, const std::vector<char>* frozen,
                                       std::vector<int>* witness) {
    std::vector<char> attr = seed;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < g.size(); ++v) {
            if (!within[static_cast<std::size_t>(v)] || attr[static_cast<std::size_t>(v)]) continue;
            if (frozen && (*frozen)[static_cast<std::size_t>(v)]) continue;
            Owner o = g.owner(v);
            if (o == player || o == Owner::Random) {
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    if (!within[static_cast<std::size_t>(e.to)]) continue;
                    if (attr[static_cast<std::size_t>(e.to)]) {
                        attr[static_cast<std::size_t>(v)] = 1;
                        if (witness && o == player) (*witness)[static_cast<std::size_t>(v)] = e.to;
                        changed = true;
                        break;
                    }
                }
            } else {
                bool all = true, any = false;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
                    if (!within[static_cast<std::size_t>(e.to)]) continue;
                    any = true;
                    if (!attr[static_cast<std::size_t>(e.to)]) all = false;
                }
                if (any && all) {
                    attr[static_cast<std::size_t>(v)] = 1;
                    changed = true;
                }
            }
        }
    }
    return attr;
}

inline std::vector<char> to_mask(int n, const std::vector<int>& set) {
    std::vector<char> m(static_cast<std::size_t>(n), 0);
    for (int v : set) m[static_cast<std::size_t>(v)] = 1;
    return m;
}

inline std::vector<int> to_set(const std::vector<char>& mask) {
    std::vector<int> s;
    for (int v = 0; v < static_cast<int>(mask.size()); ++v)
        if (mask[static_cast<std::size_t>(v)]) s.push_back(v);
    return s;
}

inline bool mask_empty(const std::vector<char>& m) {
    for (char c : m)
        if (c) return false;
    return true;
}

/// All end components of the structure in which `player`'s vertices are
/// forced to `choice` and everything else moves freely inside `arena`.
inline std::vector<std::vector<int>> forced_end_components(const StochasticGame& g, Owner player,
                                                           const std::vector<int>& choice,
                                                           const std::vector<char>& arena) {
    auto edge_ok = [&](int v, const HalfEdge& e) {
        if (!arena[static_cast<std::size_t>(v)] || !arena[static_cast<std::size_t>(e.to)]) return false;
        if (g.owner(v) == player && choice[static_cast<std::size_t>(v)] >= 0 &&
            e.to != choice[static_cast<std::size_t>(v)])
            return false;
        return true;
    };
    std::vector<std::vector<int>> work{to_set(arena)}, out;
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

/// A memoryless choice wins coBuchi almost surely from everywhere in the
/// arena iff every end component of the forced structure is safe.
inline bool cobuchi_choice_certified(const StochasticGame& g, Owner player, const std::vector<char>& safe,
                                     const std::vector<char>& arena, const std::vector<int>& choice) {
    for (const auto& ec : forced_end_components(g, player, choice, arena))
        for (int v : ec)
            if (!safe[static_cast<std::size_t>(v)]) return false;
    return true;
}

struct RegionResult {
    std::vector<char> winning;
    std::vector<int> choice;  // per-vertex successor for the winner, -1 where irrelevant
};

/// Almost-sure reachability inside the arena `within`. Peels the opponent's
/// positive attractor of the zero-probability region until every remaining
/// vertex positively attracts to the target; the attractor witness then
/// reaches the target with probability one.
inline RegionResult as_reach_mask(const StochasticGame& g, Owner player, const std::vector<char>& target,
                                  const std::vector<char>& within) {
    std::vector<char> w = within;
    std::vector<int> witness(static_cast<std::size_t>(g.size()), -1);
    while (true) {
        std::vector<char> seed(static_cast<std::size_t>(g.size()), 0);
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && target[static_cast<std::size_t>(v)]) seed[static_cast<std::size_t>(v)] = 1;
        std::fill(witness.begin(), witness.end(), -1);
        std::vector<char> pos = pos_attr_mask(g, player, seed, w, &seed, &witness);
        std::vector<char> lost(static_cast<std::size_t>(g.size()), 0);
        bool any_lost = false;
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && !pos[static_cast<std::size_t>(v)]) {
                lost[static_cast<std::size_t>(v)] = 1;
                any_lost = true;
            }
        if (!any_lost) return {w, witness};
        std::vector<char> peeled = pos_attr_mask(g, opponent_of(player), lost, w, &seed, nullptr);
        for (int v = 0; v < g.size(); ++v)
            if (peeled[static_cast<std::size_t>(v)]) w[static_cast<std::size_t>(v)] = 0;
    }
}

/// Almost-sure Buchi: winner visits `target` infinitely often with
/// probability one. Repeatedly removes the opponent's positive attractor of
/// the region that cannot almost-surely re-reach the target.
inline RegionResult as_buchi_mask(const StochasticGame& g, Owner player, const std::vector<char>& target,
                                  const std::vector<char>& within) {
    std::vector<char> w = within;
    while (true) {
        RegionResult reach = as_reach_mask(g, player, target, w);
        std::vector<char> lost(static_cast<std::size_t>(g.size()), 0);
        bool any_lost = false;
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && !reach.winning[static_cast<std::size_t>(v)]) {
                lost[static_cast<std::size_t>(v)] = 1;
                any_lost = true;
            }
        if (!any_lost) {
            // Continue from target vertices with any in-region successor.
            for (int v = 0; v < g.size(); ++v) {
                if (!w[static_cast<std::size_t>(v)] || g.owner(v) != player) continue;
                if (reach.choice[static_cast<std::size_t>(v)] >= 0) continue;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (w[static_cast<std::size_t>(e.to)]) {
                        reach.choice[static_cast<std::size_t>(v)] = e.to;
                        break;
                    }
            }
            return {w, reach.choice};
        }
        std::vector<char> peeled = pos_attr_mask(g, opponent_of(player), lost, w, nullptr, nullptr);
        for (int v = 0; v < g.size(); ++v)
            if (peeled[static_cast<std::size_t>(v)]) w[static_cast<std::size_t>(v)] = 0;
    }
}

/// Almost-sure coBuchi: winner eventually stays in `safe` forever with
/// probability one. The region is the complement of the opponent's positive
/// Buchi region (positive winning of a prefix-independent objective is the
/// positive attractor of its almost-sure region). The witness strategy is
/// built in rounds over the solved set Z:
///   C: largest safe set closed up to Z (winner: some successor in C or Z;
///      opponent/chance: all successors in C or Z) -- entering C means
///      staying safe until possibly dropping into Z;
///   H: largest set closed up to C and Z whose unsafe members positively
///      attract to C or Z -- every unsafe visit carries a uniform escape
///      probability, so unsafe states recur finitely often almost surely;
///   the round then claims the almost-sure attractor of Z, C and H.
inline RegionResult as_cobuchi_mask(const StochasticGame& g, Owner player, const std::vector<char>& safe,
                                    const std::vector<char>& within) {
    Owner opp = opponent_of(player);
    std::vector<char> bad(static_cast<std::size_t>(g.size()), 0);
    for (int v = 0; v < g.size(); ++v)
        if (within[static_cast<std::size_t>(v)] && !safe[static_cast<std::size_t>(v)]) bad[static_cast<std::size_t>(v)] = 1;
    RegionResult opp_buchi = as_buchi_mask(g, opp, bad, within);
    std::vector<char> opp_positive = pos_attr_mask(g, opp, opp_buchi.winning, within, nullptr, nullptr);
    std::vector<char> w(static_cast<std::size_t>(g.size()), 0);
    for (int v = 0; v < g.size(); ++v)
        if (within[static_cast<std::size_t>(v)] && !opp_positive[static_cast<std::size_t>(v)]) w[static_cast<std::size_t>(v)] = 1;

    std::vector<int> choice(static_cast<std::size_t>(g.size()), -1);
    std::vector<char> solved(static_cast<std::size_t>(g.size()), 0);
    auto in_or = [&](const std::vector<char>& a, const std::vector<char>& b, int v) {
        return a[static_cast<std::size_t>(v)] || b[static_cast<std::size_t>(v)];
    };
    while (true) {
        bool left = false;
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && !solved[static_cast<std::size_t>(v)]) left = true;
        if (!left) break;

        // C: lenient safe core above the solved set.
        std::vector<char> core(static_cast<std::size_t>(g.size()), 0);
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && !solved[static_cast<std::size_t>(v)] && safe[static_cast<std::size_t>(v)])
                core[static_cast<std::size_t>(v)] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < g.size(); ++v) {
                if (!core[static_cast<std::size_t>(v)]) continue;
                bool ok;
                if (g.owner(v) == player) {
                    ok = false;
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (in_or(core, solved, e.to)) ok = true;
                } else {
                    ok = true;
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (!in_or(core, solved, e.to)) ok = false;
                }
                if (!ok) {
                    core[static_cast<std::size_t>(v)] = 0;
                    changed = true;
                }
            }
        }

        // H: closure with positively-escaping unsafe members.
        std::vector<char> escape(static_cast<std::size_t>(g.size()), 0);
        std::vector<int> esc_witness(static_cast<std::size_t>(g.size()), -1);
        std::vector<char> region(static_cast<std::size_t>(g.size()), 0);
        for (int v = 0; v < g.size(); ++v)
            if (w[static_cast<std::size_t>(v)] && !solved[static_cast<std::size_t>(v)] && !core[static_cast<std::size_t>(v)])
                region[static_cast<std::size_t>(v)] = 1;
        changed = true;
        while (changed) {
            changed = false;
            std::vector<char> seed(static_cast<std::size_t>(g.size()), 0);
            std::vector<char> arena(static_cast<std::size_t>(g.size()), 0);
            for (int v = 0; v < g.size(); ++v) {
                if (core[static_cast<std::size_t>(v)] || solved[static_cast<std::size_t>(v)]) {
                    seed[static_cast<std::size_t>(v)] = 1;
                    arena[static_cast<std::size_t>(v)] = 1;
                } else if (region[static_cast<std::size_t>(v)]) {
                    arena[static_cast<std::size_t>(v)] = 1;
                }
            }
            std::fill(esc_witness.begin(), esc_witness.end(), -1);
            escape = pos_attr_mask(g, player, seed, arena, &seed, &esc_witness);
            for (int v = 0; v < g.size(); ++v) {
                if (!region[static_cast<std::size_t>(v)]) continue;
                bool ok;
                if (!safe[static_cast<std::size_t>(v)] && !escape[static_cast<std::size_t>(v)]) ok = false;
                else if (g.owner(v) == player) {
                    ok = false;
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (region[static_cast<std::size_t>(e.to)] || in_or(core, solved, e.to)) ok = true;
                } else {
                    ok = true;
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (!region[static_cast<std::size_t>(e.to)] && !in_or(core, solved, e.to)) ok = false;
                }
                if (!ok) {
                    region[static_cast<std::size_t>(v)] = 0;
                    changed = true;
                }
            }
        }

        std::vector<char> target(static_cast<std::size_t>(g.size()), 0);
        for (int v = 0; v < g.size(); ++v)
            target[static_cast<std::size_t>(v)] =
                (solved[static_cast<std::size_t>(v)] || core[static_cast<std::size_t>(v)] || region[static_cast<std::size_t>(v)]) ? 1 : 0;
        RegionResult reach = as_reach_mask(g, player, target, w);
        bool grew = false;
        for (int v = 0; v < g.size(); ++v)
            if (reach.winning[static_cast<std::size_t>(v)] && !solved[static_cast<std::size_t>(v)]) grew = true;
        if (!grew) {
            // The residue has no layer structure to exploit (the winner may
            // simply have nothing useful to decide there, with chance and
            // the opponent defeating themselves). Enumerate the residue's
            // choices and certify exactly: a choice wins from everywhere
            // iff all end components it leaves are safe.
            std::vector<int> residue_vertices;
            long long combos = 1;
            for (int v = 0; v < g.size(); ++v) {
                if (!w[static_cast<std::size_t>(v)] || g.owner(v) != player) continue;
                if (solved[static_cast<std::size_t>(v)] && choice[static_cast<std::size_t>(v)] >= 0) continue;
                residue_vertices.push_back(v);
                int options = 0;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (w[static_cast<std::size_t>(e.to)]) ++options;
                combos *= std::max(options, 1);
                if (combos > 300000) throw error("as_cobuchi: residue too large to certify");
            }
            std::vector<std::vector<int>> options(residue_vertices.size());
            for (std::size_t i = 0; i < residue_vertices.size(); ++i) {
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(residue_vertices[i])])
                    if (w[static_cast<std::size_t>(e.to)]) options[i].push_back(e.to);
                if (options[i].empty()) options[i].push_back(g.out[static_cast<std::size_t>(residue_vertices[i])].front().to);
            }
            std::vector<std::size_t> pick(residue_vertices.size(), 0);
            bool found = false;
            while (!found) {
                std::vector<int> candidate = choice;
                for (std::size_t i = 0; i < residue_vertices.size(); ++i)
                    candidate[static_cast<std::size_t>(residue_vertices[i])] = options[i][pick[i]];
                if (cobuchi_choice_certified(g, player, safe, w, candidate)) {
                    choice = candidate;
                    found = true;
                    break;
                }
                std::size_t pos = 0;
                while (pos < pick.size()) {
                    if (++pick[pos] < options[pos].size()) break;
                    pick[pos++] = 0;
                }
                if (pos == pick.size()) break;
            }
            if (!found) throw error("as_cobuchi: no certifiable residue choice (internal)");
            return {w, choice};
        }

        for (int v = 0; v < g.size(); ++v) {
            if (solved[static_cast<std::size_t>(v)] || !reach.winning[static_cast<std::size_t>(v)]) continue;
            if (g.owner(v) == player) {
                if (core[static_cast<std::size_t>(v)]) {
                    for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                        if (in_or(core, solved, e.to)) {
                            choice[static_cast<std::size_t>(v)] = e.to;
                            break;
                        }
                } else if (region[static_cast<std::size_t>(v)]) {
                    if (esc_witness[static_cast<std::size_t>(v)] >= 0) {
                        choice[static_cast<std::size_t>(v)] = esc_witness[static_cast<std::size_t>(v)];
                    } else {
                        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                            if (region[static_cast<std::size_t>(e.to)] || core[static_cast<std::size_t>(e.to)] ||
                                solved[static_cast<std::size_t>(e.to)]) {
                                choice[static_cast<std::size_t>(v)] = e.to;
                                break;
                            }
                    }
                } else {
                    choice[static_cast<std::size_t>(v)] = reach.choice[static_cast<std::size_t>(v)];
                }
            }
        }
        for (int v = 0; v < g.size(); ++v)
            if (reach.winning[static_cast<std::size_t>(v)]) solved[static_cast<std::size_t>(v)] = 1;
    }
    return {w, choice};
}

}  // namespace detail

/// Memoryless machine from a per-vertex choice table, defaulting unowned or
/// unset entries so it is well-formed on `g`.
inline StrategyMachine memoryless_machine(const StochasticGame& g, Owner player, const std::vector<int>& choice) {
    std::vector<int> c(static_cast<std::size_t>(g.size()), kSkip);
    for (int v = 0; v < g.size(); ++v) {
        if (g.owner(v) != player) continue;
        int x = choice[static_cast<std::size_t>(v)];
        c[static_cast<std::size_t>(v)] = (x >= 0 && g.has_edge(v, x)) ? x : g.out[static_cast<std::size_t>(v)].front().to;
    }
    return StrategyMachine::memoryless(player, c);
}

inline std::vector<int> all_vertices(const StochasticGame& g) {
    std::vector<int> r;
    for (int v = 0; v < g.size(); ++v) r.push_back(v);
    return r;
}

/// Vertices from which `player` reaches `target` with probability 1 against
/// all opposition, with a memoryless witness.
inline QualitativeResult almost_sure_reach(const StochasticGame& g, Owner player, const std::vector<int>& target) {
    auto res = detail::as_reach_mask(g, player, detail::to_mask(g.size(), target), detail::to_mask(g.size(), all_vertices(g)));
    return {detail::to_set(res.winning), memoryless_machine(g, player, res.choice), QualMode::AlmostSure};
}

/// Almost-sure "visit target_set infinitely often".
inline QualitativeResult almost_sure_buchi(const StochasticGame& g, Owner player, const std::vector<int>& target_set) {
    auto res = detail::as_buchi_mask(g, player, detail::to_mask(g.size(), target_set), detail::to_mask(g.size(), all_vertices(g)));
    return {detail::to_set(res.winning), memoryless_machine(g, player, res.choice), QualMode::AlmostSure};
}

/// Almost-sure "eventually forever inside safe_set".
inline QualitativeResult almost_sure_cobuchi(const StochasticGame& g, Owner player, const std::vector<int>& safe_set) {
    auto res = detail::as_cobuchi_mask(g, player, detail::to_mask(g.size(), safe_set), detail::to_mask(g.size(), all_vertices(g)));
    return {detail::to_set(res.winning), memoryless_machine(g, player, res.choice), QualMode::AlmostSure};
}

/// Almost-sure decision for the threshold objective {FWMP(l) > t} (strict)
/// or {FWMP(l) >= t}: Max decides the objective itself, Min its complement.
/// Decided on the history product, where the objective is a coBuchi (resp.
/// Buchi) condition on the per-vertex window payoffs; winning product
/// strategies unroll to Mealy machines over the base game.
inline QualitativeResult almost_sure_fwmp(const StochasticGame& g, Owner player, int window_length,
                                          const Rat& threshold, bool strict) {
    ProductGame pg = build_history_product(g, window_length, all_vertices(g));
    const StochasticGame& p = pg.product;
    std::vector<char> good(static_cast<std::size_t>(p.size()), 0);
    for (int v = 0; v < p.size(); ++v) {
        const Rat& w = pg.out_payoff[static_cast<std::size_t>(v)];
        if (strict ? w > threshold : w >= threshold) good[static_cast<std::size_t>(v)] = 1;
    }
    std::vector<char> all = detail::to_mask(p.size(), all_vertices(p));
    detail::RegionResult res;
    if (player == Owner::Max) {
        res = detail::as_cobuchi_mask(p, Owner::Max, good, all);
    } else {
        std::vector<char> bad(static_cast<std::size_t>(p.size()), 0);
        for (int v = 0; v < p.size(); ++v) bad[static_cast<std::size_t>(v)] = good[static_cast<std::size_t>(v)] ? 0 : 1;
        res = detail::as_buchi_mask(p, Owner::Min, bad, all);
    }
    QualitativeResult out;
    out.mode = QualMode::AlmostSure;
    for (int v = 0; v < g.size(); ++v)
        if (res.winning[static_cast<std::size_t>(pg.padded(v))]) out.winning.push_back(v);
    out.strategy = history_strategy_machine(pg, player, res.choice);
    return out;
}

/// Decision procedure interface for almost-sure BWMP threshold objectives;
/// implementations may be swapped in where a dedicated algorithm exists.
struct BwmpDecider {
    virtual ~BwmpDecider() = default;
    /// Almost-sure winning set for {BWMP > t} / {BWMP >= t} (player Max) or
    /// its complement (player Min), plus a Max-side memoryless witness.
    virtual QualitativeResult decide(const StochasticGame& g, Owner player, const Rat& threshold,
                                     bool strict) const = 0;
};

/// Shipped default: enumerate Max memoryless strategies (memoryless
/// strategies suffice for Max); under a fixed strategy, Max wins almost
/// surely from v iff every end component reachable from v has minimum cycle
/// mean above the threshold. Min's side is the complement of Max's positive
/// region, which is the positive attractor of Max's almost-sure region.
struct ExhaustiveBwmpDecider : BwmpDecider {
    long long max_strategies = 200000;

    QualitativeResult decide(const StochasticGame& g, Owner player, const Rat& threshold,
                             bool strict) const override {
        std::vector<int> max_vertices;
        long long combos = 1;
        for (int v = 0; v < g.size(); ++v)
            if (g.owner(v) == Owner::Max) {
                max_vertices.push_back(v);
                combos *= static_cast<long long>(g.out[static_cast<std::size_t>(v)].size());
                if (combos > max_strategies)
                    throw error("bwmp oracle: game too large for exhaustive enumeration");
            }
        std::vector<char> win_mask(static_cast<std::size_t>(g.size()), 0);
        std::vector<int> best_choice(static_cast<std::size_t>(g.size()), -1);
        int best_count = -1;
        std::vector<std::vector<char>> per_strategy_win;
        std::vector<std::vector<int>> per_strategy_choice;
        std::vector<std::size_t> pick(max_vertices.size(), 0);
        while (true) {
            // Forced game: Max vertices keep only the picked edge.
            StochasticGame forced;
            forced.name = g.name;
            for (int v = 0; v < g.size(); ++v) forced.add_vertex(g.ids[v], g.owner(v));
            for (int v = 0; v < g.size(); ++v) {
                if (g.owner(v) == Owner::Max) continue;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) forced.add_edge(v, e.to, e.payoff, e.prob);
            }
            for (std::size_t i = 0; i < max_vertices.size(); ++i) {
                const HalfEdge& e = g.out[static_cast<std::size_t>(max_vertices[i])][pick[i]];
                forced.add_edge(max_vertices[i], e.to, e.payoff, e.prob);
            }
            forced.finalize();
            MecDecomposition mecs = mec_decompose(forced);
            std::vector<char> mec_ok(mecs.mecs.size(), 0);
            for (std::size_t k = 0; k < mecs.mecs.size(); ++k) {
                Rat gamma = min_mean_cycle(forced, mecs.mecs[k]).first;
                mec_ok[k] = (strict ? gamma > threshold : gamma >= threshold) ? 1 : 0;
            }
            // v wins under this strategy iff no bad MEC is reachable.
            std::vector<char> can_reach_bad(static_cast<std::size_t>(g.size()), 0);
            for (std::size_t k = 0; k < mecs.mecs.size(); ++k)
                if (!mec_ok[k])
                    for (int v : mecs.mecs[k]) can_reach_bad[static_cast<std::size_t>(v)] = 1;
            bool changed = true;
            while (changed) {
                changed = false;
                for (int v = 0; v < g.size(); ++v) {
                    if (can_reach_bad[static_cast<std::size_t>(v)]) continue;
                    for (const HalfEdge& e : forced.out[static_cast<std::size_t>(v)])
                        if (can_reach_bad[static_cast<std::size_t>(e.to)]) {
                            can_reach_bad[static_cast<std::size_t>(v)] = 1;
                            changed = true;
                            break;
                        }
                }
            }
            int count = 0;
            std::vector<char> this_win(static_cast<std::size_t>(g.size()), 0);
            std::vector<int> this_choice(static_cast<std::size_t>(g.size()), -1);
            for (std::size_t i = 0; i < max_vertices.size(); ++i)
                this_choice[static_cast<std::size_t>(max_vertices[i])] =
                    g.out[static_cast<std::size_t>(max_vertices[i])][pick[i]].to;
            for (int v = 0; v < g.size(); ++v)
                if (!can_reach_bad[static_cast<std::size_t>(v)]) {
                    this_win[static_cast<std::size_t>(v)] = 1;
                    win_mask[static_cast<std::size_t>(v)] = 1;
                    ++count;
                }
            if (count > best_count) {
                best_count = count;
                best_choice = this_choice;
            }
            per_strategy_win.push_back(std::move(this_win));
            per_strategy_choice.push_back(std::move(this_choice));
            // next strategy
            std::size_t pos = 0;
            while (pos < pick.size()) {
                if (++pick[pos] < g.out[static_cast<std::size_t>(max_vertices[pos])].size()) break;
                pick[pos++] = 0;
            }
            if (pos == pick.size()) break;
        }
        // Prefer a strategy winning from the whole union (memoryless
        // strategies suffice uniformly for Max here).
        for (std::size_t s = 0; s < per_strategy_win.size(); ++s)
            if (per_strategy_win[s] == win_mask) {
                best_choice = per_strategy_choice[s];
                break;
            }
        QualitativeResult max_side;
        max_side.mode = QualMode::AlmostSure;
        max_side.winning = detail::to_set(win_mask);
        max_side.strategy = memoryless_machine(g, Owner::Max, best_choice);
        if (player == Owner::Max) return max_side;

        // Min wins the complement almost surely iff Max cannot even
        // positively win, i.e. outside the positive attractor of Max's
        // almost-sure region.
        std::vector<char> all = detail::to_mask(g.size(), all_vertices(g));
        std::vector<char> pos = detail::pos_attr_mask(g, Owner::Max, win_mask, all, nullptr, nullptr);
        QualitativeResult min_side;
        min_side.mode = QualMode::AlmostSure;
        for (int v = 0; v < g.size(); ++v)
            if (!pos[static_cast<std::size_t>(v)]) min_side.winning.push_back(v);
        // Min may need infinite memory for BWMP; no machine is reported.
        return min_side;
    }
};

inline const BwmpDecider& default_bwmp_decider() {
    static ExhaustiveBwmpDecider d;
    return d;
}

inline QualitativeResult almost_sure_bwmp(const StochasticGame& g, Owner player, const Rat& threshold,
                                          bool strict, const BwmpDecider* oracle = nullptr) {
    return (oracle ? *oracle : default_bwmp_decider()).decide(g, player, threshold, strict);
}

}  // namespace wmpg

#endif
