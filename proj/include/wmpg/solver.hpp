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

#ifndef WMPG_SOLVER_HPP
#define WMPG_SOLVER_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wmpg/boundary.hpp"
#include "wmpg/bounds.hpp"
#include "wmpg/chainvalue.hpp"
#include "wmpg/mdp.hpp"
#include "wmpg/product.hpp"
#include "wmpg/verifier.hpp"

namespace wmpg {

struct SolveOptions {
    int product_cap = 200;           // brute-force product size guard
    long long enum_cap = 200000;     // reachability-distinct strategy enumeration guard
    int improvement_rounds = 60;     // best-response alternation cap
    long long search_nodes = 2000000;  // exhaustive-search work guard
    const BwmpDecider* bwmp_oracle = nullptr;
};

namespace detail {

struct ArenaRef {
    const StochasticGame* arena;          // product (FWMP) or base game (BWMP)
    const ProductGame* pg;                // null for BWMP
    MdpObjective obj;
};

inline std::vector<int> initial_max_choice(const ArenaRef& a) {
    const StochasticGame& g = *a.arena;
    std::vector<int> choice(static_cast<std::size_t>(g.size()), -1);
    for (int v = 0; v < g.size(); ++v) {
        if (g.owner(v) != Owner::Max) continue;
        int best = g.out[static_cast<std::size_t>(v)].front().to;
        if (a.pg) {
            for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                if (a.pg->out_payoff[static_cast<std::size_t>(e.to)] >
                    a.pg->out_payoff[static_cast<std::size_t>(best)])
                    best = e.to;
        }
        choice[static_cast<std::size_t>(v)] = best;
    }
    return choice;
}

inline MdpSolution min_best_response(const ArenaRef& a, const std::vector<int>& max_choice) {
    return solve_mdp(force_strategy(*a.arena, Owner::Max, max_choice), Owner::Min, false, a.obj);
}

/// Pointwise maximum of the exact Min best-response values over all Max
/// memoryless strategies: the exact value vector whenever memoryless
/// strategies suffice for Max on the analyzed arena. Strategies are
/// enumerated up to reachability: a choice is only branched on where the
/// partial strategy (with the other player and chance free) can steer the
/// play, since unreachable choices cannot affect the guarantee.
inline std::optional<std::vector<Rat>> enumerate_max_side(const ArenaRef& a, long long cap) {
    const StochasticGame& arena = *a.arena;
    const int n = arena.size();
    std::vector<int> choice(static_cast<std::size_t>(n), -1);
    std::optional<std::vector<Rat>> best;
    long long leaves = 0;

    // Only the values at the reported start vertices matter (the padded
    // tuples on a history product), so reachability is seeded there.
    std::vector<int> starts;
    if (a.pg)
        for (const auto& [base, tuple] : a.pg->padded_of) starts.push_back(tuple);
    else
        for (int v = 0; v < n; ++v) starts.push_back(v);

    // Smallest undecided Max vertex reachable from a start when Min and
    // chance move freely and Max follows the partial choice.
    auto next_undecided = [&]() {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack;
        for (int v : starts) {
            stack.push_back(v);
            seen[static_cast<std::size_t>(v)] = 1;
        }
        int found = -1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (arena.owner(v) == Owner::Max) {
                int c = choice[static_cast<std::size_t>(v)];
                if (c < 0) {
                    if (found < 0 || v < found) found = v;
                    continue;
                }
                if (!seen[static_cast<std::size_t>(c)]) {
                    seen[static_cast<std::size_t>(c)] = 1;
                    stack.push_back(c);
                }
                continue;
            }
            for (const HalfEdge& e : arena.out[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(e.to)]) {
                    seen[static_cast<std::size_t>(e.to)] = 1;
                    stack.push_back(e.to);
                }
        }
        return found;
    };

    auto rec = [&](auto&& self) -> bool {
        int v = next_undecided();
        if (v < 0) {
            if (++leaves > cap) return false;
            std::vector<int> full = choice;
            for (int u = 0; u < n; ++u)
                if (arena.owner(u) == Owner::Max && full[static_cast<std::size_t>(u)] < 0)
                    full[static_cast<std::size_t>(u)] = arena.out[static_cast<std::size_t>(u)].front().to;
            MdpSolution br = min_best_response(a, full);
            if (!best) best = br.value;
            else
                for (std::size_t i = 0; i < best->size(); ++i)
                    if (br.value[i] > (*best)[i]) (*best)[i] = br.value[i];
            return true;
        }
        for (const HalfEdge& e : arena.out[static_cast<std::size_t>(v)]) {
            choice[static_cast<std::size_t>(v)] = e.to;
            if (!self(self)) return false;
        }
        choice[static_cast<std::size_t>(v)] = -1;
        return true;
    };
    if (!rec(rec)) return std::nullopt;
    return best;
}

struct BrOutcome {
    std::vector<Rat> low;                 // pointwise best Max-side guarantee seen
    std::optional<std::vector<Rat>> high;  // pointwise best Min-side concession seen
    bool certified = false;               // low == high: both equal the value
};

/// Alternating exact best responses: Min answers the current Max strategy
/// exactly, Max answers Min's policy exactly. Each Min answer yields a
/// valid lower bound on the value vector and each Max answer a valid upper
/// bound, so the running pointwise envelopes certify the value as soon as
/// they meet, even when the strategy dynamics oscillate. For the
/// bounded-window objective no in-component maximizer is available and a
/// greedy improvement loop runs instead (uncertified).
inline BrOutcome best_response_iteration(const ArenaRef& a, int rounds) {
    std::vector<int> choice = initial_max_choice(a);
    MdpSolution minbr = min_best_response(a, choice);
    BrOutcome out;
    out.low = minbr.value;
    if (a.obj != MdpObjective::Liminf) {
        const StochasticGame& g = *a.arena;
        for (int r = 0; r < rounds; ++r) {
            bool improved = false;
            for (int v = 0; v < g.size(); ++v) {
                if (g.owner(v) != Owner::Max) continue;
                int best = choice[static_cast<std::size_t>(v)];
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (minbr.value[static_cast<std::size_t>(e.to)] > minbr.value[static_cast<std::size_t>(best)])
                        best = e.to;
                if (best != choice[static_cast<std::size_t>(v)]) {
                    choice[static_cast<std::size_t>(v)] = best;
                    improved = true;
                }
            }
            if (!improved) break;
            minbr = min_best_response(a, choice);
            for (std::size_t i = 0; i < out.low.size(); ++i)
                if (minbr.value[i] > out.low[i]) out.low[i] = minbr.value[i];
        }
        return out;
    }
    for (int r = 0; r < rounds; ++r) {
        MdpSolution maxbr =
            solve_mdp(force_strategy(*a.arena, Owner::Min, minbr.choice), Owner::Max, true, MdpObjective::Liminf);
        if (!out.high) out.high = maxbr.value;
        else
            for (std::size_t i = 0; i < out.high->size(); ++i)
                if (maxbr.value[i] < (*out.high)[i]) (*out.high)[i] = maxbr.value[i];
        if (out.low == *out.high) {
            out.certified = true;
            return out;
        }
        choice = maxbr.choice;
        minbr = min_best_response(a, choice);
        for (std::size_t i = 0; i < out.low.size(); ++i)
            if (minbr.value[i] > out.low[i]) out.low[i] = minbr.value[i];
        if (out.low == *out.high) {
            out.certified = true;
            return out;
        }
    }
    return out;
}

inline std::vector<Rat> project_to_base(const ArenaRef& a, const StochasticGame& g, const std::vector<Rat>& val) {
    if (!a.pg) return val;
    std::vector<Rat> out(static_cast<std::size_t>(g.size()));
    for (int v = 0; v < g.size(); ++v) out[static_cast<std::size_t>(v)] = val[static_cast<std::size_t>(a.pg->padded(v))];
    return out;
}

}  // namespace detail

/// Heuristic candidate generator: strategy improvement with exact best
/// responses on the history product (FWMP) or the base game (BWMP), then
/// best rational approximation within the denominator bound. The result is
/// a candidate only; it carries no guarantee until verify accepts it.
inline std::vector<Rat> estimate_and_round(const StochasticGame& g, ObjectiveKind kind, int window_length,
                                           const DenominatorBounds& bounds, int rounds = 60) {
    std::optional<ProductGame> pg;
    detail::ArenaRef a{&g, nullptr, MdpObjective::BwmpMinCycle};
    if (kind == ObjectiveKind::Fwmp) {
        pg = build_history_product(g, window_length, all_vertices(g));
        a = {&pg->product, &*pg, MdpObjective::Liminf};
    }
    std::vector<Rat> val;
    if (kind == ObjectiveKind::Bwmp) {
        // Memoryless strategies suffice for Max here, so enumerating them
        // against exact best responses is exact at desk scale.
        if (auto exact = detail::enumerate_max_side(a, 65536)) val = std::move(*exact);
    }
    if (val.empty()) val = detail::best_response_iteration(a, rounds).low;
    std::vector<Rat> base = detail::project_to_base(a, g, val);
    for (Rat& x : base) x = best_approximation(x, bounds.global_bound);
    return base;
}

/// Independent expected-value oracle. FWMP: works on the history product
/// (state count capped); BWMP: on the base game, where memoryless Max
/// strategies suffice. Enumerates all Max memoryless strategies with exact
/// Min best responses when feasible; otherwise iterates best responses and
/// only returns when the Max-side guarantee meets the Min-side guarantee
/// exactly (a sandwich certificate). Throws when the caps are exceeded.
inline std::vector<Rat> brute_force_expected_values(const StochasticGame& g, ObjectiveKind kind,
                                                    int window_length, const SolveOptions& opt = {}) {
    std::optional<ProductGame> pg;
    detail::ArenaRef a{&g, nullptr, MdpObjective::BwmpMinCycle};
    if (kind == ObjectiveKind::Fwmp) {
        pg = build_history_product(g, window_length, all_vertices(g));
        if (pg->product.size() > opt.product_cap)
            throw error("brute force: product has " + std::to_string(pg->product.size()) +
                        " states, cap is " + std::to_string(opt.product_cap));
        a = {&pg->product, &*pg, MdpObjective::Liminf};
    }
    if (kind == ObjectiveKind::Bwmp) {
        if (auto exact = detail::enumerate_max_side(a, opt.enum_cap)) return detail::project_to_base(a, g, *exact);
        throw error("brute force: too many Max strategies to enumerate");
    }
    // Sandwich route first: pointwise envelopes of exact guarantees from
    // both sides; equality on the base projection certifies the value
    // there. Stubborn games (best-response dynamics can stall with a gap)
    // fall back to enumeration of reachability-distinct Max strategies.
    detail::BrOutcome out = detail::best_response_iteration(a, opt.improvement_rounds);
    std::vector<Rat> low = detail::project_to_base(a, g, out.low);
    if (out.certified) return low;
    if (out.high && low == detail::project_to_base(a, g, *out.high)) return low;
    if (auto exact = detail::enumerate_max_side(a, opt.enum_cap)) return detail::project_to_base(a, g, *exact);
    throw error("brute force: envelopes did not close and enumeration exceeds the cap");
}

struct SolveError : error {
    std::vector<std::pair<std::vector<Rat>, std::string>> rejected;  // candidate, failing condition
    using error::error;
};

namespace detail {

/// Candidate thresholds for classes without boundary vertices: window means
/// for FWMP, simple-cycle means for BWMP.
inline std::vector<Rat> class_value_candidates(const StochasticGame& g, ObjectiveKind kind, int window_length) {
    if (kind == ObjectiveKind::Fwmp) return candidate_values(g, all_vertices(g), window_length);
    std::set<Rat> means;
    // All simple cycles, canonicalized by smallest starting vertex.
    std::vector<int> path;
    std::vector<char> on(static_cast<std::size_t>(g.size()), 0);
    auto dfs = [&](auto&& self, int start, int v, Rat sum) -> void {
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
            if (e.to == start) means.insert((sum + e.payoff) / Rat(static_cast<int>(path.size())));
            if (e.to > start && !on[static_cast<std::size_t>(e.to)]) {
                on[static_cast<std::size_t>(e.to)] = 1;
                path.push_back(e.to);
                self(self, start, e.to, sum + e.payoff);
                path.pop_back();
                on[static_cast<std::size_t>(e.to)] = 0;
            }
        }
    };
    for (int s = 0; s < g.size(); ++s) {
        on.assign(static_cast<std::size_t>(g.size()), 0);
        on[static_cast<std::size_t>(s)] = 1;
        path.assign(1, s);
        dfs(dfs, s, s, Rat(0));
    }
    return std::vector<Rat>(means.begin(), means.end());
}

constexpr int kFree = -1;

/// Incremental Bellman consistency of a partial assignment (theta index per
/// vertex, kFree for members of boundary classes, kUnset beyond the frontier).
inline bool partial_consistent(const StochasticGame& g, const std::vector<Rat>& theta,
                               const std::vector<int>& assign, int frontier) {
    for (int v = 0; v <= frontier; ++v) {
        int av = assign[static_cast<std::size_t>(v)];
        if (av == kFree) continue;
        const Rat& x = theta[static_cast<std::size_t>(av)];
        bool all_known = true, has_free = false;
        bool saw = false;
        Rat extreme;
        Rat weighted(0);
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
            if (e.to > frontier) {
                all_known = false;
                continue;
            }
            int at = assign[static_cast<std::size_t>(e.to)];
            if (at == kFree) {
                has_free = true;
                continue;
            }
            const Rat& y = theta[static_cast<std::size_t>(at)];
            if (g.owner(v) == Owner::Max && y > x) return false;
            if (g.owner(v) == Owner::Min && y < x) return false;
            if (!saw || (g.owner(v) == Owner::Max ? y > extreme : y < extreme)) extreme = y;
            saw = true;
            weighted += g.owner(v) == Owner::Random ? Rat(e.prob * y) : Rat(0);
        }
        if (all_known && !has_free) {
            if (g.owner(v) == Owner::Random) {
                if (weighted != x) return false;
            } else if (!saw || extreme != x) {
                return false;
            }
        }
    }
    return true;
}

/// Enumerates partitions of `free_vertices` (restricted growth strings),
/// solves the boundary system for each, and emits full candidate vectors
/// that satisfy the Bellman equations exactly.
inline void complete_free_blocks(const StochasticGame& g, const std::vector<Rat>& theta,
                                 const std::vector<int>& assign, std::set<std::vector<Rat>>& out,
                                 long long& budget) {
    std::vector<int> free_vertices;
    for (int v = 0; v < g.size(); ++v)
        if (assign[static_cast<std::size_t>(v)] == kFree) free_vertices.push_back(v);

    // Committed classes grouped by value.
    std::map<Rat, std::vector<int>> committed;
    for (int v = 0; v < g.size(); ++v)
        if (assign[static_cast<std::size_t>(v)] != kFree)
            committed[theta[static_cast<std::size_t>(assign[static_cast<std::size_t>(v)])]].push_back(v);

    auto emit = [&](const std::vector<std::vector<int>>& blocks) {
        if (--budget < 0) throw error("solve: exhaustive search budget exceeded");
        std::vector<std::vector<int>> classes;
        std::vector<std::optional<Rat>> known;
        for (const auto& [val, verts] : committed) {
            classes.push_back(verts);
            known.push_back(val);
        }
        for (const auto& b : blocks) {
            classes.push_back(b);
            known.push_back(std::nullopt);
        }
        BoundaryLinearSystem sys;
        try {
            sys = solve_boundary_system(g, classes, known);
        } catch (const error&) {
            return;  // ill-posed partition
        }
        std::vector<Rat> vec(static_cast<std::size_t>(g.size()));
        for (std::size_t k = 0; k < classes.size(); ++k) {
            Rat val;
            if (known[k]) val = *known[k];
            else {
                auto it = std::find(sys.boundary_class.begin(), sys.boundary_class.end(), static_cast<int>(k));
                val = sys.solution[static_cast<std::size_t>(it - sys.boundary_class.begin())];
            }
            for (int v : classes[k]) vec[static_cast<std::size_t>(v)] = val;
        }
        if (!check_bellman(g, vec)) out.insert(std::move(vec));
    };

    if (free_vertices.empty()) {
        std::vector<Rat> vec(static_cast<std::size_t>(g.size()));
        for (int v = 0; v < g.size(); ++v) vec[static_cast<std::size_t>(v)] = theta[static_cast<std::size_t>(assign[static_cast<std::size_t>(v)])];
        if (--budget < 0) throw error("solve: exhaustive search budget exceeded");
        if (!check_bellman(g, vec)) out.insert(std::move(vec));
        return;
    }

    std::size_t f = free_vertices.size();
    std::vector<int> rgs(f, 0);
    while (true) {
        int blocks_n = *std::max_element(rgs.begin(), rgs.end()) + 1;
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(blocks_n));
        for (std::size_t i = 0; i < f; ++i) blocks[static_cast<std::size_t>(rgs[i])].push_back(free_vertices[i]);
        // Every block needs a boundary vertex: a Random member with a
        // successor outside the block.
        bool ok = true;
        for (const auto& b : blocks) {
            std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
            for (int v : b) in[static_cast<std::size_t>(v)] = 1;
            bool has = false;
            for (int v : b) {
                if (g.owner(v) != Owner::Random) continue;
                for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
                    if (!in[static_cast<std::size_t>(e.to)]) has = true;
            }
            if (!has) ok = false;
        }
        if (ok) emit(blocks);
        // next restricted growth string
        int i = static_cast<int>(f) - 1;
        while (i > 0) {
            int cap = *std::max_element(rgs.begin(), rgs.begin() + i) + 1;
            if (rgs[static_cast<std::size_t>(i)] < cap) break;
            --i;
        }
        if (i <= 0) break;
        ++rgs[static_cast<std::size_t>(i)];
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < f; ++j) rgs[j] = 0;
    }
}

inline std::vector<std::vector<Rat>> theta_class_search(const StochasticGame& g, ObjectiveKind kind,
                                                        int window_length, const SolveOptions& opt) {
    if (g.size() > 8) throw error("solve: exhaustive fallback capped at 8 vertices");
    std::vector<Rat> theta = class_value_candidates(g, kind, window_length);
    if (static_cast<int>(theta.size()) > 64) throw error("solve: exhaustive fallback capped at 64 candidate values");
    std::set<std::vector<Rat>> found;
    std::vector<int> assign(static_cast<std::size_t>(g.size()), 0);
    long long budget = opt.search_nodes;
    auto rec = [&](auto&& self, int v) -> void {
        if (--budget < 0) throw error("solve: exhaustive search budget exceeded");
        if (v == g.size()) {
            complete_free_blocks(g, theta, assign, found, budget);
            return;
        }
        for (int t = 0; t <= static_cast<int>(theta.size()); ++t) {
            assign[static_cast<std::size_t>(v)] = t == static_cast<int>(theta.size()) ? kFree : t;
            if (partial_consistent(g, theta, assign, v)) self(self, v + 1);
        }
    };
    rec(rec, 0);
    return std::vector<std::vector<Rat>>(found.begin(), found.end());
}

}  // namespace detail

struct SolveReport {
    enum class Method { EstimateRound, Exhaustive, UserSupplied };
    std::vector<Rat> values;
    Method method = Method::EstimateRound;
    VerificationReport verification;
    DenominatorBounds bounds;
    std::vector<std::string> provenance;  // per class, ascending value: "theta" or "linsys"
};

/// Guess-and-verify pipeline: compute bounds, generate a candidate by
/// strategy improvement and rounding, verify; on rejection fall back to the
/// exhaustive class-structure search; only verified vectors are reported.
inline SolveReport solve(const StochasticGame& g, ObjectiveKind kind, int window_length = 1,
                         const SolveOptions& opt = {}) {
    SolveReport rep;
    rep.bounds = compute_bounds(g, kind, window_length);
    std::vector<std::pair<std::vector<Rat>, std::string>> rejected;

    auto attempt = [&](const std::vector<Rat>& cand, SolveReport::Method method) -> bool {
        VerificationReport vr = verify(g, cand, kind, window_length, rep.bounds.global_bound, opt.bwmp_oracle);
        if (!vr.accepted) {
            rejected.emplace_back(cand, vr.failing_condition());
            return false;
        }
        rep.values = cand;
        rep.method = method;
        rep.verification = std::move(vr);
        return true;
    };

    bool done = attempt(estimate_and_round(g, kind, window_length, rep.bounds, opt.improvement_rounds),
                        SolveReport::Method::EstimateRound);
    if (!done) {
        std::vector<std::vector<Rat>> cands;
        try {
            cands = detail::theta_class_search(g, kind, window_length, opt);
        } catch (const error& e) {
            SolveError se(std::string("solve: no verified candidate (") + e.what() + ")");
            se.rejected = rejected;
            throw se;
        }
        for (const auto& c : cands)
            if (attempt(c, SolveReport::Method::Exhaustive)) {
                done = true;
                break;
            }
    }
    if (!done) {
        SolveError se("solve: no candidate passed verification within the configured caps");
        se.rejected = rejected;
        throw se;
    }
    for (const ValueClass& c : rep.verification.decomposition->classes)
        rep.provenance.push_back(c.boundary.empty() ? "theta" : "linsys");
    return rep;
}

}  // namespace wmpg

#endif
