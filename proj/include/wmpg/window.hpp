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

#ifndef WMPG_WINDOW_HPP
#define WMPG_WINDOW_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "wmpg/game.hpp"

namespace wmpg {

enum class ObjectiveKind { Fwmp, Bwmp };

/// Window mean-payoff objective description: FWMP carries a window length,
/// BWMP quantifies it away. `at_least` distinguishes the Max-side threshold
/// objective from its complement.
struct WindowObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::Fwmp;
    int window_length = 1;  // FWMP only
    Rat threshold;
    bool at_least = true;

    void check() const {
        if (kind == ObjectiveKind::Fwmp && window_length < 1)
            throw error("window length must be >= 1");
    }
};

/// Arithmetic mean of a nonempty payoff sequence.
inline Rat infix_mean(const std::vector<Rat>& payoffs) {
    if (payoffs.empty()) throw error("infix_mean: empty sequence");
    Rat sum(0);
    for (const Rat& p : payoffs) sum += p;
    return sum / Rat(static_cast<int>(payoffs.size()));
}

/// Smallest k <= max_len such that the mean of the first k payoffs reaches
/// the threshold; nullopt when the window stays open.
inline std::optional<int> window_closes(const std::vector<Rat>& payoffs, const Rat& threshold, int max_len) {
    Rat sum(0);
    int limit = std::min<int>(max_len, static_cast<int>(payoffs.size()));
    for (int k = 1; k <= limit; ++k) {
        sum += payoffs[static_cast<std::size_t>(k - 1)];
        if (sum >= threshold * Rat(k)) return k;
    }
    return std::nullopt;
}

/// Best prefix mean within the first `max_len` payoffs: the largest
/// threshold at which the window starting here closes in time.
inline Rat best_window_value(const std::vector<Rat>& payoffs, int max_len) {
    if (payoffs.empty()) throw error("best_window_value: empty sequence");
    Rat sum(0);
    std::optional<Rat> best;
    int limit = std::min<int>(max_len, static_cast<int>(payoffs.size()));
    for (int k = 1; k <= limit; ++k) {
        sum += payoffs[static_cast<std::size_t>(k - 1)];
        Rat mean = sum / Rat(k);
        if (!best || mean > *best) best = mean;
    }
    return *best;
}

namespace detail {
// Payoffs read around the lasso cycle starting at offset i, `count` edges.
inline std::vector<Rat> cycle_window(const std::vector<Rat>& cyc, std::size_t i, std::size_t count) {
    std::vector<Rat> w;
    for (std::size_t k = 0; k < count; ++k) w.push_back(cyc[(i + k) % cyc.size()]);
    return w;
}
}  // namespace detail

/// The largest threshold the ultimately periodic play eventually sustains
/// with windows of length <= window_length: the minimum over cycle positions
/// of the best prefix mean within the window.
inline Rat fwmp_value_lasso(const Lasso& lasso, const StochasticGame& g, int window_length) {
    if (window_length < 1) throw error("window length must be >= 1");
    lasso.check(g);
    std::vector<Rat> cyc = lasso.cycle_payoffs(g);
    std::optional<Rat> worst;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        Rat v = best_window_value(detail::cycle_window(cyc, i, static_cast<std::size_t>(window_length)), window_length);
        if (!worst || v < *worst) worst = v;
    }
    return *worst;
}

/// Limit of fwmp_value_lasso as the window grows. On a periodic play every
/// anchored best-window mean is realized within two periods or dominated by
/// the cycle mean, so the scan is capped at 2 * period.
inline Rat bwmp_value_lasso(const Lasso& lasso, const StochasticGame& g) {
    lasso.check(g);
    std::vector<Rat> cyc = lasso.cycle_payoffs(g);
    Rat cycle_mean = infix_mean(cyc);
    std::optional<Rat> worst;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
        Rat best = cycle_mean;
        Rat sum(0);
        for (std::size_t k = 1; k <= 2 * cyc.size(); ++k) {
            sum += cyc[(i + k - 1) % cyc.size()];
            Rat mean = sum / Rat(static_cast<unsigned>(k));
            if (mean > best) best = mean;
        }
        if (!worst || best < *worst) worst = best;
    }
    return *worst;
}

/// All means of multisets of at most `window_length` payoffs drawn from the
/// edges inside `within`: a finite superset of the thresholds any play
/// confined to `within` can sustain. Sorted ascending.
inline std::vector<Rat> candidate_values(const StochasticGame& g, const std::vector<int>& within,
                                         int window_length) {
    std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
    for (int v : within) in[static_cast<std::size_t>(v)] = 1;
    std::set<Rat> payoffs;
    for (int v : within)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (in[static_cast<std::size_t>(e.to)]) payoffs.insert(e.payoff);
    std::vector<Rat> base(payoffs.begin(), payoffs.end());
    std::set<Rat> values;
    // Multisets of size j as nondecreasing index tuples.
    std::vector<std::size_t> pick;
    for (int j = 1; j <= window_length; ++j) {
        pick.assign(static_cast<std::size_t>(j), 0);
        if (base.empty()) break;
        while (true) {
            Rat sum(0);
            for (std::size_t idx : pick) sum += base[idx];
            values.insert(sum / Rat(j));
            int pos = j - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == base.size() - 1) --pos;
            if (pos < 0) break;
            std::size_t nv = pick[static_cast<std::size_t>(pos)] + 1;
            for (std::size_t t = static_cast<std::size_t>(pos); t < pick.size(); ++t) pick[t] = nv;
        }
    }
    return std::vector<Rat>(values.begin(), values.end());
}

/// Bad set for the window length 1 objective at `threshold`: Max vertices
/// whose every out-payoff is below it, Min vertices with some out-payoff
/// below it, and Random vertices with some out-payoff below it (a recurring
/// Random vertex fires each of its edges infinitely often almost surely, so
/// for measure-one analyses Random sides with Min here).
inline std::vector<int> fwmp1_cobuchi_target(const StochasticGame& g, const Rat& threshold) {
    std::vector<int> bad;
    for (int v = 0; v < g.size(); ++v) {
        bool all_bad = true, some_bad = false;
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)]) {
            if (e.payoff < threshold) some_bad = true;
            else all_bad = false;
        }
        if (g.owner(v) == Owner::Max ? all_bad : some_bad) bad.push_back(v);
    }
    return bad;
}

}  // namespace wmpg

#endif
