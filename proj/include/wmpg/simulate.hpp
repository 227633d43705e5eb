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

#ifndef WMPG_SIMULATE_HPP
#define WMPG_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wmpg/game.hpp"
#include "wmpg/strategy.hpp"
#include "wmpg/window.hpp"

namespace wmpg {

struct MonteCarloResult {
    Rat estimate;
    Rat radius;      // 95% Hoeffding radius, rounded up
    int episodes = 0;
    int horizon = 0;
    int discard = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4ecb9aa9f2d38ULL;
    return x ^ (x >> 31);
}

/// Samples a successor at a Random vertex exactly: probabilities are scaled
/// to a common denominator and an integer is drawn uniformly below it.
inline int sample_successor(const StochasticGame& g, int v, std::mt19937_64& rng) {
    const auto& edges = g.out[static_cast<std::size_t>(v)];
    Int common = 1;
    for (const HalfEdge& e : edges) common = int_lcm(common, den(e.prob));
    // Common denominators stay tiny at desk scale; draw within 64 bits.
    unsigned long long c = common.convert_to<unsigned long long>();
    std::uniform_int_distribution<unsigned long long> dist(0, c - 1);
    unsigned long long draw = dist(rng);
    unsigned long long acc = 0;
    for (const HalfEdge& e : edges) {
        acc += (num(e.prob) * (common / den(e.prob))).convert_to<unsigned long long>();
        if (draw < acc) return e.to;
    }
    return edges.back().to;
}

/// Windowed value of the recorded payoff suffix after the discarded prefix.
inline Rat windowed_value(const std::vector<Rat>& payoffs, ObjectiveKind kind, int window_length, int discard) {
    int n = static_cast<int>(payoffs.size());
    std::optional<Rat> worst;
    int limit = kind == ObjectiveKind::Fwmp ? window_length : n;
    for (int i = discard; i < n; ++i) {
        Rat sum(0);
        std::optional<Rat> best;
        for (int k = 1; k <= limit && i + k <= n; ++k) {
            sum += payoffs[static_cast<std::size_t>(i + k - 1)];
            Rat mean = sum / Rat(k);
            if (!best || mean > *best) best = mean;
        }
        if (!best) break;  // tail shorter than one window
        if (!worst || *best < *worst) worst = *best;
    }
    if (!worst) throw error("windowed_value: horizon too short");
    return *worst;
}

}  // namespace detail

/// Seeded Monte-Carlo estimate of the expected windowed value under a fixed
/// strategy profile. Episode seeds are derived from the base seed and the
/// episode index, so results are reproducible and independent of execution
/// order. The radius is the two-sided 95% Hoeffding bound for values in
/// [-K, K].
inline MonteCarloResult monte_carlo_value(const StochasticGame& g, const StrategyMachine& sigma_max,
                                          const StrategyMachine& sigma_min, int start, ObjectiveKind kind,
                                          int window_length, int episodes, std::uint64_t seed,
                                          int horizon = 0) {
    sigma_max.check(g);
    sigma_min.check(g);
    MonteCarloResult res;
    res.episodes = episodes;
    res.discard = 10 * g.size();
    res.horizon = horizon > 0 ? horizon : 50 * g.size() * std::max(1, window_length);
    if (res.horizon <= res.discard + std::max(1, window_length))
        res.horizon = res.discard + 10 * std::max(1, window_length);

    Rat total(0);
    Rat maxabs(0);
    for (int v = 0; v < g.size(); ++v)
        for (const HalfEdge& e : g.out[static_cast<std::size_t>(v)])
            if (rat_abs(e.payoff) > maxabs) maxabs = rat_abs(e.payoff);

    for (int ep = 0; ep < episodes; ++ep) {
        std::mt19937_64 rng(detail::splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(ep + 1))));
        int v = start, qmax = sigma_max.initial, qmin = sigma_min.initial;
        std::vector<Rat> payoffs;
        payoffs.reserve(static_cast<std::size_t>(res.horizon));
        for (int step = 0; step < res.horizon; ++step) {
            int nxt;
            if (g.owner(v) == Owner::Random) nxt = detail::sample_successor(g, v, rng);
            else if (g.owner(v) == Owner::Max) nxt = sigma_max.output(qmax, v);
            else nxt = sigma_min.output(qmin, v);
            payoffs.push_back(g.payoff(v, nxt));
            qmax = sigma_max.step(qmax, v);
            qmin = sigma_min.step(qmin, v);
            v = nxt;
        }
        total += detail::windowed_value(payoffs, kind, window_length, res.discard);
    }
    res.estimate = total / Rat(episodes);
    // Hoeffding at delta = 0.05 over range 2K; computed in floating point
    // and rounded up to a millionth.
    double range = static_cast<double>(num(maxabs).convert_to<double>() / den(maxabs).convert_to<double>());
    double t = 2.0 * range * std::sqrt(std::log(2.0 / 0.05) / (2.0 * episodes));
    res.radius = Rat(static_cast<long long>(std::ceil(t * 1e6)), 1000000);
    return res;
}

}  // namespace wmpg

#endif
