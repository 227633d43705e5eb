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

#ifndef WMPG_TESTS_FIXTURES_HPP
#define WMPG_TESTS_FIXTURES_HPP

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "wmpg/io.hpp"

namespace fixtures {

inline wmpg::StochasticGame load(const std::string& name) {
    std::ifstream in(std::string(WMPG_FIXTURE_DIR) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    return wmpg::parse_game(in);
}

inline wmpg::StochasticGame classes14() { return load("classes14.game"); }
inline wmpg::StochasticGame mec3() { return load("mec3.game"); }
inline wmpg::StochasticGame twocycle() { return load("twocycle.game"); }
inline wmpg::StochasticGame splitchoice() { return load("splitchoice.game"); }

inline std::vector<wmpg::Rat> classes14_values() {
    using wmpg::Rat;
    return {Rat(-2), Rat(-1), Rat(-1), Rat(-1), Rat(-1), Rat(0), Rat(0),
            Rat(0),  Rat(0),  Rat(1),  Rat(1),  Rat(2),  Rat(2), Rat(2)};
}

inline int vx(const wmpg::StochasticGame& g, const std::string& id) {
    int v = g.index_of(id);
    if (v < 0) throw std::runtime_error("no vertex " + id);
    return v;
}

inline std::vector<int> vxs(const wmpg::StochasticGame& g, const std::vector<std::string>& ids) {
    std::vector<int> out;
    for (const auto& id : ids) out.push_back(vx(g, id));
    return out;
}

/// Deterministic random game generator used across the oracle suites:
/// every vertex gets 1..max_degree successors, integer payoffs in
/// [-payoff_range, payoff_range], probabilities from {1/2, 1/3, 2/3}
/// normalized to sum to one (via equal shares when needed).
inline wmpg::StochasticGame random_game(std::uint64_t seed, int n, int max_degree = 3, int payoff_range = 2) {
    using namespace wmpg;
    std::mt19937_64 rng(seed);
    StochasticGame g;
    g.name = "rnd" + std::to_string(seed);
    std::uniform_int_distribution<int> owner_dist(0, 2);
    for (int v = 0; v < n; ++v) {
        Owner o = owner_dist(rng) == 0 ? Owner::Max : (owner_dist(rng) % 2 == 0 ? Owner::Min : Owner::Random);
        g.add_vertex("u" + std::to_string(v), o);
    }
    std::uniform_int_distribution<int> deg_dist(1, max_degree);
    std::uniform_int_distribution<int> tgt_dist(0, n - 1);
    std::uniform_int_distribution<int> pay_dist(-payoff_range, payoff_range);
    for (int v = 0; v < n; ++v) {
        int d = deg_dist(rng);
        std::vector<int> tgts;
        for (int i = 0; i < d; ++i) {
            int t = tgt_dist(rng);
            bool dup = false;
            for (int s : tgts) dup = dup || s == t;
            if (!dup) tgts.push_back(t);
        }
        if (g.owner(v) == Owner::Random) {
            if (tgts.size() == 2 && rng() % 2 == 0) {
                g.add_edge(v, tgts[0], Rat(pay_dist(rng)), Rat(1, 3));
                g.add_edge(v, tgts[1], Rat(pay_dist(rng)), Rat(2, 3));
            } else {
                for (int t : tgts) g.add_edge(v, t, Rat(pay_dist(rng)), Rat(1, static_cast<int>(tgts.size())));
            }
        } else {
            for (int t : tgts) g.add_edge(v, t, Rat(pay_dist(rng)));
        }
    }
    g.finalize();
    return g;
}


/// Variant with rational payoffs (denominators up to 3) and mixed
/// distributions; exercises the non-integer bound paths.
inline wmpg::StochasticGame rational_game(std::uint64_t seed, int n, int max_degree = 3) {
    using namespace wmpg;
    std::mt19937_64 rng(seed);
    StochasticGame g;
    g.name = "rq" + std::to_string(seed);
    for (int v = 0; v < n; ++v) {
        int o = static_cast<int>(rng() % 3);
        g.add_vertex("u" + std::to_string(v), o == 0 ? Owner::Max : o == 1 ? Owner::Min : Owner::Random);
    }
    for (int v = 0; v < n; ++v) {
        int d = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_degree));
        std::vector<int> tg;
        for (int i = 0; i < d; ++i) {
            int t = static_cast<int>(rng() % static_cast<unsigned>(n));
            bool dup = false;
            for (int s : tg) dup = dup || s == t;
            if (!dup) tg.push_back(t);
        }
        auto pay = [&]() { return Rat(static_cast<int>(rng() % 9) - 4, 1 + static_cast<int>(rng() % 3)); };
        if (g.owner(v) == Owner::Random) {
            if (tg.size() == 1) g.add_edge(v, tg[0], pay(), Rat(1));
            else if (tg.size() == 2) {
                g.add_edge(v, tg[0], pay(), Rat(1, 3));
                g.add_edge(v, tg[1], pay(), Rat(2, 3));
            } else {
                g.add_edge(v, tg[0], pay(), Rat(1, 2));
                g.add_edge(v, tg[1], pay(), Rat(1, 3));
                g.add_edge(v, tg[2], pay(), Rat(1, 6));
            }
        } else {
            for (int t : tg) g.add_edge(v, t, pay());
        }
    }
    g.finalize();
    return g;
}

}  // namespace fixtures

#endif
